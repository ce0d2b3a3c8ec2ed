"""Double-precision Riemann zeta toolkit: evaluation, landscape scans, zeros, case points."""

from .errors import (AccuracyLoss, CorruptCheckpoint, DivisorVanishes, DomainError, LostBracket, NearZeroInput,
                     PoleError, PoleProximity, ZeroArgument, ZetaError)
from .zeta_engine import DEFAULT_CONFIG, EvalConfig, zeta, zeta_prime

__version__ = "0.1.0"

__all__ = [
    "AccuracyLoss", "CorruptCheckpoint", "DivisorVanishes", "DomainError", "LostBracket", "NearZeroInput",
    "PoleError", "PoleProximity", "ZeroArgument", "ZetaError", "DEFAULT_CONFIG", "EvalConfig", "zeta",
    "zeta_prime",
]
