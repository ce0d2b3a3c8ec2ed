"""Exception types raised by the critzeta modules.

Every error carries the name of the module that raised it so the CLI can
emit a machine-readable diagnostic line.
"""

from __future__ import annotations


class ZetaError(Exception):
    module = "critzeta"


class PoleError(ZetaError, ValueError):
    """Argument sits on (or within 1e-12 of) a pole of the gamma function."""

    module = "special_functions"


class ZeroArgument(ZetaError, ValueError):
    """sin(pi*s/2) vanishes: s is an even integer (a trivial-zero factor)."""

    module = "special_functions"


class PoleProximity(ZetaError, ValueError):
    module = "zeta_engine"


class DomainError(ZetaError, ValueError):
    module = "zeta_engine"


class AccuracyLoss(ZetaError, ArithmeticError):
    """Internal error estimate exceeded the configured target.

    The best-effort value is attached as ``value``; ``estimate`` holds the
    error bound that triggered the failure.
    """

    module = "zeta_engine"

    def __init__(self, message: str, value: complex, estimate: float):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class DivisorVanishes(ZetaError, ArithmeticError):
    module = "zeta_engine"


class CorruptCheckpoint(ZetaError, ValueError):
    module = "landscape_scanner"


class LostBracket(ZetaError, ArithmeticError):
    module = "zero_finder"


class NearZeroInput(ZetaError, ValueError):
    module = "constraint_checker"
