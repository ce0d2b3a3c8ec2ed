"""Critical-line zeros from sign changes of Re and Im of zeta(1/2 + iy).

A sign change of either component is bisected down to a bracket narrower
than 1e-12. The refined ordinate counts as a zeta zero only if the full
modulus is below 1e-8 there; otherwise it is a zero of one component only.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import LostBracket
from .zeta_engine import DEFAULT_CONFIG, EvalConfig, zeta, zeta_array

ZERO_THRESHOLD = 1e-8
BRACKET_WIDTH = 1e-12
MAX_TRIVIAL_K = 10


class Component(enum.Enum):
    RealPart = "RealPart"
    ImagPart = "ImagPart"

    def of(self, z):
        return z.real if self is Component.RealPart else z.imag


class ZeroKind(enum.Enum):
    ZetaZero = "ZetaZero"
    ComponentZeroOnly = "ComponentZeroOnly"


@dataclass(frozen=True)
class Bracket:
    y_lo: float
    y_hi: float
    component: Component
    value_lo: float
    value_hi: float

    def __post_init__(self):
        if not self.y_lo < self.y_hi:
            raise ValueError(f"bracket needs y_lo < y_hi, got [{self.y_lo}, {self.y_hi}]")
        if self.value_lo == 0.0 or self.value_hi == 0.0 or (self.value_lo > 0) == (self.value_hi > 0):
            raise ValueError(f"bracket values must be nonzero with opposite signs: {self.value_lo}, {self.value_hi}")

    def mirrored(self) -> "Bracket":
        # Re zeta(1/2+iy) is even in y, Im is odd
        sign = 1.0 if self.component is Component.RealPart else -1.0
        return Bracket(-self.y_hi, -self.y_lo, self.component, sign * self.value_hi, sign * self.value_lo)


@dataclass(frozen=True)
class ZeroRecord:
    y: float
    zeta_value: complex
    zeta_residual: float
    reflection_residual: float
    kind: ZeroKind
    component: Component


def critical_line(y) -> np.ndarray:
    return 0.5 + 1j * np.asarray(y, dtype=float)


def sample_points(y_min: float, y_max: float, step: float) -> np.ndarray:
    count = math.floor((y_max - y_min) / step + 1e-9)
    return y_min + step * np.arange(count + 1)


def bracket_sign_changes(y_min: float, y_max: float, step: float, component: Component,
                         cfg: EvalConfig = DEFAULT_CONFIG) -> list[Bracket]:
    """Sign changes of one component of zeta(1/2+iy) on the samples y_min + k*step.

    A sample where the component is exactly zero is stepped over, so the
    bracket spans its two neighbours. Samples failing the accuracy target
    break the chain.
    """
    if not y_min < y_max:
        raise ValueError(f"need y_min < y_max, got {y_min}, {y_max}")
    if not 0.0 < step <= 0.5:
        raise ValueError(f"step must lie in (0, 0.5], got {step}")
    ys = sample_points(y_min, y_max, step)
    values, errors = zeta_array(critical_line(ys), cfg)
    comp = values.real if component is Component.RealPart else values.imag
    brackets = []
    last = None
    for y, v, e in zip(ys, comp, errors):
        if not e <= cfg.target_abs_error:
            last = None
            continue
        if v == 0.0:
            continue
        if last is not None and (last[1] > 0) != (v > 0):
            brackets.append(Bracket(float(last[0]), float(y), component, float(last[1]), float(v)))
        last = (y, v)
    return brackets


def _component_at(y: float, component: Component, cfg: EvalConfig) -> float:
    return component.of(zeta(complex(0.5, y), cfg))


def refine_zero(b: Bracket, cfg: EvalConfig = DEFAULT_CONFIG) -> ZeroRecord:
    """Bisect a bracket to width < 1e-12 and classify the midpoint."""
    lo, hi = b.y_lo, b.y_hi
    f_lo = _component_at(lo, b.component, cfg)
    f_hi = _component_at(hi, b.component, cfg)
    if f_lo == 0.0 or f_hi == 0.0 or (f_lo > 0) == (f_hi > 0):
        raise LostBracket(f"no sign change of {b.component.value} on [{lo!r}, {hi!r}] "
                          f"after re-evaluation ({f_lo!r}, {f_hi!r})")
    y = 0.5 * (lo + hi)
    while hi - lo >= BRACKET_WIDTH:
        y = 0.5 * (lo + hi)
        if y <= lo or y >= hi:
            break
        f_mid = _component_at(y, b.component, cfg)
        if f_mid == 0.0:
            lo = hi = y
            break
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = y, f_mid
        else:
            hi = y
    y = 0.5 * (lo + hi)
    value = zeta(complex(0.5, y), cfg)
    residual = abs(value)
    reflection = abs(zeta(1.0 - complex(0.5, y), cfg))
    kind = ZeroKind.ZetaZero if residual < ZERO_THRESHOLD else ZeroKind.ComponentZeroOnly
    return ZeroRecord(y, value, residual, reflection, kind, b.component)


def _refine_task(args):
    bracket, cfg = args
    return refine_zero(bracket, cfg)


def find_zeros(y_min: float, y_max: float, step: float = 0.05, cfg: EvalConfig = DEFAULT_CONFIG,
               workers: int = 1) -> list[ZeroRecord]:
    """All component zeros on [y_min, y_max], sorted by y.

    A zeta zero is found by both components; the duplicate from the
    imaginary part is dropped.
    """
    brackets = (bracket_sign_changes(y_min, y_max, step, Component.RealPart, cfg)
                + bracket_sign_changes(y_min, y_max, step, Component.ImagPart, cfg))
    tasks = [(b, cfg) for b in brackets]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_refine_task, tasks))
    else:
        records = [_refine_task(t) for t in tasks]
    records.sort(key=lambda r: (r.y, r.component.value))
    merged: list[ZeroRecord] = []
    for rec in records:
        if (merged and rec.kind is ZeroKind.ZetaZero and merged[-1].kind is ZeroKind.ZetaZero
                and abs(rec.y - merged[-1].y) < 1e-9):
            continue
        merged.append(rec)
    return merged


def zeta_zeros(records: list[ZeroRecord]) -> list[ZeroRecord]:
    return [r for r in records if r.kind is ZeroKind.ZetaZero]


def trivial_zero_residuals(k_max: int, cfg: EvalConfig = DEFAULT_CONFIG) -> list[float]:
    """|zeta(-2k)| for k = 1..k_max (k_max <= 10)."""
    if int(k_max) != k_max or not 1 <= k_max <= MAX_TRIVIAL_K:
        raise ValueError(f"k_max must be an integer in [1, {MAX_TRIVIAL_K}], got {k_max}")
    return [abs(zeta(-2.0 * k, cfg)) for k in range(1, k_max + 1)]


def zeros_csv_text(records: list[ZeroRecord]) -> str:
    lines = ["y,re_zeta,im_zeta,abs_zeta,kind,reflection_residual"]
    for r in records:
        lines.append(f"{r.y:.17g},{r.zeta_value.real:.17g},{r.zeta_value.imag:.17g},"
                     f"{r.zeta_residual:.17g},{r.kind.value},{r.reflection_residual:.17g}")
    return "\n".join(lines) + "\n"
