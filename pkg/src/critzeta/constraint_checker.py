"""The unit-modulus factor f(y) linking zeta(1/2+iy) to zeta(1/2-iy).

    f(y) = sqrt(2/pi) (2 pi)^{iy} sin(pi/4 + i y pi/2) Gamma(1/2 - iy)

so that zeta(1/2+iy) = f(y) zeta(1/2-iy). With a + bi = zeta(1/2+iy) and
f = c + di, the ordinates where f hits -1, +1, +i or -i force a = 0, b = 0,
a = b or a = -b respectively (whenever zeta(1/2+iy) != 0).
"""

from __future__ import annotations

import cmath
import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import special_functions as sf
from .errors import NearZeroInput
from .zero_finder import ZeroKind, ZeroRecord, sample_points
from .zeta_engine import DEFAULT_CONFIG, EvalConfig, zeta

_HALF_LOG_2_OVER_PI = 0.5 * math.log(2.0 / math.pi)
_LOG_2PI = math.log(2.0 * math.pi)
NEAR_ZERO = 1e-8
CASE_STEP = 0.01
CASE_WIDTH = 1e-13


class Case(enum.Enum):
    A = "A"  # c = -1, d = 0  ->  Re zeta = 0
    B = "B"  # c = +1, d = 0  ->  Im zeta = 0
    C = "C"  # c = 0, d = +1  ->  Re zeta = Im zeta
    D = "D"  # c = 0, d = -1  ->  Re zeta = -Im zeta

    @property
    def target(self) -> complex:
        return {"A": -1.0 + 0j, "B": 1.0 + 0j, "C": 1j, "D": -1j}[self.value]

    def implied_residual(self, z: complex) -> float:
        a, b = z.real, z.imag
        return {"A": abs(a), "B": abs(b), "C": abs(a - b), "D": abs(a + b)}[self.value]


@dataclass(frozen=True)
class CasePoint:
    y: float
    case_id: Case
    f_value: complex
    f_residual: float
    zeta_value: complex
    implied_residual: float

    @property
    def near_zeta_zero(self) -> bool:
        return abs(self.zeta_value) <= NEAR_ZERO


def chi_factor(y: float, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """f(y), assembled as a single exponential of summed logarithms."""
    y = float(y)
    if y < 0.0:
        return chi_factor(-y, cfg).conjugate()
    s = complex(0.5, y)
    log_f = _HALF_LOG_2_OVER_PI + 1j * y * _LOG_2PI + sf.log_sin_half_pi(s) + sf.log_gamma(1.0 - s)
    return cmath.exp(log_f)


def ratio_identity_residual(y: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|zeta(1/2+iy) - f(y) zeta(1/2-iy)|; needs |zeta(1/2+iy)| > 1e-8."""
    z = zeta(complex(0.5, y), cfg)
    if abs(z) <= NEAR_ZERO:
        raise NearZeroInput(f"|zeta(1/2+{y!r}i)| = {abs(z):.3g} is too close to zero for the ratio identity")
    return abs(z - chi_factor(y, cfg) * zeta(complex(0.5, -y), cfg))


def _case_function(case: Case):
    # A/B are roots of d = Im f, C/D roots of c = Re f
    if case in (Case.A, Case.B):
        return lambda f: f.imag
    return lambda f: f.real


def _case_filter(case: Case, f: complex) -> bool:
    return {"A": f.real < 0, "B": f.real > 0, "C": f.imag > 0, "D": f.imag < 0}[case.value]


def _bisect(g, lo: float, hi: float, g_lo: float) -> float:
    while hi - lo >= CASE_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g_mid = g(mid)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _case_point(y: float, case: Case, cfg: EvalConfig) -> CasePoint:
    f = chi_factor(y, cfg)
    z = zeta(complex(0.5, y), cfg)
    return CasePoint(y, case, f, abs(f - case.target), z, case.implied_residual(z))


def _case_task(args):
    y, case, cfg = args
    return _case_point(y, case, cfg)


def case_roots(y_min: float, y_max: float, case: Case, cfg: EvalConfig = DEFAULT_CONFIG,
               step: float = CASE_STEP) -> list[float]:
    """Ordinates in [y_min, y_max] where f(y) equals the case target.

    Roots of the relevant component of f are bracketed on a ``step`` grid and
    bisected; a sample where that component is exactly zero is taken as a
    root as it stands.
    """
    if not y_min < y_max:
        raise ValueError(f"need y_min < y_max, got {y_min}, {y_max}")
    component = _case_function(case)

    def g(y):
        return component(chi_factor(y, cfg))

    ys = sample_points(y_min, y_max, step)
    gs = [g(y) for y in ys]
    roots = []
    prev = None
    for i, (y, v) in enumerate(zip(ys, gs)):
        if v == 0.0:
            roots.append(float(y))
            prev = None
            continue
        if prev is not None and (gs[prev] > 0) != (v > 0):
            roots.append(_bisect(g, float(ys[prev]), float(y), gs[prev]))
        prev = i
    return [y for y in roots if _case_filter(case, chi_factor(y, cfg))]


def locate_case_points(y_min: float, y_max: float, case_id: Case, cfg: EvalConfig = DEFAULT_CONFIG,
                       step: float = CASE_STEP, workers: int = 1) -> list[CasePoint]:
    """Case points of one type on [y_min, y_max], sorted by y."""
    tasks = [(y, case_id, cfg) for y in case_roots(y_min, y_max, case_id, cfg, step)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_case_task, tasks))
    else:
        points = [_case_task(t) for t in tasks]
    return sorted(points, key=lambda p: p.y)


def classify_zero_against_cases(z: ZeroRecord, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Distance of f at a zeta zero from the nearest of -1, +1, i, -i."""
    if z.kind is not ZeroKind.ZetaZero:
        raise ValueError(f"classify_zero_against_cases needs a ZetaZero record, got {z.kind.value}")
    f = chi_factor(z.y, cfg)
    return min(abs(f - c.target) for c in Case)


def cases_csv_text(points: list[CasePoint]) -> str:
    lines = ["y,re_f,im_f,abs_f,case,f_residual,implied_residual"]
    for p in points:
        lines.append(f"{p.y:.17g},{p.f_value.real:.17g},{p.f_value.imag:.17g},{abs(p.f_value):.17g},"
                     f"{p.case_id.value},{p.f_residual:.17g},{p.implied_residual:.17g}")
    return "\n".join(lines) + "\n"

