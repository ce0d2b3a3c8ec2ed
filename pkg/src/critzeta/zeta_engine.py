"""Riemann zeta evaluation on and around the critical strip.

zeta(s) is computed by Euler-Maclaurin summation of the Dirichlet series for
Re(s) >= 0 and through the functional equation for Re(s) < 0. The array
routines (``zeta_array``, ``zeta_prime_array``) are the single code path; the
scalar functions wrap them, so a scan and a pointwise call agree bit-for-bit.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import astuple, dataclass
from decimal import Context, Decimal
from functools import lru_cache

import numpy as np

from . import special_functions as sf
from .errors import AccuracyLoss, DivisorVanishes, DomainError, PoleProximity, ZeroArgument

_EPS = np.finfo(float).eps
_LOG2 = math.log(2.0)
_LOGPI = math.log(math.pi)
_LOG2PI = math.log(2.0 * math.pi)
INV_PI = 1.0 / math.pi
_REFLECT_MIN_MODULUS = 0.5


@dataclass(frozen=True)
class EvalConfig:
    """Truncation and tolerance knobs shared by every evaluation."""

    series_cutoff: int = 64
    correction_order: int = 12
    target_abs_error: float = 1e-12
    derivative_step: float = 1e-6
    pole_exclusion_radius: float = 1e-3

    def __post_init__(self):
        if int(self.series_cutoff) != self.series_cutoff or self.series_cutoff < 16:
            raise ValueError(f"series_cutoff must be an integer >= 16, got {self.series_cutoff}")
        if int(self.correction_order) != self.correction_order or self.correction_order < 4:
            raise ValueError(f"correction_order must be an integer >= 4, got {self.correction_order}")
        if not 0.0 < self.target_abs_error < 1e-6:
            raise ValueError(f"target_abs_error must lie in (0, 1e-6), got {self.target_abs_error}")
        if not 0.0 < self.derivative_step < 1e-3:
            raise ValueError(f"derivative_step must lie in (0, 1e-3), got {self.derivative_step}")
        if not self.pole_exclusion_radius > 0.0:
            raise ValueError(f"pole_exclusion_radius must be positive, got {self.pole_exclusion_radius}")

    def fingerprint(self) -> str:
        return "|".join(repr(v) for v in astuple(self))


DEFAULT_CONFIG = EvalConfig()


@lru_cache(maxsize=None)
def _em_coefficients(order: int) -> np.ndarray:
    # B_{2k}/(2k)! for k = 1..order+1; the last one feeds the error bound.
    return np.array([float(sf.bernoulli(2 * k) / math.factorial(2 * k)) for k in range(1, order + 2)])


def main_sum_length(im: float, cfg: EvalConfig) -> int:
    return max(cfg.series_cutoff, math.ceil(1.3 * abs(im)))


# 2*pi split into 30-bit, 30-bit and remainder parts (Cody-Waite reduction);
# k * _TWO_PI_A and k * _TWO_PI_B are exact for |k| < 2**23.
_TWO_PI = Decimal("6.283185307179586476925286766559005768394338798750211641949889")
_TWO_PI_A = math.ldexp(round(math.ldexp(float(_TWO_PI), 27)), -27)
_TWO_PI_B = math.ldexp(round(math.ldexp(float(_TWO_PI - Decimal(_TWO_PI_A)), 57)), -57)
_TWO_PI_C = float(_TWO_PI - Decimal(_TWO_PI_A) - Decimal(_TWO_PI_B))
_SPLITTER = 134217729.0  # 2**27 + 1
_MAX_PHASE = 2.0**23 * 6.0


@lru_cache(maxsize=None)
def _log_table(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """ln(n) for n = 1..n_max as a rounded double plus its residual."""
    ctx = Context(prec=40)
    hi = np.empty(n_max)
    lo = np.empty(n_max)
    for n in range(1, n_max + 1):
        exact = ctx.ln(Decimal(n))
        hi[n - 1] = float(exact)
        lo[n - 1] = float(exact - Decimal(hi[n - 1]))
    return hi, lo


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _reduced_phase(t: np.ndarray, log_hi: np.ndarray, log_lo: np.ndarray) -> np.ndarray:
    """t*ln(n) reduced mod 2*pi to ~1 ulp of pi (outer product t x n).

    A plain double product loses eps*t*ln(n) of absolute phase, which at
    |t| ~ 200 is already 1e-13 per term.
    """
    t = t[:, None]
    prod = t * log_hi
    t_hi, t_lo = _split(t)
    l_hi, l_lo = _split(log_hi)
    prod_err = ((t_hi * l_hi - prod) + t_hi * l_lo + t_lo * l_hi) + t_lo * l_lo
    k = np.rint(prod / float(_TWO_PI))
    r = (prod - k * _TWO_PI_A) - k * _TWO_PI_B
    return r + (prod_err + t * log_lo - k * _TWO_PI_C)


def _em_group(s: np.ndarray, n_terms: int, order: int, derivative: bool):
    """Euler-Maclaurin for one block of points sharing the main-sum length.

    Returns (zeta, zeta_err) or, with ``derivative``, (zeta', zeta'_err).
    """
    log_hi, log_lo = _log_table(n_terms)
    logn = log_hi[:-1]
    sigma = s.real
    t = s.imag
    phase = _reduced_phase(t, log_hi, log_lo)  # last column is n = N
    modulus = np.exp(-np.outer(sigma, log_hi))
    n_pow = modulus * (np.cos(phase) - 1j * np.sin(phase))  # n^{-s}
    powers = n_pow[:, :-1]
    abs_main = modulus[:, :-1]
    log_n = log_hi[-1]
    n_neg_s = n_pow[:, -1]  # N^{-s}
    sm1 = s - 1.0
    head = n_terms * n_neg_s / sm1
    if derivative:
        total = -(powers * logn).sum(axis=1)
        total += -log_n * head - head / sm1 - 0.5 * log_n * n_neg_s
        rounding = (abs_main * logn).sum(axis=1) + np.abs(head) * (log_n + 1.0 / np.abs(sm1))
    else:
        total = powers.sum(axis=1)
        total += head + 0.5 * n_neg_s
        rounding = abs_main.sum(axis=1) + np.abs(head)

    coef = _em_coefficients(order)
    poch = s.copy()  # (s)_{2k-1}
    dpoch = np.ones_like(s)
    npow = n_neg_s / n_terms  # N^{-s-2k+1}
    inv_n2 = 1.0 / (n_terms * n_terms)
    for k in range(1, order + 1):
        c = coef[k - 1]
        if derivative:
            total += c * npow * (dpoch - log_n * poch)
        else:
            total += c * poch * npow
        a = s + (2 * k - 1)
        b = s + 2 * k
        dpoch = dpoch * a * b + poch * (a + b)
        poch = poch * a * b
        npow = npow * inv_n2
    c = coef[order]
    ratio = np.abs(s + 2 * order + 1) / (sigma + 2 * order + 1)
    if derivative:
        tail = np.abs(c * npow) * (np.abs(dpoch) + log_n * np.abs(poch)) * ratio
    else:
        tail = np.abs(c * poch * npow) * ratio
    return total, tail + 4.0 * _EPS * rounding


def _em(s: np.ndarray, cfg: EvalConfig, derivative: bool = False):
    values = np.empty(s.shape, dtype=complex)
    errors = np.empty(s.shape, dtype=float)
    lengths = np.array([main_sum_length(v, cfg) for v in s.imag], dtype=int)
    for n_terms in np.unique(lengths):
        idx = np.nonzero(lengths == n_terms)[0]
        v, e = _em_group(s[idx], int(n_terms), cfg.correction_order, derivative)
        values[idx] = v
        errors[idx] = e
    return values, errors


def _log_chi(s: complex) -> complex:
    """log of 2^s pi^(s-1) sin(pi s/2) Gamma(1-s); raises ZeroArgument at even s."""
    return s * _LOG2 + (s - 1.0) * _LOGPI + sf.log_sin_half_pi(s) + sf.log_gamma(1.0 - s)


def _upper(s) -> tuple[np.ndarray, np.ndarray]:
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    flip = s.imag < 0
    return np.where(flip, s.conjugate(), s), flip


def _evaluate(s, cfg: EvalConfig, derivative: bool):
    s_up, flip = _upper(s)
    values = np.full(s_up.shape, np.nan + 0j)
    errors = np.full(s_up.shape, np.inf)
    ok = np.abs(s_up - 1.0) > cfg.pole_exclusion_radius
    # Near s = 0 the mirror 1 - s sits next to the pole, where rounding 1 - s
    # is amplified by 1/|s|; the direct sum is accurate there instead.
    reflected = ok & (s_up.real < 0.0) & (np.abs(s_up) > _REFLECT_MIN_MODULUS)
    direct = ok & ~reflected

    if direct.any():
        v, e = _em(s_up[direct], cfg, derivative)
        values[direct] = v
        errors[direct] = e
    if reflected.any():
        idx = np.nonzero(reflected)[0]
        mirror = 1.0 - s_up[idx]
        z1, e1 = _em(mirror, cfg, False)
        if derivative:
            d1, de1 = _em(mirror, cfg, True)
        for j, i in enumerate(idx):
            si = complex(s_up[i])
            if derivative:
                values[i], errors[i] = _reflected_prime(si, complex(z1[j]), e1[j], complex(d1[j]), de1[j])
            else:
                values[i], errors[i] = _reflected_value(si, complex(z1[j]), e1[j])
    values = np.where(flip, values.conjugate(), values)
    return values, errors


def _reflected_value(s: complex, z1: complex, e1: float):
    try:
        lc = _log_chi(s)
    except ZeroArgument:
        return 0j, 0.0
    chi = cmath.exp(lc)
    value = chi * z1
    return value, abs(chi) * e1 + abs(value) * _chi_rounding(s, lc)


def _chi_rounding(s: complex, lc: complex) -> float:
    # relative error of exp(log chi); the log-gamma phase grows like |s| ln|s|
    return 32.0 * _EPS * (abs(lc) + abs(s) * math.log(abs(s) + 2.0) + 1.0)


def _reflected_prime(s: complex, z1: complex, e1: float, d1: complex, de1: float):
    k = round(-s.real / 2.0)
    if sf._near_even_integer(s):
        # zeta'(-2k) = (-1)^k (2k)! zeta(2k+1) / (2 (2 pi)^(2k))
        scale = (-1) ** k * math.exp(math.lgamma(2 * k + 1) - 2 * k * _LOG2PI) / 2.0
        return scale * z1, abs(scale) * e1
    lc = _log_chi(s)
    chi = cmath.exp(lc)
    log_deriv = _LOG2PI + 0.5 * math.pi * sf.cot(0.5 * math.pi * s) - sf.digamma(1.0 - s)
    value = chi * (log_deriv * z1 - d1)
    err = abs(chi) * ((abs(log_deriv) * e1 + de1) + (abs(log_deriv * z1) + abs(d1)) * _chi_rounding(s, lc))
    return value, err


def zeta_array(s, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised zeta with per-point error estimates.

    Points inside the pole exclusion disc come back as NaN with an infinite
    error estimate; callers decide whether to mask or raise.
    """
    return _evaluate(s, cfg, derivative=False)


def zeta_prime_array(s, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    return _evaluate(s, cfg, derivative=True)


def _scalar(s, cfg: EvalConfig, derivative: bool) -> complex:
    s = sf._as_complex(s)
    if abs(s - 1.0) <= cfg.pole_exclusion_radius:
        raise PoleProximity(f"|s - 1| = {abs(s - 1.0):.3g} <= {cfg.pole_exclusion_radius:g} at s={s!r}")
    v, e = _evaluate(s, cfg, derivative)
    value, err = complex(v[0]), float(e[0])
    if not err <= cfg.target_abs_error:
        what = "zeta'" if derivative else "zeta"
        raise AccuracyLoss(f"{what}({s!r}): error estimate {err:.3g} exceeds target {cfg.target_abs_error:g}",
                           value, err)
    return value


def zeta(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Analytically continued zeta(s).

    >>> round(zeta(2).real, 10)
    1.6449340668
    """
    return _scalar(s, cfg, derivative=False)


def zeta_best_effort(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta(s) without the accuracy gate (pole exclusion still applies)."""
    try:
        return zeta(s, cfg)
    except AccuracyLoss as exc:
        return exc.value


def zeta_prime(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """zeta'(s) from the term-differentiated Euler-Maclaurin sum."""
    return _scalar(s, cfg, derivative=True)


def functional_rhs(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s), prefactor in log space."""
    s = sf._as_complex(s)
    try:
        lc = _log_chi(s)
    except ZeroArgument:
        return 0j
    return cmath.exp(lc) * zeta(1.0 - s, cfg)


_primes_lock = threading.Lock()
_primes: np.ndarray = np.array([], dtype=np.int64)
_primes_limit = 1


def primes_up_to(n: int) -> np.ndarray:
    """Primes <= n from a sieve cached per process (grown on demand)."""
    global _primes, _primes_limit
    with _primes_lock:
        if n > _primes_limit:
            limit = max(n, 2 * _primes_limit)
            sieve = np.ones(limit + 1, dtype=bool)
            sieve[:2] = False
            for p in range(2, math.isqrt(limit) + 1):
                if sieve[p]:
                    sieve[p * p :: p] = False
            _primes = np.nonzero(sieve)[0]
            _primes_limit = limit
        primes = _primes
    return primes[: np.searchsorted(primes, n, side="right")]


def euler_product(s, p_max: int) -> complex:
    """Partial Euler product over primes p <= p_max (Re(s) > 1 only)."""
    s = sf._as_complex(s)
    if not s.real > 1.0:
        raise DomainError(f"Euler product needs Re(s) > 1, got s={s!r}")
    if p_max < 2:
        raise ValueError(f"p_max must be >= 2, got {p_max}")
    p = primes_up_to(int(p_max)).astype(float)
    flip = s.imag < 0
    su = s.conjugate() if flip else s
    log_terms = -np.log1p(-np.exp(-su * np.log(p)))
    value = complex(np.exp(log_terms.sum()))
    return value.conjugate() if flip else value


def _chi_parts(s: complex):
    # log[2^s pi^(s-1) Gamma(1-s)] without the sine, and log sin(pi s/2)
    log_base = s * _LOG2 + (s - 1.0) * _LOGPI + sf.log_gamma(1.0 - s)
    return log_base, sf.log_sin_half_pi(s)


def functional_derivative_terms(s, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[complex, ...]:
    """The five summands of d/ds of the functional-equation right-hand side.

    In order: the zeta'(1-s) term, the cosine term, the ln 2 term, the ln pi
    term and the digamma term.
    """
    s = sf._as_complex(s)
    if not 0.0 < s.real < 1.0:
        raise DomainError(f"derivative expression needs 0 < Re(s) < 1, got s={s!r}")
    log_base, log_sin = _chi_parts(s)
    z1 = zeta(1.0 - s, cfg)
    d1 = zeta_prime(1.0 - s, cfg)
    psi = sf.digamma(1.0 - s)
    sin_base = cmath.exp(log_base + log_sin)  # 2^s pi^(s-1) sin Gamma
    # 2^(s-1) pi^s cos(pi s/2) Gamma(1-s), with cos = sin * cot
    cos_base = cmath.exp((s - 1.0) * _LOG2 + s * _LOGPI + sf.log_gamma(1.0 - s) + log_sin) * sf.cot(0.5 * math.pi * s)
    return (
        -sin_base * d1,
        cos_base * z1,
        sin_base * _LOG2 * z1,
        sin_base * _LOGPI * z1,
        -sin_base * psi * z1,
    )


def functional_derivative_rhs(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Sum of the five-term derivative of the functional equation."""
    t = functional_derivative_terms(s, cfg)
    return t[0] + t[1] + t[2] + t[3] + t[4]


def functional_derivative_factored(s, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """(2pi)^(s-1) Gamma(1-s) [zeta(1-s)(pi cos + 2 ln(2pi) sin - 2 sin psi) - 2 sin zeta'(1-s)]."""
    s = sf._as_complex(s)
    if not 0.0 < s.real < 1.0:
        raise DomainError(f"derivative expression needs 0 < Re(s) < 1, got s={s!r}")
    log_sin = sf.log_sin_half_pi(s)
    # fold sin into the exponent; cos = sin * cot
    g_sin = cmath.exp((s - 1.0) * _LOG2PI + sf.log_gamma(1.0 - s) + log_sin)
    cot = sf.cot(0.5 * math.pi * s)
    z1 = zeta(1.0 - s, cfg)
    d1 = zeta_prime(1.0 - s, cfg)
    psi = sf.digamma(1.0 - s)
    return g_sin * (z1 * (math.pi * cot + 2.0 * _LOG2PI - 2.0 * psi) - 2.0 * d1)


_DIVISOR_FLOOR = 1e-8


def stationarity_residual(s, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|(pi/2) cot(pi s/2) + ln(2 pi) - psi(1-s) - zeta'(1-s)/zeta(1-s)|.

    This is the derivative condition after dividing through by 2 sin(pi s/2)
    and zeta(1-s); it equals |zeta'(s)/zeta(s)|.
    """
    s = sf._as_complex(s)
    try:
        log_sin = sf.log_sin_half_pi(s)
    except ZeroArgument as exc:
        raise DivisorVanishes(f"sin(pi s/2) = 0 at s={s!r}") from exc
    if log_sin.real < math.log(_DIVISOR_FLOOR):
        raise DivisorVanishes(f"|sin(pi s/2)| < {_DIVISOR_FLOOR:g} at s={s!r}")
    z1 = zeta(1.0 - s, cfg)
    if abs(z1) < _DIVISOR_FLOOR:
        raise DivisorVanishes(f"|zeta(1-s)| < {_DIVISOR_FLOOR:g} at s={s!r}")
    d1 = zeta_prime(1.0 - s, cfg)
    lhs = 0.5 * math.pi * sf.cot(0.5 * math.pi * s) + _LOG2PI - sf.digamma(1.0 - s)
    return abs(lhs - d1 / z1)


def critical_gap(s, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """|1/pi - zeta(s)|; zero exactly where zeta(s) = 1/pi."""
    return float(np.abs(INV_PI - np.array([zeta(s, cfg)]))[0])


def critical_gap_array(s, cfg: EvalConfig = DEFAULT_CONFIG) -> tuple[np.ndarray, np.ndarray]:
    values, errors = zeta_array(s, cfg)
    return np.abs(INV_PI - values), errors
