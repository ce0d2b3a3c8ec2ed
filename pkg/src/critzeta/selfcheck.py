"""Cross-module invariant checks run by ``critzeta selfcheck``.

Each check returns (name, passed, detail). The suite is sized to finish in a
few seconds on one core.
"""

from __future__ import annotations

import math

import numpy as np

from . import constraint_checker as cc
from . import landscape_scanner as ls
from . import special_functions as sf
from . import zero_finder as zf
from . import zeta_engine as ze
from .errors import NearZeroInput, ZetaError

# Ordinates of the first three nontrivial zeros (published tables, 15 digits).
KNOWN_ZEROS = (14.134725141734693, 21.022039638771555, 25.010857580145688)


def _known_values(cfg):
    checks = [
        (ze.zeta(0.5, cfg), -1.4603545088, 1e-9),
        (ze.zeta(complex(0.5, 5.0), cfg), complex(0.7018123711, 0.2310380083), 1e-9),
        (ze.zeta(2.0, cfg), math.pi ** 2 / 6, 1e-12),
        (ze.zeta_prime(0.0, cfg), -0.5 * math.log(2 * math.pi), 1e-10),
    ]
    worst = max(abs(got - want) / tol for got, want, tol in checks)
    return worst <= 1.0, f"worst error / tolerance = {worst:.3g}"


def _functional_equation(cfg, rng):
    s = rng.uniform(0.01, 0.99, 50) + 1j * rng.uniform(-60.0, 60.0, 50)
    worst = max(abs(ze.zeta(x, cfg) - ze.functional_rhs(x, cfg)) for x in s)
    return worst <= 1e-9, f"max |zeta - rhs| = {worst:.3g} on 50 strip points"


def _conjugate_symmetry(cfg, rng):
    s = rng.uniform(0.0, 3.0, 200) + 1j * rng.uniform(0.0, 100.0, 200)
    s = s[np.abs(s - 1.0) > 0.1]
    worst = max(abs(ze.zeta(x.conjugate(), cfg) - ze.zeta(x, cfg).conjugate()) for x in s)
    lg = max(abs(sf.log_gamma(x.conjugate()) - sf.log_gamma(x).conjugate()) for x in s)
    worst = max(worst, lg)
    return worst <= 1e-13, f"max conjugation defect = {worst:.3g}"


def _derivative(cfg, rng):
    s = rng.uniform(0.05, 0.95, 20) + 1j * rng.uniform(1.0, 40.0, 20)
    worst = max(abs(ze.functional_derivative_rhs(x, cfg) - ze.zeta_prime(x, cfg)) for x in s)
    return worst <= 1e-6, f"max |rhs' - zeta'| = {worst:.3g}"


def _trivial_zeros(cfg):
    worst = max(zf.trivial_zero_residuals(5, cfg))
    return worst < 1e-10, f"max |zeta(-2k)|, k<=5 = {worst:.3g}"


def _zeros(cfg):
    found = zf.zeta_zeros(zf.find_zeros(0.0, 26.0, 0.05, cfg))
    if len(found) != len(KNOWN_ZEROS):
        return False, f"found {len(found)} zeros on [0, 26], expected {len(KNOWN_ZEROS)}"
    worst = max(abs(r.y - y) for r, y in zip(found, KNOWN_ZEROS))
    refl = max(r.reflection_residual for r in found)
    return worst <= 1e-8 and refl < 1e-8, f"max ordinate error = {worst:.3g}, max reflection residual = {refl:.3g}"


def _unit_modulus(cfg):
    ys = np.linspace(-25.0, 25.0, 1001)
    worst = max(abs(abs(cc.chi_factor(y, cfg)) - 1.0) for y in ys)
    f0 = abs(cc.chi_factor(0.0, cfg) - 1.0)
    return worst < 1e-10 and f0 <= 4 * np.finfo(float).eps, f"max ||f|-1| = {worst:.3g}, |f(0)-1| = {f0:.3g}"


def _ratio_identity(cfg, rng):
    ys = rng.uniform(-40.0, 40.0, 100)
    worst = 0.0
    for y in ys:
        try:
            worst = max(worst, cc.ratio_identity_residual(y, cfg))
        except NearZeroInput:
            continue
    return worst < 1e-9, f"max ratio residual = {worst:.3g}"


def _mirror_scan(cfg):
    up = ls.scan_strip(ls.StripGrid(0.0, 1.0, 0.0, 30.0, 9, 31), cfg)
    down = ls.scan_strip(ls.StripGrid(0.0, 1.0, -30.0, 0.0, 9, 31), cfg)
    same = np.array_equal(up.values, down.values[::-1], equal_nan=True)
    return same, "mirrored grid values identical" if same else "mirrored grid values differ"


def run_checks(cfg: ze.EvalConfig = ze.DEFAULT_CONFIG, seed: int = 20240601) -> list[tuple[str, bool, str]]:
    rng = np.random.default_rng(seed)
    suite = [
        ("known_values", lambda: _known_values(cfg)),
        ("functional_equation", lambda: _functional_equation(cfg, rng)),
        ("conjugate_symmetry", lambda: _conjugate_symmetry(cfg, rng)),
        ("derivative_identity", lambda: _derivative(cfg, rng)),
        ("trivial_zeros", lambda: _trivial_zeros(cfg)),
        ("critical_zeros", lambda: _zeros(cfg)),
        ("unit_modulus", lambda: _unit_modulus(cfg)),
        ("ratio_identity", lambda: _ratio_identity(cfg, rng)),
        ("mirror_scan", lambda: _mirror_scan(cfg)),
    ]
    results = []
    for name, check in suite:
        try:
            ok, detail = check()
        except ZetaError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
