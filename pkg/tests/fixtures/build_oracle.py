"""Regenerate oracle.json with mpmath at 40 significant digits.

Run once; the JSON is committed and the tests only read it. Nothing here
imports critzeta.

    python3 tests/fixtures/build_oracle.py
"""

import json
import random
from pathlib import Path

import mpmath as mp

mp.mp.dps = 40
OUT = Path(__file__).with_name("oracle.json")


def c2(z):
    z = mp.mpc(z)
    return [mp.nstr(z.real, 25), mp.nstr(z.imag, 25)]


def zeta_points(rng):
    pts = [complex(0.5, 0.0), complex(0.5, 5.0), complex(2.0, 0.0), complex(0.3, 7.0), complex(-3.5, 2.0)]
    for _ in range(40):
        pts.append(complex(rng.uniform(0.0, 1.0), rng.uniform(-200.0, 200.0)))
    for _ in range(15):
        pts.append(complex(rng.uniform(1.0, 10.0), rng.uniform(-100.0, 100.0)))
    for _ in range(15):
        pts.append(complex(rng.uniform(-10.0, 0.0), rng.uniform(-20.0, 20.0)))
    return pts


def gap_roots():
    """Solutions of zeta(s) = 1/pi with 0 < Re s < 1, 0 < Im s < 80."""
    target = 1 / mp.pi

    def g(s):
        # keep divergent secant runs away from slow large-height evaluations
        if not (-2 < s.real < 3 and -5 < s.imag < 90):
            raise ValueError("left the search box")
        return mp.zeta(s) - target

    roots = []
    for im0 in range(2, 80):
        for re0 in (0.55, 0.75, 0.95):
            try:
                r = mp.findroot(g, mp.mpc(re0, im0 + 0.5))
            except (ValueError, ZeroDivisionError):
                continue
            if not (0 < r.real < 1 and 0 < r.imag < 80) or abs(mp.zeta(r) - target) > mp.mpf(10) ** -30:
                continue
            if all(abs(r - q) > 1e-8 for q in roots):
                roots.append(r)
    roots.sort(key=lambda z: float(z.imag))
    return [c2(r) for r in roots]


def main():
    rng = random.Random(1729)
    zeros = [mp.nstr(mp.zetazero(n).imag, 25) for n in range(1, 11)]
    zpts = zeta_points(rng)
    zeta_values = [{"s": [z.real, z.imag], "zeta": c2(mp.zeta(mp.mpc(z.real, z.imag)))} for z in zpts]
    prime_pts = [complex(0.4, 3.0), complex(0.3, 2.0), complex(0.5, 20.0), complex(2.0, 0.0), complex(-1.5, 4.0)]
    zeta_prime_values = [{"s": [z.real, z.imag], "zeta_prime": c2(mp.zeta(mp.mpc(z.real, z.imag), 1, 1))}
                         for z in prime_pts]

    lg_pts = [complex(rng.uniform(-5.0, 5.0), rng.uniform(-30.0, 30.0)) for _ in range(40)]
    lg_pts += [complex(0.5, 0.0), complex(5.0, 0.0), complex(-2.5, 0.0), complex(-0.5, 1e-3)]
    log_gamma = [{"z": [z.real, z.imag], "value": c2(mp.loggamma(mp.mpc(z.real, z.imag)))} for z in lg_pts]
    digamma = [{"z": [z.real, z.imag], "value": c2(mp.digamma(mp.mpc(z.real, z.imag)))} for z in lg_pts]

    def f(y):
        y = mp.mpf(y)
        return (mp.sqrt(2 / mp.pi) * mp.power(2 * mp.pi, mp.mpc(0, y)) * mp.sin(mp.pi / 4 + mp.mpc(0, y) * mp.pi / 2)
                * mp.gamma(mp.mpc(0.5, -y)))

    chi = [{"y": y, "value": c2(f(y))} for y in (0.0, 1.5, 5.0, -7.25, 14.134725141734693, 24.9)]

    flags = bytearray([1]) * 100001
    flags[0] = flags[1] = 0
    for i in range(2, 317):
        if flags[i]:
            flags[i * i::i] = bytearray(len(flags[i * i::i]))
    primes = [p for p in range(2, 100001) if flags[p]]
    prod = mp.mpf(1)
    for p in primes:
        prod /= 1 - mp.mpf(p) ** -2

    data = {
        "generator": "mpmath " + mp.__version__ + ", 40 digits",
        "first_zeros": zeros,
        "gram_point_0": mp.nstr(mp.grampoint(0), 25),
        "zeta": zeta_values,
        "zeta_prime": zeta_prime_values,
        "log_gamma": log_gamma,
        "digamma": digamma,
        "chi_factor": chi,
        "euler_product_2_1e5": mp.nstr(prod, 25),
        "gap_roots": gap_roots(),
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
