"""Command-line front end: evaluation, scans, minimisation, zeros, case points.

Every command writes its main output to stdout or, with ``-o``, atomically
to a file. Diagnostics go to stderr. Exit status is 0 on success, 2 on a
usage error and 1 on a computational error; the latter also prints one JSON
line ``{"error": ..., "module": ..., "message": ...}`` to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import os
import re
import sys
from dataclasses import dataclass, replace
from typing import Optional

from . import constraint_checker as cc
from . import landscape_scanner as ls
from . import zero_finder as zf
from . import zeta_engine as ze
from ._fileio import atomic_write
from .errors import ZetaError

WORKERS_ENV = "CRITZETA_WORKERS"

_CONFIG_CASTS = {"series_cutoff": int, "correction_order": int, "target_abs_error": float,
                 "derivative_step": float, "pole_exclusion_radius": float}

_COMPLEX_CHARS = re.compile(r"[0-9.eE+-]*i?")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    """Parse ``a+bi``, ``a-bi``, ``a`` or ``bi`` (no spaces, e-notation allowed)."""
    if not text or not _COMPLEX_CHARS.fullmatch(text):
        raise ValueError(f"not a complex number of the form a+bi: {text!r}")
    try:
        return complex(text[:-1] + "j" if text.endswith("i") else text)
    except ValueError:
        raise ValueError(f"not a complex number of the form a+bi: {text!r}") from None


def parse_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"expected a:b, got {text!r}")
    lo, hi = (float(p) for p in parts)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise ValueError(f"need finite a < b, got {text!r}")
    return lo, hi


def parse_shape(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"([0-9]+)[xX]([0-9]+)", text)
    if m is None:
        raise ValueError(f"expected NRExNIM such as 400x800, got {text!r}")
    n_re, n_im = int(m.group(1)), int(m.group(2))
    if n_re < 1 or n_im < 1:
        raise ValueError(f"grid sizes must be positive, got {text!r}")
    return n_re, n_im


def read_config_file(path: str) -> dict:
    """``key = value`` lines; '#' starts a comment. Keys use underscores or dashes."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"--config: cannot read {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"--config: {path}:{lineno}: expected key = value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _CONFIG_CASTS and key != "workers":
            raise UsageError(f"--config: {path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class RunConfig:
    command: str
    eval_config: ze.EvalConfig
    output_path: Optional[str]
    workers: int
    args: argparse.Namespace


def _positive_int(name: str, value) -> int:
    try:
        n = int(value)
    except (TypeError, ValueError):
        raise UsageError(f"{name}: expected a positive integer, got {value!r}") from None
    if n < 1 or str(n) != str(value).strip().lstrip("+"):
        raise UsageError(f"{name}: expected a positive integer, got {value!r}")
    return n


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    """Layer built-in defaults < config file < flags; the env var stands in for a missing --workers."""
    environ = os.environ if environ is None else environ
    file_values = read_config_file(args.config) if args.config else {}

    overrides = {}
    for key, cast in _CONFIG_CASTS.items():
        value = getattr(args, key)
        source = f"--{key.replace('_', '-')}"
        if value is None and key in file_values:
            value, source = file_values[key], f"--config key {key}"
        if value is None:
            continue
        try:
            overrides[key] = cast(value)
        except ValueError:
            raise UsageError(f"{source}: invalid value {value!r}") from None
    try:
        cfg = replace(ze.DEFAULT_CONFIG, **overrides)
    except ValueError as exc:
        raise UsageError(f"evaluation config: {exc}") from None

    if args.workers is not None:
        workers = _positive_int("--workers", args.workers)
    elif environ.get(WORKERS_ENV):
        workers = _positive_int(WORKERS_ENV, environ[WORKERS_ENV])
    elif "workers" in file_values:
        workers = _positive_int("--config key workers", file_values["workers"])
    else:
        workers = 1
    return RunConfig(args.command, cfg, args.output, workers, args)


def _common_options() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("-o", "--output", help="write the result here (atomically) instead of stdout")
    p.add_argument("--config", help="file of key = value settings")
    p.add_argument("--workers", help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    g = p.add_argument_group("evaluation config")
    g.add_argument("--series-cutoff", dest="series_cutoff")
    g.add_argument("--correction-order", dest="correction_order")
    g.add_argument("--target-abs-error", dest="target_abs_error")
    g.add_argument("--derivative-step", dest="derivative_step")
    g.add_argument("--pole-exclusion-radius", dest="pole_exclusion_radius")
    return p


def _grid_options(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--re", required=required, help="real range a:b (use --re=a:b for negative a)")
    p.add_argument("--im", required=required, help="imaginary range c:d")
    p.add_argument("--n", required=required, help="grid size NRExNIM, e.g. 400x800")


QUANTITIES = ("zeta", "zeta-prime", "gap", "functional-rhs", "stationarity")


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog="critzeta", description="Riemann zeta explorations in double precision.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("eval", parents=[common], help="evaluate zeta (or a derived quantity) at one point")
    p.add_argument("--s", required=True, help="complex argument a+bi")
    p.add_argument("--quantity", choices=QUANTITIES, default="zeta")

    p = sub.add_parser("scan", parents=[common], help="grid scan of |1/pi - zeta(s)|")
    _grid_options(p, required=True)
    p.add_argument("--checkpoint", help="checkpoint file; resumed when it already exists")

    p = sub.add_parser("minimize", parents=[common], help="multi-start minimisation of |1/pi - zeta(s)|")
    _grid_options(p, required=False)
    p.add_argument("--seeds", required=True, help="number of starting points")
    p.add_argument("--unrestricted", action="store_true", help="allow Re(s) outside (0, 1)")

    p = sub.add_parser("zeros", parents=[common], help="critical-line zeros by sign-change bisection")
    p.add_argument("--range", required=True, dest="y_range", help="ordinate range a:b")
    p.add_argument("--step", default="0.05", help="sampling step in (0, 0.5] (default 0.05)")

    p = sub.add_parser("constraints", parents=[common], help="points where f(y) is -1, +1, i or -i")
    p.add_argument("--range", required=True, dest="y_range", help="ordinate range a:b")
    p.add_argument("--case", default="all", choices=("A", "B", "C", "D", "all"))

    sub.add_parser("selfcheck", parents=[common], help="run the cross-module invariant checks")
    return parser


def _flag_value(flag: str, parse, text):
    try:
        return parse(text)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _scan_grid(args, unrestricted: bool, defaults: bool) -> ls.StripGrid:
    if defaults:
        re_default = "-0.5:1.5" if unrestricted else "0:1"
        re_text = args.re or re_default
        im_text = args.im or "0:80"
        n_text = args.n or "400x800"
    else:
        re_text, im_text, n_text = args.re, args.im, args.n
    re_lo, re_hi = _flag_value("--re", parse_range, re_text)
    im_lo, im_hi = _flag_value("--im", parse_range, im_text)
    n_re, n_im = _flag_value("--n", parse_shape, n_text)
    try:
        return ls.StripGrid(re_lo, re_hi, im_lo, im_hi, n_re, n_im, unrestricted)
    except ValueError as exc:
        raise UsageError(f"--re: {exc}") from None


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g} {z.imag:+.17g}i"


def _cmd_eval(rc: RunConfig, err) -> str:
    s = _flag_value("--s", parse_complex, rc.args.s)
    cfg = rc.eval_config
    q = rc.args.quantity
    if q == "zeta":
        return _fmt_complex(ze.zeta(s, cfg)) + "\n"
    if q == "zeta-prime":
        return _fmt_complex(ze.zeta_prime(s, cfg)) + "\n"
    if q == "functional-rhs":
        return _fmt_complex(ze.functional_rhs(s, cfg)) + "\n"
    if q == "gap":
        return _fmt(ze.critical_gap(s, cfg)) + "\n"
    return _fmt(ze.stationarity_residual(s, cfg)) + "\n"


def _cmd_scan(rc: RunConfig, err) -> str:
    grid = _scan_grid(rc.args, unrestricted=False, defaults=False)
    path = rc.args.checkpoint
    if path and os.path.exists(path):
        stored, _, done = ls.read_checkpoint(path)
        if stored != grid:
            raise UsageError(f"--checkpoint: {path} belongs to a different grid ({stored})")
        print(f"resuming from {path}: {done.shape[0]}/{grid.n_im} rows done", file=err)
        result = ls.resume_scan(path, rc.eval_config, workers=rc.workers)
    else:
        result = ls.scan_strip(grid, rc.eval_config, workers=rc.workers, checkpoint_path=path)
    masked = int(result.mask.sum())
    print(f"minimum {_fmt(result.min_value)} at {_fmt_complex(result.min_location)}", file=err)
    print(f"nodes {grid.n_re * grid.n_im}, masked {masked}", file=err)
    return result.csv_text()


def _cmd_minimize(rc: RunConfig, err) -> str:
    k = _positive_int("--seeds", rc.args.seeds)
    grid = _scan_grid(rc.args, unrestricted=rc.args.unrestricted, defaults=True)
    scan = ls.scan_strip(grid, rc.eval_config, workers=rc.workers)
    reports, best = ls.multi_start(scan, rc.eval_config, k=k, unrestricted=rc.args.unrestricted,
                                   workers=rc.workers)
    lines = ["seed_re,seed_im,argmin_re,argmin_im,value,iterations,converged"]
    for r in reports:
        lines.append(f"{_fmt(r.seed.real)},{_fmt(r.seed.imag)},{_fmt(r.argmin.real)},{_fmt(r.argmin.imag)},"
                     f"{_fmt(r.value)},{r.iterations},{str(r.converged).lower()}")
    print(f"grid minimum {_fmt(scan.min_value)} at {_fmt_complex(scan.min_location)}", file=err)
    if best >= 0:
        top = reports[best]
        print(f"best value {_fmt(top.value)} at {_fmt_complex(top.argmin)}", file=err)
        print(f"reported minimum {ls.PAPER_MINIMUM:g}: {ls.compare_with_reported(top.value)}", file=err)
    else:
        print("no unmasked grid nodes to start from", file=err)
    return "\n".join(lines) + "\n"


def _cmd_zeros(rc: RunConfig, err) -> str:
    y_lo, y_hi = _flag_value("--range", parse_range, rc.args.y_range)
    step = _flag_value("--step", float, rc.args.step)
    if not 0.0 < step <= 0.5:
        raise UsageError(f"--step: must lie in (0, 0.5], got {rc.args.step}")
    records = zf.find_zeros(y_lo, y_hi, step, rc.eval_config, workers=rc.workers)
    print(f"{len(zf.zeta_zeros(records))} zeta zeros, {len(records)} component zeros", file=err)
    return zf.zeros_csv_text(records)


def _cmd_constraints(rc: RunConfig, err) -> str:
    y_lo, y_hi = _flag_value("--range", parse_range, rc.args.y_range)
    cases = list(cc.Case) if rc.args.case == "all" else [cc.Case(rc.args.case)]
    points = []
    for case in cases:
        points.extend(cc.locate_case_points(y_lo, y_hi, case, rc.eval_config, workers=rc.workers))
    points.sort(key=lambda p: (p.y, p.case_id.value))
    print(f"{len(points)} case points", file=err)
    return cc.cases_csv_text(points)


def _cmd_selfcheck(rc: RunConfig, err) -> str:
    from .selfcheck import run_checks

    results = run_checks(rc.eval_config)
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    failed = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=err)
    if failed:
        raise _ChecksFailed("\n".join(lines) + "\n")
    return "\n".join(lines) + "\n"


class _ChecksFailed(Exception):
    def __init__(self, text: str):
        super().__init__("selfcheck failed")
        self.text = text


_COMMANDS = {"eval": _cmd_eval, "scan": _cmd_scan, "minimize": _cmd_minimize, "zeros": _cmd_zeros,
             "constraints": _cmd_constraints, "selfcheck": _cmd_selfcheck}


def _emit(rc: RunConfig, text: str, out) -> None:
    if rc.output_path:
        atomic_write(rc.output_path, text.encode("utf-8"))
    else:
        out.write(text)
        out.flush()


def run(argv=None, *, out=None, err=None, environ=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rc = resolve_config(args, environ)
        text = _COMMANDS[rc.command](rc, err)
        _emit(rc, text, out)
    except UsageError as exc:
        print(f"critzeta {args.command}: error: {exc}", file=err)
        return 2
    except _ChecksFailed as exc:
        _emit(rc, exc.text, out)
        return 1
    except ZetaError as exc:
        print(json.dumps({"error": type(exc).__name__, "module": exc.module, "message": str(exc)}), file=err)
        return 1
    except OSError as exc:
        print(json.dumps({"error": type(exc).__name__, "module": "cli", "message": str(exc)}), file=err)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
