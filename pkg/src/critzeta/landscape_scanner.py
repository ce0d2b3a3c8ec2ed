"""Scan and minimise |1/pi - zeta(s)| over a rectangle of the complex plane.

Grid rows run along Re(s) at fixed Im(s); rows are the unit of work for the
worker pool and for checkpointing. Nodes are interior points of an
(n+1)-cell partition, so a grid and its mirror image across the real axis
have exactly negated ordinates, and the n -> 2n+1 refinement nests.
"""

from __future__ import annotations

import math
import struct
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from ._fileio import atomic_write
from .errors import CorruptCheckpoint, PoleProximity
from .zeta_engine import DEFAULT_CONFIG, INV_PI, EvalConfig, critical_gap_array, zeta_best_effort

PAPER_MINIMUM = 3.93544e-9

CHECKPOINT_MAGIC = b"ZSCN"
CHECKPOINT_VERSION = 1
# magic, version, re_min, re_max, im_min, im_max, n_re, n_im, flags, config crc, rows done
_HEADER = struct.Struct("<4sI4dIIIII")
_CHECKSUM = struct.Struct("<I")


@dataclass(frozen=True)
class StripGrid:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int
    unrestricted: bool = False

    def __post_init__(self):
        if not self.re_min < self.re_max:
            raise ValueError(f"need re_min < re_max, got {self.re_min}, {self.re_max}")
        if not self.im_min < self.im_max:
            raise ValueError(f"need im_min < im_max, got {self.im_min}, {self.im_max}")
        if not self.unrestricted and not (0.0 <= self.re_min and self.re_max <= 1.0):
            raise ValueError("real range must lie in the critical strip (0, 1); pass unrestricted=True to widen it")
        for name in ("n_re", "n_im"):
            n = getattr(self, name)
            if int(n) != n or n < 1:
                raise ValueError(f"{name} must be a positive integer, got {n}")
        if not all(map(math.isfinite, (self.re_min, self.re_max, self.im_min, self.im_max))):
            raise ValueError("grid bounds must be finite")

    @staticmethod
    def _axis(lo: float, hi: float, n: int) -> np.ndarray:
        centre = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        k = np.arange(1, n + 1)
        return centre + half * ((2 * k - (n + 1)) / (n + 1))

    def re_nodes(self) -> np.ndarray:
        return self._axis(self.re_min, self.re_max, self.n_re)

    def im_nodes(self) -> np.ndarray:
        return self._axis(self.im_min, self.im_max, self.n_im)

    def cell(self) -> tuple[float, float]:
        return (self.re_max - self.re_min) / (self.n_re + 1), (self.im_max - self.im_min) / (self.n_im + 1)

    def refined(self) -> "StripGrid":
        """Grid with every cell halved; contains all nodes of ``self``."""
        return StripGrid(self.re_min, self.re_max, self.im_min, self.im_max,
                         2 * self.n_re + 1, 2 * self.n_im + 1, self.unrestricted)


@dataclass
class ScanResult:
    grid: StripGrid
    values: np.ndarray  # (n_im, n_re); NaN marks a masked node
    min_location: complex
    min_value: float
    evaluations: int

    @property
    def mask(self) -> np.ndarray:
        return np.isnan(self.values)

    def csv_text(self) -> str:
        re_nodes = self.grid.re_nodes()
        lines = ["re,im,gap"]
        for im, row in zip(self.grid.im_nodes(), self.values):
            for re, v in zip(re_nodes, row):
                if not math.isnan(v):
                    lines.append(f"{re:.17g},{im:.17g},{v:.17g}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class MinimumReport:
    seed: complex
    argmin: complex
    value: float
    iterations: int
    converged: bool


def _scan_rows(grid: StripGrid, cfg: EvalConfig, rows: list[int]) -> np.ndarray:
    re_nodes = grid.re_nodes()
    im_nodes = grid.im_nodes()
    out = np.empty((len(rows), grid.n_re))
    for j, row in enumerate(rows):
        gap, err = critical_gap_array(re_nodes + 1j * im_nodes[row], cfg)
        gap[~(err <= cfg.target_abs_error)] = np.nan
        out[j] = gap
    return out


def _grid_minimum(grid: StripGrid, values: np.ndarray) -> tuple[complex, float]:
    if np.all(np.isnan(values)):
        return complex(math.nan, math.nan), math.nan
    best = np.nanmin(values)
    rows, cols = np.nonzero(values == best)
    re_nodes, im_nodes = grid.re_nodes(), grid.im_nodes()
    # ties: smallest Re, then smallest Im
    re, im = min((re_nodes[c], im_nodes[r]) for r, c in zip(rows, cols))
    return complex(re, im), float(best)


def _evaluable_nodes(grid: StripGrid, cfg: EvalConfig, rows: range) -> int:
    re_nodes, im_nodes = grid.re_nodes(), grid.im_nodes()
    s = re_nodes[None, :] + 1j * im_nodes[list(rows)][:, None]
    return int(np.count_nonzero(np.abs(s - 1.0) > cfg.pole_exclusion_radius))


def _config_crc(cfg: EvalConfig) -> int:
    return zlib.crc32(cfg.fingerprint().encode())


def write_checkpoint(path, grid: StripGrid, cfg: EvalConfig, rows: np.ndarray) -> None:
    """Persist completed rows; the file is replaced atomically."""
    data = np.ascontiguousarray(rows, dtype="<f8").tobytes()
    header = _HEADER.pack(CHECKPOINT_MAGIC, CHECKPOINT_VERSION, grid.re_min, grid.re_max, grid.im_min,
                          grid.im_max, grid.n_re, grid.n_im, int(grid.unrestricted), _config_crc(cfg),
                          rows.shape[0])
    checksum = zlib.crc32(header + data)
    atomic_write(path, header + _CHECKSUM.pack(checksum) + data)


def read_checkpoint(path) -> tuple[StripGrid, int, np.ndarray]:
    """Return (grid, config crc, completed rows); raise CorruptCheckpoint on any mismatch."""
    blob = Path(path).read_bytes()
    head_len = _HEADER.size + _CHECKSUM.size
    if len(blob) < head_len:
        raise CorruptCheckpoint(f"{path}: truncated header ({len(blob)} bytes)")
    fields = _HEADER.unpack_from(blob)
    magic, version, re_min, re_max, im_min, im_max, n_re, n_im, flags, cfg_crc, done = fields
    if magic != CHECKPOINT_MAGIC:
        raise CorruptCheckpoint(f"{path}: bad magic {magic!r}")
    if version != CHECKPOINT_VERSION:
        raise CorruptCheckpoint(f"{path}: unsupported format version {version}")
    (checksum,) = _CHECKSUM.unpack_from(blob, _HEADER.size)
    data = blob[head_len:]
    if len(data) != done * n_re * 8:
        raise CorruptCheckpoint(f"{path}: expected {done} rows of {n_re} values, found {len(data)} bytes")
    if zlib.crc32(blob[: _HEADER.size] + data) != checksum:
        raise CorruptCheckpoint(f"{path}: checksum mismatch")
    try:
        grid = StripGrid(re_min, re_max, im_min, im_max, n_re, n_im, bool(flags))
    except ValueError as exc:
        raise CorruptCheckpoint(f"{path}: invalid grid parameters ({exc})") from exc
    if done > n_im:
        raise CorruptCheckpoint(f"{path}: {done} rows completed but grid has {n_im}")
    rows = np.frombuffer(data, dtype="<f8").reshape(done, n_re).astype(float)
    return grid, cfg_crc, rows


ProgressCallback = Callable[[int, int], None]


def _run_rows(grid: StripGrid, cfg: EvalConfig, done: np.ndarray, workers: int,
              checkpoint_path, chunk_rows: int, progress: Optional[ProgressCallback]) -> np.ndarray:
    start = done.shape[0]
    chunks = [list(range(r, min(r + chunk_rows, grid.n_im))) for r in range(start, grid.n_im, chunk_rows)]
    parts = [done]
    completed = start

    def absorb(block):
        nonlocal completed
        parts.append(block)
        completed += block.shape[0]
        if checkpoint_path is not None:
            write_checkpoint(checkpoint_path, grid, cfg, np.concatenate(parts))
        if progress is not None:
            progress(completed, grid.n_im)

    if workers <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            absorb(_scan_rows(grid, cfg, chunk))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_rows, grid, cfg, chunk) for chunk in chunks]
            try:
                for fut in futures:  # absorb in row order
                    absorb(fut.result())
            except BaseException:
                for fut in futures:
                    fut.cancel()
                raise
    return np.concatenate(parts) if len(parts) > 1 else done


def scan_strip(grid: StripGrid, cfg: EvalConfig = DEFAULT_CONFIG, *, workers: int = 1,
               checkpoint_path=None, chunk_rows: int = 16,
               progress: Optional[ProgressCallback] = None) -> ScanResult:
    """Evaluate |1/pi - zeta| at every grid node.

    Nodes inside the pole exclusion disc or failing the accuracy target are
    masked (NaN). The output does not depend on ``workers`` or
    ``chunk_rows``. With ``checkpoint_path`` the completed rows are persisted
    after every chunk; ``progress(rows_done, rows_total)`` runs after each.
    """
    empty = np.empty((0, grid.n_re))
    if checkpoint_path is not None:
        write_checkpoint(checkpoint_path, grid, cfg, empty)
    values = _run_rows(grid, cfg, empty, workers, checkpoint_path, chunk_rows, progress)
    loc, best = _grid_minimum(grid, values)
    return ScanResult(grid, values, loc, best, _evaluable_nodes(grid, cfg, range(grid.n_im)))


def resume_scan(checkpoint_path, cfg: EvalConfig = DEFAULT_CONFIG, *, workers: int = 1,
                chunk_rows: int = 16, progress: Optional[ProgressCallback] = None) -> ScanResult:
    """Finish an interrupted scan; the result matches an uninterrupted run bit-for-bit.

    ``evaluations`` counts only the nodes evaluated by this call.
    """
    grid, cfg_crc, done = read_checkpoint(checkpoint_path)
    if cfg_crc != _config_crc(cfg):
        raise CorruptCheckpoint(f"{checkpoint_path}: written with a different evaluation config")
    start = done.shape[0]
    values = _run_rows(grid, cfg, done, workers, checkpoint_path, chunk_rows, progress)
    loc, best = _grid_minimum(grid, values)
    return ScanResult(grid, values, loc, best, _evaluable_nodes(grid, cfg, range(start, grid.n_im)))


def nelder_mead(func: Callable[[np.ndarray], float], x0, steps, *, tol: float = 1e-10, max_iter: int = 10_000,
                alpha: float = 1.0, gamma: float = 2.0, rho: float = 0.5, sigma: float = 0.5):
    """Minimise ``func`` with the downhill simplex method.

    Stops when the simplex diameter drops below ``tol`` (converged) or after
    ``max_iter`` iterations (not converged). Returns (x, f, iterations, converged).
    """
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    simplex = [x0]
    for i in range(dim):
        x = x0.copy()
        x[i] += steps[i]
        simplex.append(x)
    fvals = [func(x) for x in simplex]

    def diameter():
        return max(np.linalg.norm(a - b) for i, a in enumerate(simplex) for b in simplex[i + 1:])

    iterations = 0
    while True:
        order = sorted(range(dim + 1), key=lambda i: fvals[i])
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        if diameter() < tol:
            return simplex[0], fvals[0], iterations, True
        if iterations >= max_iter:
            return simplex[0], fvals[0], iterations, False
        iterations += 1

        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = centroid + alpha * (centroid - worst)
        fr = func(xr)
        if fvals[0] <= fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = func(xe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
            continue
        if fr < fvals[-1]:
            xc = centroid + rho * (xr - centroid)
            fc = func(xc)
            if fc <= fr:
                simplex[-1], fvals[-1] = xc, fc
                continue
        else:
            xc = centroid + rho * (worst - centroid)
            fc = func(xc)
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
                continue
        best = simplex[0]
        for i in range(1, dim + 1):
            simplex[i] = best + sigma * (simplex[i] - best)
            fvals[i] = func(simplex[i])


def _gap_objective(cfg: EvalConfig, restrict_to_strip: bool):
    def objective(x: np.ndarray) -> float:
        if restrict_to_strip and not 0.0 < x[0] < 1.0:
            return math.inf
        try:
            z = zeta_best_effort(complex(x[0], x[1]), cfg)
        except PoleProximity:
            return math.inf
        return float(np.abs(INV_PI - np.array([z]))[0])
    return objective


def refine_minimum(seed, cfg: EvalConfig = DEFAULT_CONFIG, *, edge=1e-2, unrestricted: bool = False,
                   tol: float = 1e-10, max_iter: int = 10_000) -> MinimumReport:
    """Local simplex descent of |1/pi - zeta| from ``seed``.

    ``edge`` is the initial simplex edge, a scalar or a (re, im) pair; pass
    one grid cell. Outside ``unrestricted`` mode the search stays inside
    0 < Re(s) < 1.
    """
    seed = complex(seed)
    if abs(seed - 1.0) <= cfg.pole_exclusion_radius:
        raise PoleProximity(f"seed {seed!r} lies inside the pole exclusion disc")
    steps = (edge, edge) if np.isscalar(edge) else tuple(edge)
    objective = _gap_objective(cfg, restrict_to_strip=not unrestricted)
    x, f, iterations, converged = nelder_mead(objective, [seed.real, seed.imag], steps, tol=tol, max_iter=max_iter)
    return MinimumReport(seed, complex(x[0], x[1]), float(f), iterations, converged)


def select_seeds(scan: ScanResult, k: int = 16) -> list[complex]:
    """The k lowest unmasked nodes, no two of them 8-neighbours."""
    values = scan.values
    rows, cols = np.nonzero(~np.isnan(values))
    re_nodes, im_nodes = scan.grid.re_nodes(), scan.grid.im_nodes()
    order = sorted(zip(values[rows, cols], re_nodes[cols], im_nodes[rows], rows, cols))
    taken: list[tuple[int, int]] = []
    seeds = []
    for _, re, im, r, c in order:
        if len(seeds) == k:
            break
        if any(abs(r - tr) <= 1 and abs(c - tc) <= 1 for tr, tc in taken):
            continue
        taken.append((r, c))
        seeds.append(complex(re, im))
    return seeds


def _refine_task(args):
    seed, cfg, edge, unrestricted = args
    return refine_minimum(seed, cfg, edge=edge, unrestricted=unrestricted)


def multi_start(scan: ScanResult, cfg: EvalConfig = DEFAULT_CONFIG, *, k: int = 16, unrestricted: bool = False,
                workers: int = 1) -> tuple[list[MinimumReport], int]:
    """Refine from the k best non-adjacent grid nodes; returns (reports, index of best)."""
    tasks = [(seed, cfg, scan.grid.cell(), unrestricted) for seed in select_seeds(scan, k)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_refine_task, tasks))
    else:
        reports = [_refine_task(t) for t in tasks]
    if not reports:
        return [], -1
    best = min(range(len(reports)), key=lambda i: (reports[i].value, i))
    return reports, best


def compare_with_reported(value: float, reported: float = PAPER_MINIMUM, rel_tol: float = 0.01) -> str:
    """Label a found minimum against the published one."""
    if abs(value - reported) <= rel_tol * reported:
        return "agreement"
    if value < reported:
        return "discrepancy: found value below the reported minimum"
    return "discrepancy: found value above the reported minimum"
