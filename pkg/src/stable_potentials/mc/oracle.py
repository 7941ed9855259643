"""Monte Carlo oracle: skeleton simulation of killed and reflected stable paths.

Paths are random-walk skeletons ``X_{k dt}`` built from exact stable
increments.  Exit is detected at the first skeleton point outside the
allowed region, so skeleton exit times are biased upwards by a term of
order ``dt**(1/alpha)``; comparisons allow for that one-sidedly.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy.interpolate import PchipInterpolator

from ..errors import DomainError
from ..killed import DensityGrid
from ..special import QuadratureSpec, integrate_singular
from ..params import StableParams, make_params
from . import _kernels

BUDGET_ENV = "STABLE_POTENTIALS_MC_BUDGET"
DEFAULT_BUDGET = 10**12


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(float(raw)) if raw else DEFAULT_BUDGET


@dataclass(frozen=True)
class MCConfig:
    n_paths: int = 100_000
    step: float = 1e-4
    max_steps: int = 10_000_000
    seed: int = 0
    n_cells: int = 50
    chunk: int = 20_000
    budget: int = field(default_factory=default_budget)

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be at least 1")
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.max_steps < 1 or self.n_cells < 1 or self.chunk < 1:
            raise ValueError("max_steps, n_cells and chunk must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        if self.n_paths * self.max_steps > self.budget:
            raise ValueError(
                f"n_paths * max_steps = {self.n_paths * self.max_steps:.3g} exceeds the "
                f"budget {self.budget:.3g} (override with {BUDGET_ENV})"
            )


@dataclass
class ExitRecord:
    path_id: int
    exited_up: bool
    capped: bool
    exit_time: float
    position_before: float
    position_after: float
    running_max_before: float
    occupation: np.ndarray


@dataclass
class MCEstimate:
    value: float
    std_error: float
    n_effective: int
    seed: int


@dataclass
class ExitRecords:
    """Columnar store of simulated paths; iterating yields :class:`ExitRecord`."""

    path_id: np.ndarray
    exited_up: np.ndarray
    capped: np.ndarray
    steps: np.ndarray
    position_before: np.ndarray
    position_after: np.ndarray
    running_max_before: np.ndarray
    counts: np.ndarray
    step: float
    edges: np.ndarray
    seed: int
    barrier_lo: float
    barrier_hi: float

    def __len__(self) -> int:
        return len(self.path_id)

    @property
    def exit_time(self) -> np.ndarray:
        return self.steps * self.step

    @property
    def occupation(self) -> np.ndarray:
        return self.counts * self.step

    def __iter__(self) -> Iterator[ExitRecord]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i: int) -> ExitRecord:
        return ExitRecord(
            path_id=int(self.path_id[i]),
            exited_up=bool(self.exited_up[i]),
            capped=bool(self.capped[i]),
            exit_time=float(self.steps[i] * self.step),
            position_before=float(self.position_before[i]),
            position_after=float(self.position_after[i]),
            running_max_before=float(self.running_max_before[i]),
            occupation=self.counts[i] * self.step,
        )

    def overshoots(self) -> np.ndarray:
        up = self.exited_up
        return self.position_after[up] - self.barrier_hi

    def undershoots(self) -> np.ndarray:
        up = self.exited_up
        return self.barrier_hi - self.position_before[up]

    def to_csv(self, path, occupation_path=None) -> None:
        """One row per path; occupation histograms go to a side file keyed by path id."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([
                "path_id", "exited_up", "capped", "exit_time",
                "position_before", "position_after", "running_max_before",
            ])
            for i in range(len(self)):
                w.writerow([
                    int(self.path_id[i]), int(self.exited_up[i]), int(self.capped[i]),
                    repr(float(self.steps[i] * self.step)), repr(float(self.position_before[i])),
                    repr(float(self.position_after[i])), repr(float(self.running_max_before[i])),
                ])
        if occupation_path is not None:
            with open(occupation_path, "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["path_id"] + [f"cell_{c}" for c in range(self.counts.shape[1])])
                for i in range(len(self)):
                    w.writerow([int(self.path_id[i])] + [repr(float(v)) for v in self.counts[i] * self.step])


def _require_admissible(p: StableParams) -> None:
    # raises for parameters built with strict=False outside the admissible set
    make_params(p.alpha, p.rho)


def sample_stable(p: StableParams, unit_time: float, rng: np.random.Generator, size=None):
    """Stable increment(s) over duration ``unit_time`` with characteristic
    function ``exp(-unit_time * Psi(theta))``."""
    if not unit_time > 0:
        raise DomainError(f"unit_time must be positive, got {unit_time}")
    _require_admissible(p)
    n = 1 if size is None else int(np.prod(size))
    u1 = rng.random(n)
    u2 = rng.random(n)
    # Generator.random is [0, 1); move off 0 so that -log(u2) stays finite
    u1 = np.where(u1 == 0.0, 0.5 / 2**53, u1)
    u2 = np.where(u2 == 0.0, 0.5 / 2**53, u2)
    z = _kernels.stable_array(p.alpha, math.pi * (p.rho - 0.5), u1, u2)
    z *= unit_time ** (1.0 / p.alpha)
    if size is None:
        return float(z[0])
    return z.reshape(size)


def _simulate(p, x, lo, hi, reflected, config: MCConfig) -> ExitRecords:
    _require_admissible(p)
    n, nc = config.n_paths, config.n_cells
    ids = np.arange(n, dtype=np.int64)
    exited = np.zeros(n, dtype=np.bool_)
    capped = np.zeros(n, dtype=np.bool_)
    steps = np.zeros(n, dtype=np.int64)
    before = np.empty(n)
    after = np.empty(n)
    rmax = np.empty(n)
    counts = np.zeros((n, nc), dtype=np.int32)
    width = (hi - lo) / nc
    scale = config.step ** (1.0 / p.alpha)
    shift = math.pi * (p.rho - 0.5)
    for start in range(0, n, config.chunk):
        sl = slice(start, min(n, start + config.chunk))
        _kernels.run_paths(
            p.alpha, shift, scale, float(x), float(lo), float(hi), reflected,
            np.uint64(config.seed), np.uint64(start), config.max_steps, float(lo), width,
            exited[sl], capped[sl], steps[sl], before[sl], after[sl], rmax[sl], counts[sl],
        )
    return ExitRecords(
        path_id=ids, exited_up=exited, capped=capped, steps=steps,
        position_before=before, position_after=after, running_max_before=rmax,
        counts=counts, step=config.step, edges=np.linspace(lo, hi, nc + 1),
        seed=config.seed, barrier_lo=lo, barrier_hi=hi,
    )


def simulate_exit(p: StableParams, x: float, interval=(0.0, 1.0), config: MCConfig = MCConfig()) -> ExitRecords:
    """Skeleton paths from ``x`` run until they leave ``interval``."""
    lo, hi = (interval.lo, interval.hi) if hasattr(interval, "lo") else interval
    if not lo < x < hi:
        raise DomainError(f"start x={x} must lie inside ({lo}, {hi})")
    return _simulate(p, x, lo, hi, False, config)


def simulate_reflected(p: StableParams, x: float, barrier: float = 1.0, config: MCConfig = MCConfig()) -> ExitRecords:
    """Skeleton of the process reflected at its infimum, run to passage above ``barrier``."""
    if not 0.0 <= x < barrier:
        raise DomainError(f"start x={x} must lie in [0, {barrier})")
    return _simulate(p, x, 0.0, barrier, True, config)


def _as_records(records) -> ExitRecords:
    if isinstance(records, ExitRecords):
        if len(records) == 0:
            raise ValueError("cannot estimate from an empty record stream")
        return records
    raise TypeError("expected an ExitRecords batch")


def estimate_density(records, grid=None) -> tuple[DensityGrid, list[MCEstimate]]:
    """Cell-averaged occupation density with per-cell standard errors.

    ``records`` is an :class:`ExitRecords` batch or any iterable of
    :class:`ExitRecord`.  ``grid`` holds the cell edges; it may be omitted
    for a batch, in which case the simulation cells are used, and must
    match them otherwise.
    """
    if isinstance(records, ExitRecords):
        rec = _as_records(records)
        edges = rec.edges
        if grid is not None and not np.array_equal(np.asarray(grid, dtype=float), edges):
            raise ValueError("grid does not match the cells the records were simulated on")
        occ = rec.counts * rec.step
        seed = rec.seed
    else:
        items = list(records)
        if not items:
            raise ValueError("cannot estimate from an empty record stream")
        if grid is None:
            raise ValueError("cell edges are required for a plain record stream")
        edges = np.asarray(grid, dtype=float)
        occ = np.array([r.occupation for r in items], dtype=float)
        if occ.shape[1] != edges.size - 1:
            raise ValueError("grid does not match the occupation histograms")
        seed = -1
    widths = np.diff(edges)
    n = occ.shape[0]
    mean = occ.mean(axis=0)
    se = occ.std(axis=0, ddof=1) / math.sqrt(n) if n > 1 else np.zeros_like(mean)
    values = mean / widths
    errors = se / widths
    mids = 0.5 * (edges[:-1] + edges[1:])
    dens = DensityGrid(list(mids), [float(v) for v in values])
    ests = [MCEstimate(float(v), float(e), n, seed) for v, e in zip(values, errors)]
    return dens, ests


def mean_time(records) -> MCEstimate:
    rec = _as_records(records)
    t = rec.exit_time
    se = float(t.std(ddof=1) / math.sqrt(len(t))) if len(t) > 1 else 0.0
    return MCEstimate(float(t.mean()), se, len(t), rec.seed)


def fraction_up(records) -> MCEstimate:
    rec = _as_records(records)
    f = rec.exited_up.astype(float)
    n = len(f)
    m = float(f.mean())
    return MCEstimate(m, math.sqrt(max(m * (1 - m), 0.0) / n), n, rec.seed)


@dataclass
class DiscrepancyReport:
    z_scores: list[float]
    sup_rel_deviation: float
    ks_distance: float | None
    threshold: float
    passed: bool
    cells_compared: int


def central_mask(edges, central: float = 0.8) -> np.ndarray:
    """Cells whose midpoints fall in the central ``central`` fraction of the range."""
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[0], edges[-1]
    margin = 0.5 * (1.0 - central) * (hi - lo)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return (mids >= lo + margin) & (mids <= hi - margin)


def compare(
    analytic,
    estimate: tuple[DensityGrid, list[MCEstimate]],
    *,
    edges=None,
    central: float = 0.8,
    threshold: float = 0.05,
) -> DiscrepancyReport:
    """Compare analytic cell averages with an occupation-density estimate.

    ``analytic`` is either the sequence of analytic cell averages or a
    callable mapping ``(cell_lo, cell_hi)`` to one.  The pass criterion is
    the sup relative deviation over the central cells.
    """
    grid, ests = estimate
    n_cells = len(grid)
    if callable(analytic):
        if edges is None:
            raise ValueError("edges are required when analytic is a callable")
        analytic = [analytic(a, b) for a, b in zip(edges[:-1], edges[1:])]
    target = np.asarray(analytic, dtype=float)
    if target.shape != (n_cells,):
        raise ValueError(f"analytic values cover {target.size} cells, estimate has {n_cells}")
    if edges is None:
        mids = np.asarray(grid.points)
        half = 0.5 * (mids[1] - mids[0]) if n_cells > 1 else 0.5
        edges = np.concatenate([[mids[0] - half], mids + half])
    values = np.asarray(grid.values)
    se = np.array([e.std_error for e in ests])
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, (values - target) / se, 0.0)
    mask = central_mask(edges, central)
    rel = np.abs(values[mask] - target[mask]) / np.abs(target[mask])
    sup = float(rel.max()) if rel.size else 0.0
    return DiscrepancyReport(
        z_scores=[float(v) for v in z],
        sup_rel_deviation=sup,
        ks_distance=None,
        threshold=threshold,
        passed=bool(sup <= threshold),
        cells_compared=int(mask.sum()),
    )


CELL_SPEC = QuadratureSpec(rel_tol=1e-8, abs_tol=1e-12, max_subdivisions=200)


def cell_averages(fn: Callable[[float], float], edges, singular=None, spec: QuadratureSpec = CELL_SPEC) -> np.ndarray:
    """Average of ``fn`` over each cell between consecutive ``edges``.

    ``singular`` maps abscissae to the power-law exponent of ``fn`` there;
    cells are split at those points so each piece has its singularities
    at the ends.  Points within 1e-12 of an edge are snapped onto it.
    """
    singular = dict(singular or {})
    edges = np.array(edges, dtype=float)
    for s in singular:
        k = int(np.argmin(np.abs(edges - s)))
        if abs(edges[k] - s) <= 1e-12:
            edges[k] = s
    out = np.empty(edges.size - 1)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        cuts = [a] + sorted(s for s in singular if a < s < b) + [b]
        total = 0.0
        for lo, hi in zip(cuts, cuts[1:]):
            total += integrate_singular(fn, lo, hi, singular.get(lo, 0.0), singular.get(hi, 0.0), spec)
        out[i] = total / (b - a)
    return out


def ks_distance(samples, cdf: Callable) -> float:
    """Kolmogorov-Smirnov distance between an empirical sample and a continuous CDF."""
    xs = np.sort(np.asarray(samples, dtype=float))
    n = xs.size
    if n == 0:
        raise ValueError("no samples")
    f = np.asarray(cdf(xs), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def interpolated_cdf(points, values) -> Callable:
    """Monotone interpolant of CDF values tabulated on ``points``."""
    points = np.asarray(points, dtype=float)
    values = np.maximum.accumulate(np.asarray(values, dtype=float))
    interp = PchipInterpolator(points, values, extrapolate=False)

    def cdf(t):
        t = np.asarray(t, dtype=float)
        out = interp(np.clip(t, points[0], points[-1]))
        out = np.where(t <= points[0], values[0], out)
        out = np.where(t >= points[-1], values[-1], out)
        return np.clip(out, 0.0, 1.0)

    return cdf
