"""Baseline pattern generators.

Two baselines are implemented:

* variable-density random sampling in the style of Lustig et al.'s
  compressed-sensing MRI work: a fully sampled central disk of
  normalized radius r plus a random draw whose density falls off as
  (1 - rho)^d with distance rho from the spectrum center,
* the per-signal best-n oracle, which keeps the n largest-magnitude
  coefficients of a specific signal and therefore upper-bounds what any
  fixed pattern of the same size can capture on that signal.

Distances are measured on per-axis normalized frequency offsets, with
rho = 1 at the farthest corner of the spectrum. Random draws use
weighted sampling without replacement via Efraimidis-Spirakis keys on a
seeded PCG64 generator, so a (seed, r, d, n, dims) tuple always
reproduces the same pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetTooSmall, EmptyTrainingSet, InvalidBudget, InvalidParams
from .learning import top_indices
from .metrics import evaluate
from .patterns import SubsamplingPattern
from .transforms import TransformOperator


def _normalized_radius(dims: tuple[int, ...]) -> np.ndarray:
    """Distance from the spectrum center in unshifted index order.

    Each axis offset is normalized by that axis's largest offset, and
    the euclidean norm is scaled so rho = 1 at the farthest corner.
    """
    axes = []
    for size in dims:
        offsets = np.fft.fftfreq(size) * size
        half = float(np.abs(offsets).max())
        axes.append(offsets / half if half > 0 else offsets)
    grids = np.meshgrid(*axes, indexing="ij")
    rho = np.sqrt(sum(g * g for g in grids))
    return rho / np.sqrt(len(dims))


def _check_density_params(dims, r: float, d: float) -> tuple[int, ...]:
    dims = tuple(int(v) for v in dims)
    if len(dims) != 2 or any(v <= 0 for v in dims):
        raise InvalidParams(f"need two positive dimensions, got {dims}")
    if not 0.0 <= r <= 1.0:
        raise InvalidParams(f"need radius r in [0, 1], got {r}")
    if d < 0:
        raise InvalidParams(f"need degree d >= 0, got {d}")
    return dims


def density_map(dims, r: float, d: float) -> np.ndarray:
    """Per-index sampling weights in [0, 1], unshifted order.

    1 on the fully sampled disk rho <= r, (1 - rho)^d outside it.
    """
    dims = _check_density_params(dims, r, d)
    rho = _normalized_radius(dims)
    return np.where(rho <= r, 1.0, (1.0 - rho) ** d)


@dataclass(frozen=True)
class VariableDensityParams:
    """A (radius, degree) density plus the seed and budget of one draw."""

    r: float
    d: float
    seed: int
    n: int
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = _check_density_params(self.dims, self.r, self.d)
        object.__setattr__(self, "dims", dims)
        if not 0 <= self.n <= int(np.prod(dims)):
            raise InvalidBudget(f"budget {self.n} outside [0, {int(np.prod(dims))}]")


def sample_variable_density(params: VariableDensityParams) -> SubsamplingPattern:
    """Draw exactly n distinct indices: the full disk plus a weighted draw.

    Deterministic given the seed. Outside the disk, indices are drawn
    without replacement with probability proportional to the density
    weights (Efraimidis-Spirakis keys log(u)/w, top n - |disk| kept).
    """
    p = int(np.prod(params.dims))
    rho = _normalized_radius(params.dims).ravel()
    disk = np.flatnonzero(rho <= params.r)
    if disk.size > params.n:
        raise BudgetTooSmall(
            f"fully sampled disk holds {disk.size} indices, budget is {params.n}"
        )
    remaining = params.n - disk.size
    outside = np.flatnonzero(rho > params.r)
    weights = (1.0 - rho[outside]) ** params.d
    rng = np.random.default_rng(params.seed)
    u = 1.0 - rng.random(outside.size)
    keys = np.full(outside.size, -np.inf)
    positive = weights > 0
    keys[positive] = np.log(u[positive]) / weights[positive]
    chosen = outside[np.argsort(-keys, kind="stable")[:remaining]]
    indices = np.sort(np.concatenate([disk, chosen]))
    return SubsamplingPattern(p, tuple(int(i) for i in indices), params.dims)


@dataclass(frozen=True)
class TuningEntry:
    r: float
    d: float
    seed: int
    mean_psnr_db: float


@dataclass(frozen=True)
class TuningResult:
    best: VariableDensityParams
    entries: tuple[TuningEntry, ...]


def grid_point_seed(seed: int, index: int) -> int:
    """Per-grid-point seed derived deterministically from a base seed."""
    return int(np.random.SeedSequence((int(seed), int(index))).generate_state(1)[0])


def tune_variable_density(
    training,
    op: TransformOperator,
    n: int,
    grid,
    seed: int = 0,
) -> TuningResult:
    """Pick the (r, d) whose drawn pattern scores the best training PSNR.

    One pattern is drawn per grid point with a seed derived from the
    base seed and the point's position; ties keep the earliest grid
    point in the given (row-major) order.
    """
    grid = [(float(r), float(d)) for r, d in grid]
    if not grid:
        raise InvalidParams("empty (r, d) grid")
    training = list(training)
    if not training:
        raise EmptyTrainingSet("need training signals to tune against")

    entries: list[TuningEntry] = []
    best_params: VariableDensityParams | None = None
    best_mean = -np.inf
    for i, (r, d) in enumerate(grid):
        params = VariableDensityParams(r, d, grid_point_seed(seed, i), n, op.shape)
        pattern = sample_variable_density(params)
        report = evaluate(op, pattern, training)
        entries.append(TuningEntry(r, d, params.seed, report.mean_psnr_db))
        if report.mean_psnr_db > best_mean:
            best_mean = report.mean_psnr_db
            best_params = params
    assert best_params is not None
    return TuningResult(best_params, tuple(entries))


def best_n_pattern(op: TransformOperator, x, n: int) -> SubsamplingPattern:
    """Oracle keeping the n largest-magnitude coefficients of this signal.

    Uses the ground truth, so it bounds fixed-pattern schemes rather
    than being one. Ties go to the smallest index.
    """
    magnitudes = np.abs(op.forward(x))
    dims = op.shape if len(op.shape) > 1 else None
    return SubsamplingPattern(op.p, top_indices(magnitudes, n), dims)
