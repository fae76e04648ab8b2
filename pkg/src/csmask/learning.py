"""Pattern learning from training signals.

The per-index score v_j is the average fraction of each training
signal's energy carried by transform coefficient j. The sum of scores
over a candidate pattern is therefore the empirical objective being
maximized, and because that objective is modular (a plain sum of
per-index values), taking the n largest scores solves the size-n
selection problem exactly. A brute-force enumerator is kept alongside as
an independent oracle for tests.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSignal,
    EmptyTrainingSet,
    InvalidBudget,
    InvalidShape,
    TooLarge,
)
from .patterns import SubsamplingPattern
from .transforms import TransformOperator

ENUMERATION_GUARD = 10**6


@dataclass(frozen=True)
class ScoreVector:
    """Per-index energies aggregated over m training signals.

    With normalized=True every score lies in [0, 1] and the scores sum
    to 1 (each signal contributes its energy distribution, not its raw
    energy). normalized=False skips the per-signal division and is kept
    only for comparison runs.
    """

    scores: np.ndarray
    m: int
    shape: tuple[int, ...]
    normalized: bool = True

    @property
    def p(self) -> int:
        return self.scores.size


def compute_scores(
    op: TransformOperator, training, normalized: bool = True
) -> ScoreVector:
    """Average per-coefficient energy fractions over the training set.

    One forward transform per signal, so O(m p log p) total. Signals are
    accumulated in float64 in list order, making repeated runs agree
    bit-for-bit.
    """
    total = np.zeros(op.p, dtype=np.float64)
    m = 0
    for x in training:
        flat = np.asarray(x, dtype=np.complex128).ravel()
        norm_sq = float(np.vdot(flat, flat).real)
        if norm_sq == 0.0:
            raise DegenerateSignal(f"training signal {m} has zero norm")
        energy = np.abs(op.forward(flat)) ** 2
        total += energy / norm_sq if normalized else energy
        m += 1
    if m == 0:
        raise EmptyTrainingSet("need at least one training signal")
    return ScoreVector(total / m, m, op.shape, normalized)


def pattern_energy(values: np.ndarray, indices) -> float:
    """Sum of values at the given indices, exactly rounded.

    math.fsum makes the result independent of index order, so sets that
    pick the same multiset of values compare bitwise equal.
    """
    return math.fsum(float(values[i]) for i in indices)


def empirical_objective(pat: SubsamplingPattern, scores: ScoreVector) -> float:
    """Captured score mass of a pattern; in [0, 1] for normalized scores."""
    if pat.p != scores.p:
        raise InvalidShape(
            f"pattern universe {pat.p} does not match score length {scores.p}"
        )
    return pattern_energy(scores.scores, pat.indices)


def top_indices(values: np.ndarray, n: int) -> tuple[int, ...]:
    """Indices of the n largest values, ties going to the smallest index."""
    if not 0 <= n <= values.size:
        raise InvalidBudget(f"budget {n} outside [0, {values.size}]")
    # Stable argsort of the negated values keeps ascending-index order
    # within groups of equal values.
    order = np.argsort(-np.asarray(values, dtype=np.float64), kind="stable")
    return tuple(sorted(int(i) for i in order[:n]))


def learn_pattern(scores: ScoreVector, n: int) -> SubsamplingPattern:
    """Exact maximizer of the empirical objective over size-n patterns."""
    dims = scores.shape if len(scores.shape) > 1 else None
    return SubsamplingPattern(scores.p, top_indices(scores.scores, n), dims)


def brute_force_pattern(scores: ScoreVector, n: int) -> SubsamplingPattern:
    """Exhaustive-enumeration maximizer, the test oracle for learn_pattern.

    Ties resolve to the lexicographically smallest index set, which is
    also what the top-n rule produces. Guarded against combinatorial
    blowup.
    """
    p = scores.p
    if not 0 <= n <= p:
        raise InvalidBudget(f"budget {n} outside [0, {p}]")
    if math.comb(p, n) > ENUMERATION_GUARD:
        raise TooLarge(f"C({p},{n}) exceeds the enumeration guard")
    best: tuple[int, ...] | None = None
    best_value = -math.inf
    for combo in itertools.combinations(range(p), n):
        value = pattern_energy(scores.scores, combo)
        if value > best_value:
            best_value = value
            best = combo
    dims = scores.shape if len(scores.shape) > 1 else None
    assert best is not None
    return SubsamplingPattern(p, best, dims)
