"""Finite discrete signal ensembles with exact population quantities.

A DiscreteEnsemble is a known distribution over K fixed signals. That
makes the population captured-energy objective, its maximizer, and the
optimality gap of an empirically learned pattern all exactly
computable, so statements that are usually about an unobservable
distribution can be checked numerically at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignal, InvalidParams
from .learning import compute_scores, learn_pattern, pattern_energy, top_indices
from .patterns import SubsamplingPattern
from .transforms import TransformOperator, dft1d, dft2d


@dataclass(frozen=True)
class DiscreteEnsemble:
    """A finite distribution over nonzero signals of a common size."""

    atoms: tuple[np.ndarray, ...]
    probs: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        atoms = tuple(np.asarray(a, dtype=np.complex128) for a in self.atoms)
        probs = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)
        if len(atoms) == 0:
            raise InvalidParams("ensemble needs at least one atom")
        if probs.shape != (len(atoms),):
            raise InvalidParams("need one probability per atom")
        if np.any(probs < 0) or abs(float(probs.sum()) - 1.0) > 1e-12:
            raise InvalidParams("probabilities must be non-negative and sum to 1")
        sizes = {a.size for a in atoms}
        if len(sizes) != 1:
            raise InvalidParams(f"atoms differ in size: {sorted(sizes)}")
        for k, a in enumerate(atoms):
            if not np.any(a):
                raise DegenerateSignal(f"atom {k} is zero")

    @property
    def p(self) -> int:
        return self.atoms[0].size

    def draw(self, m: int, seed: int):
        """m i.i.d. atoms (by reference), reproducible from the seed."""
        rng = np.random.default_rng(seed)
        picks = rng.choice(len(self.atoms), size=int(m), p=self.probs)
        return [self.atoms[i] for i in picks]


def population_scores(ens: DiscreteEnsemble, op: TransformOperator) -> np.ndarray:
    """Expected per-index energy fractions under the ensemble."""
    total = np.zeros(op.p, dtype=np.float64)
    for prob, atom in zip(ens.probs, ens.atoms):
        flat = atom.ravel()
        norm_sq = float(np.vdot(flat, flat).real)
        total += float(prob) * (np.abs(op.forward(flat)) ** 2) / norm_sq
    return total


def population_objective(
    ens: DiscreteEnsemble, op: TransformOperator, pat: SubsamplingPattern
) -> float:
    """Exact expected captured fraction of a pattern under the ensemble."""
    return pattern_energy(population_scores(ens, op), pat.indices)


def population_optimum(
    ens: DiscreteEnsemble, op: TransformOperator, n: int
) -> tuple[SubsamplingPattern, float]:
    """The best size-n pattern for the true distribution and its value.

    Exact because the objective is modular: top-n per-index expected
    scores, ties to the smallest index.
    """
    scores = population_scores(ens, op)
    indices = top_indices(scores, n)
    dims = op.shape if len(op.shape) > 1 else None
    pattern = SubsamplingPattern(op.p, indices, dims)
    return pattern, pattern_energy(scores, indices)


def empirical_gap_trial(
    ens: DiscreteEnsemble, op: TransformOperator, n: int, m: int, seed: int
) -> float:
    """Optimality gap of a pattern learned from m fresh draws.

    Draws m i.i.d. training signals, learns a size-n pattern from them,
    and returns the population-optimal value minus the learned pattern's
    population value. Never negative.
    """
    scores = population_scores(ens, op)
    optimum = pattern_energy(scores, top_indices(scores, n))
    training = ens.draw(m, seed)
    learned = learn_pattern(compute_scores(op, training), n)
    return optimum - pattern_energy(scores, learned.indices)


def frequency_radius(dims: tuple[int, ...]) -> np.ndarray:
    """Wrapped integer distance of each coefficient from zero frequency.

    Flat, row-major, unshifted order, matching pattern indices.
    """
    axes = [np.abs(np.fft.fftfreq(size) * size) for size in dims]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.sqrt(sum(g * g for g in grids)).ravel()


def generate_lowpass_ensemble(
    shape, decay: float, count: int, seed: int
) -> DiscreteEnsemble:
    """Equiprobable random signals with polynomially decaying spectra.

    Each atom's spectrum is complex gaussian noise shaped by the
    envelope (1 + radius)^(-decay), so expected spectral magnitude falls
    off polynomially with frequency radius; decay 0 gives a flat
    expected spectrum. Deterministic for a fixed seed.
    """
    dims = (int(shape),) if np.isscalar(shape) else tuple(int(v) for v in shape)
    if any(v <= 0 for v in dims) or len(dims) not in (1, 2):
        raise InvalidParams(f"need one or two positive dimensions, got {dims}")
    if decay < 0:
        raise InvalidParams(f"need decay >= 0, got {decay}")
    if count < 1:
        raise InvalidParams(f"need at least one atom, got {count}")
    op = dft1d(dims[0]) if len(dims) == 1 else dft2d(*dims)
    envelope = (1.0 + frequency_radius(dims)) ** (-float(decay))
    rng = np.random.default_rng(seed)
    atoms = []
    for _ in range(count):
        noise = rng.standard_normal(op.p) + 1j * rng.standard_normal(op.p)
        atoms.append(op.adjoint(envelope * noise / np.sqrt(2.0)))
    probs = np.full(count, 1.0 / count)
    return DiscreteEnsemble(tuple(atoms), probs, seed)
