"""Least-squares (zero-filled adjoint) decoding.

The decoder places the measured coefficients at their frequencies,
zeroes the rest, and applies the adjoint transform. This is the
minimum-norm least-squares solution, and it obeys an exact identity:
the normalized squared error equals one minus the fraction of spectral
energy the pattern captures. The identity holds deterministically for
every single signal, not just in expectation, and the test suite leans
on it heavily.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSignal, InvalidShape
from .patterns import SubsamplingPattern
from .transforms import TransformOperator


@dataclass(frozen=True)
class Reconstruction:
    """A decoded estimate with its pattern and captured energy fraction."""

    estimate: np.ndarray
    pattern: SubsamplingPattern
    captured_fraction: float | None = None


def ls_reconstruct(
    op: TransformOperator, pat: SubsamplingPattern, y
) -> np.ndarray:
    """Decode n measurements into a flat length-p complex estimate."""
    if pat.p != op.p:
        raise InvalidShape(f"pattern universe {pat.p} does not match p={op.p}")
    return op.adjoint(pat.embed(y))


def normalized_error(x_hat, x_true) -> float:
    """Squared error relative to the true signal's energy."""
    a = np.asarray(x_hat, dtype=np.complex128).ravel()
    b = np.asarray(x_true, dtype=np.complex128).ravel()
    if a.size != b.size:
        raise InvalidShape(f"length mismatch: {a.size} vs {b.size}")
    denom = float(np.vdot(b, b).real)
    if denom == 0.0:
        raise DegenerateSignal("true signal has zero norm")
    diff = a - b
    return float(np.vdot(diff, diff).real) / denom


def captured_fraction(
    op: TransformOperator, pat: SubsamplingPattern, x
) -> float:
    """Fraction of the signal's spectral energy lying on the pattern."""
    flat = np.asarray(x, dtype=np.complex128).ravel()
    norm_sq = float(np.vdot(flat, flat).real)
    if norm_sq == 0.0:
        raise DegenerateSignal("signal has zero norm")
    kept = pat.subsample(op.forward(flat))
    return float(np.vdot(kept, kept).real) / norm_sq


def reconstruct(
    op: TransformOperator, pat: SubsamplingPattern, x_true
) -> Reconstruction:
    """Simulate measure-then-decode on a known signal."""
    flat = np.asarray(x_true, dtype=np.complex128).ravel()
    y = pat.subsample(op.forward(flat))
    estimate = op.adjoint(pat.embed(y))
    norm_sq = float(np.vdot(flat, flat).real)
    if norm_sq == 0.0:
        raise DegenerateSignal("signal has zero norm")
    fraction = float(np.vdot(y, y).real) / norm_sq
    return Reconstruction(estimate, pat, fraction)
