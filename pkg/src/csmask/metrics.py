"""Reconstruction quality metrics and the sample-complexity bound.

PSNR convention used everywhere in this package: both signals are taken
as magnitude images, the peak is the per-image maximum magnitude of the
reference (raw complex data has no fixed dynamic range such as 255),
and exact reconstructions report +inf. Report writers must state this
convention in their headers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateSignal, InvalidParams, InvalidShape
from .patterns import SubsamplingPattern
from .reconstruction import normalized_error, reconstruct
from .transforms import TransformOperator


def psnr(reference, estimate) -> float:
    """Peak signal-to-noise ratio in dB between magnitude images.

    peak is the maximum magnitude of the reference; MSE is taken between
    the two magnitude images. Returns math.inf when the MSE is zero.
    """
    ref = np.abs(np.asarray(reference, dtype=np.complex128).ravel())
    est = np.abs(np.asarray(estimate, dtype=np.complex128).ravel())
    if ref.size == 0 or est.size == 0:
        raise InvalidShape("empty input")
    if ref.size != est.size:
        raise InvalidShape(f"length mismatch: {ref.size} vs {est.size}")
    peak = float(ref.max())
    if peak == 0.0:
        raise DegenerateSignal("reference has zero peak")
    mse = float(np.mean((est - ref) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def log_binomial(p: int, n: int) -> float:
    """log C(p, n) via log-gamma, safe for p in the 10^5 range."""
    if not 0 <= n <= p:
        raise InvalidParams(f"need 0 <= n <= p, got n={n}, p={p}")
    return math.lgamma(p + 1) - math.lgamma(n + 1) - math.lgamma(p - n + 1)


def generalization_bound(m: int, p: int, n: int, beta: float) -> float:
    """High-probability bound on the learned pattern's captured-energy gap.

    sqrt((2/m) * (log C(p, n) + log(2/beta))), natural log. Valid with
    probability at least 1 - beta over the m training draws.
    """
    if m < 1:
        raise InvalidParams(f"need m >= 1, got {m}")
    if not 0.0 < beta < 1.0:
        raise InvalidParams(f"need beta in (0, 1), got {beta}")
    return math.sqrt((2.0 / m) * (log_binomial(p, n) + math.log(2.0 / beta)))


@dataclass(frozen=True)
class BoundInput:
    """Validated inputs for the generalization bound."""

    m: int
    p: int
    n: int
    beta: float

    def __post_init__(self):
        if self.m < 1:
            raise InvalidParams(f"need m >= 1, got {self.m}")
        if self.p < 1:
            raise InvalidParams(f"need p >= 1, got {self.p}")
        if not 0 <= self.n <= self.p:
            raise InvalidParams(f"need 0 <= n <= p, got n={self.n}, p={self.p}")
        if not 0.0 < self.beta < 1.0:
            raise InvalidParams(f"need beta in (0, 1), got {self.beta}")

    @property
    def value(self) -> float:
        return generalization_bound(self.m, self.p, self.n, self.beta)


@dataclass(frozen=True)
class EvalReport:
    """Per-signal and aggregate quality of one pattern on one signal set.

    mean_psnr_db averages the finite entries only; exact_count reports
    how many +inf (exact reconstruction) entries were excluded. The mean
    of an all-exact report is +inf.
    """

    pattern_id: str
    rate: Fraction
    labels: tuple[str, ...]
    psnr_db: tuple[float, ...]
    errors: tuple[float, ...]
    mean_psnr_db: float
    mean_error: float
    exact_count: int


def evaluate(
    op: TransformOperator,
    pattern: SubsamplingPattern,
    signals,
    labels=None,
    pattern_id: str | None = None,
) -> EvalReport:
    """Subsample, decode and score every signal against its original."""
    signals = list(signals)
    if not signals:
        raise InvalidShape("empty evaluation set")
    if labels is None:
        labels = [str(i) for i in range(len(signals))]
    labels = [str(s) for s in labels]
    if len(labels) != len(signals):
        raise InvalidShape("labels and signals differ in length")

    psnrs: list[float] = []
    errors: list[float] = []
    for x in signals:
        rec = reconstruct(op, pattern, x)
        psnrs.append(psnr(x, rec.estimate))
        errors.append(normalized_error(rec.estimate, x))

    finite = [v for v in psnrs if math.isfinite(v)]
    mean_psnr = math.fsum(finite) / len(finite) if finite else math.inf
    mean_error = math.fsum(errors) / len(errors)
    return EvalReport(
        pattern_id=pattern_id if pattern_id is not None else pattern.digest(),
        rate=pattern.rate,
        labels=tuple(labels),
        psnr_db=tuple(psnrs),
        errors=tuple(errors),
        mean_psnr_db=mean_psnr,
        mean_error=mean_error,
        exact_count=len(psnrs) - len(finite),
    )
