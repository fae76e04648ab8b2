"""Learned k-space sub-sampling masks and zero-filled decoding.

The package learns a fixed sub-sampling pattern from training signals
by keeping the indices with the largest mean captured energy, decodes
with the adjoint of the sampled transform, and compares the result
against variable-density random masks and per-signal oracle masks.
"""

from .baselines import (
    VariableDensityParams,
    best_n_pattern,
    density_map,
    sample_variable_density,
    tune_variable_density,
)
from .errors import CsmaskError, FileFormatError
from .learning import (
    ScoreVector,
    brute_force_pattern,
    compute_scores,
    empirical_objective,
    learn_pattern,
    pattern_energy,
    top_indices,
)
from .metrics import (
    BoundInput,
    EvalReport,
    evaluate,
    generalization_bound,
    psnr,
)
from .patterns import SubsamplingPattern
from .reconstruction import (
    Reconstruction,
    captured_fraction,
    ls_reconstruct,
    normalized_error,
    reconstruct,
)
from .synthetic import (
    DiscreteEnsemble,
    empirical_gap_trial,
    generate_lowpass_ensemble,
)
from .transforms import TransformOperator, dft1d, dft2d, hadamard

__version__ = "1.0.0"

__all__ = [
    "BoundInput",
    "CsmaskError",
    "DiscreteEnsemble",
    "EvalReport",
    "FileFormatError",
    "Reconstruction",
    "ScoreVector",
    "SubsamplingPattern",
    "TransformOperator",
    "VariableDensityParams",
    "best_n_pattern",
    "brute_force_pattern",
    "captured_fraction",
    "compute_scores",
    "density_map",
    "dft1d",
    "dft2d",
    "empirical_gap_trial",
    "empirical_objective",
    "evaluate",
    "generalization_bound",
    "generate_lowpass_ensemble",
    "hadamard",
    "learn_pattern",
    "ls_reconstruct",
    "normalized_error",
    "pattern_energy",
    "psnr",
    "reconstruct",
    "sample_variable_density",
    "top_indices",
    "tune_variable_density",
    "__version__",
]
