"""Shared fixtures and helpers for the test suite."""

import numpy as np
import pytest

from csmask.transforms import TransformOperator, dft1d, dft2d, hadamard


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """Complex gaussian array, unit variance per entry."""
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / np.sqrt(2.0)


def operator_matrix(op: TransformOperator) -> np.ndarray:
    """Dense p x p matrix of the operator, built column by column.

    Slow by construction; this is the oracle the fast paths are
    checked against.
    """
    p = op.p
    cols = []
    for j in range(p):
        e = np.zeros(p, dtype=np.complex128)
        e[j] = 1.0
        cols.append(op.forward(e))
    return np.stack(cols, axis=1)


ALL_OPS = [
    dft1d(8),
    dft1d(13),
    dft2d(4, 6),
    dft2d(5, 5),
    hadamard(16),
    hadamard(4, 8),
]


@pytest.fixture(params=ALL_OPS, ids=lambda op: f"{op.kind}{op.shape}")
def any_op(request) -> TransformOperator:
    return request.param


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
