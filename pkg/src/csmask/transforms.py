"""Unitary measurement transforms.

Every operator here is a unitary p x p map applied implicitly in
O(p log p). Normalization is symmetric (an overall 1/sqrt(p)), so the
adjoint is the exact inverse and energy is preserved; the error identity
used throughout the package depends on this.

Index conventions, fixed so masks are portable across tools:

* frequencies are kept in natural (unshifted) FFT order,
* 2D spectra are flattened row-major, and pattern indices always refer
  to that flattened order,
* the Hadamard transform uses natural (Sylvester) ordering.

Any centering (fftshift) happens only at rendering time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidIndex, InvalidShape

KINDS = ("dft1d", "dft2d", "hadamard")


def _fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform, Sylvester ordering."""
    a = a.copy()
    n = a.size
    h = 1
    while h < n:
        blocks = a.reshape(-1, 2, h)
        top = blocks[:, 0, :] + blocks[:, 1, :]
        bottom = blocks[:, 0, :] - blocks[:, 1, :]
        blocks[:, 0, :] = top
        blocks[:, 1, :] = bottom
        h *= 2
    return a


def _bit_parity(v: np.ndarray) -> np.ndarray:
    """Parity of the popcount of each entry (values fit in 63 bits)."""
    v = v.astype(np.int64)
    for shift in (32, 16, 8, 4, 2, 1):
        v ^= v >> shift
    return v & 1


@dataclass(frozen=True)
class TransformOperator:
    """A unitary transform on signals of p = prod(shape) samples.

    kind is one of "dft1d", "dft2d", "hadamard". Inputs to the apply
    methods may have any layout as long as they hold exactly p samples;
    outputs are always flat length-p vectors in row-major coefficient
    order.
    """

    kind: str
    shape: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(int(d) for d in self.shape))
        if self.kind not in KINDS:
            raise InvalidShape(f"unknown transform kind {self.kind!r}")
        if any(d <= 0 for d in self.shape):
            raise InvalidShape(f"dimensions must be positive, got {self.shape}")
        if self.kind == "dft1d" and len(self.shape) != 1:
            raise InvalidShape("dft1d takes exactly one dimension")
        if self.kind == "dft2d" and len(self.shape) != 2:
            raise InvalidShape("dft2d takes exactly two dimensions")
        if self.kind == "hadamard":
            for d in self.shape:
                if d & (d - 1):
                    raise InvalidShape(
                        f"hadamard dimensions must be powers of two, got {d}"
                    )

    @property
    def p(self) -> int:
        return math.prod(self.shape)

    @cached_property
    def _sqrt_p(self) -> float:
        return math.sqrt(self.p)

    def _as_grid(self, x, name: str) -> np.ndarray:
        arr = np.asarray(x)
        if arr.size != self.p:
            raise InvalidShape(
                f"{name} has {arr.size} samples, operator expects {self.p}"
            )
        return arr.reshape(self.shape).astype(np.complex128)

    def forward(self, x) -> np.ndarray:
        """Apply the transform; returns the flat length-p spectrum."""
        grid = self._as_grid(x, "signal")
        if self.kind == "dft1d":
            return np.fft.fft(grid, norm="ortho")
        if self.kind == "dft2d":
            return np.fft.fft2(grid, norm="ortho").ravel()
        return _fwht(grid.ravel()) / self._sqrt_p

    def adjoint(self, s) -> np.ndarray:
        """Apply the conjugate transpose; inverse of forward."""
        grid = self._as_grid(s, "spectrum")
        if self.kind == "dft1d":
            return np.fft.ifft(grid, norm="ortho")
        if self.kind == "dft2d":
            return np.fft.ifft2(grid, norm="ortho").ravel()
        # The normalized Hadamard matrix is real symmetric, hence self-inverse.
        return _fwht(grid.ravel()) / self._sqrt_p

    def row_inner(self, j: int, x) -> complex:
        """Row j of the transform applied to x, without a full transform.

        Equals forward(x)[j] up to roundoff, at O(p) cost.
        """
        j = int(j)
        if not 0 <= j < self.p:
            raise InvalidIndex(f"row index {j} outside [0, {self.p})")
        grid = self._as_grid(x, "signal")
        if self.kind == "dft1d":
            (n,) = self.shape
            row = np.exp(-2j * np.pi * j * np.arange(n) / n)
            return complex(row @ grid) / self._sqrt_p
        if self.kind == "dft2d":
            n0, n1 = self.shape
            j0, j1 = divmod(j, n1)
            w0 = np.exp(-2j * np.pi * j0 * np.arange(n0) / n0)
            w1 = np.exp(-2j * np.pi * j1 * np.arange(n1) / n1)
            return complex(w0 @ grid @ w1) / self._sqrt_p
        signs = 1 - 2 * _bit_parity(j & np.arange(self.p))
        return complex(signs @ grid.ravel()) / self._sqrt_p


def dft1d(p: int) -> TransformOperator:
    return TransformOperator("dft1d", (p,))


def dft2d(n0: int, n1: int) -> TransformOperator:
    return TransformOperator("dft2d", (n0, n1))


def hadamard(*shape: int) -> TransformOperator:
    return TransformOperator("hadamard", shape)
