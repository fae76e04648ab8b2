"""Sub-sampling patterns over flattened coefficient indices.

A pattern is an ordered set of n distinct indices into a length-p
spectrum. 1D and 2D experiments share this type; 2D patterns carry their
original grid shape as metadata so masks can be rendered and serialized
in a self-describing way.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import InvalidIndex, InvalidShape


@dataclass(frozen=True)
class SubsamplingPattern:
    """n distinct sorted indices into a length-p spectrum."""

    p: int
    indices: tuple[int, ...]
    dims: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if self.dims is not None:
            dims = tuple(int(d) for d in self.dims)
            object.__setattr__(self, "dims", dims)
            if math.prod(dims) != self.p:
                raise InvalidShape(f"dims {dims} do not multiply to p={self.p}")
        if self.p < 0:
            raise InvalidShape("universe size must be non-negative")
        prev = -1
        for i in self.indices:
            if i <= prev:
                raise InvalidIndex("indices must be strictly increasing")
            prev = i
        if self.indices and self.indices[-1] >= self.p:
            raise InvalidIndex(
                f"index {self.indices[-1]} outside universe of size {self.p}"
            )

    @property
    def n(self) -> int:
        return len(self.indices)

    @property
    def rate(self) -> Fraction:
        """Sampling rate n/p as an exact rational."""
        return Fraction(self.n, self.p)

    @cached_property
    def index_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)

    def digest(self) -> str:
        """Short stable identifier derived from (p, dims, indices)."""
        canon = f"{self.p}|{self.dims}|{self.indices}".encode()
        return hashlib.sha256(canon).hexdigest()[:12]

    def as_mask(self) -> np.ndarray:
        """Boolean mask, reshaped to dims when the pattern has them."""
        mask = np.zeros(self.p, dtype=bool)
        mask[self.index_array] = True
        if self.dims is not None:
            return mask.reshape(self.dims)
        return mask

    def subsample(self, s) -> np.ndarray:
        """Keep the pattern's entries of a length-p spectrum, in index order."""
        arr = np.asarray(s)
        if arr.size != self.p:
            raise InvalidShape(f"spectrum has {arr.size} entries, expected {self.p}")
        return arr.ravel()[self.index_array]

    def embed(self, y) -> np.ndarray:
        """Scatter n measurements back to length p, zero elsewhere.

        Right inverse of subsample: subsample(embed(y)) == y exactly.
        """
        arr = np.asarray(y)
        if arr.size != self.n:
            raise InvalidShape(f"got {arr.size} measurements, expected {self.n}")
        out = np.zeros(self.p, dtype=np.complex128)
        out[self.index_array] = arr.ravel()
        return out


def full_pattern(p: int, dims: tuple[int, ...] | None = None) -> SubsamplingPattern:
    return SubsamplingPattern(p, tuple(range(p)), dims)


def from_mask(mask) -> SubsamplingPattern:
    """Build a pattern from a boolean mask array (dims taken from its shape)."""
    arr = np.asarray(mask, dtype=bool)
    dims = arr.shape if arr.ndim > 1 else None
    indices = tuple(int(i) for i in np.flatnonzero(arr.ravel()))
    return SubsamplingPattern(arr.size, indices, dims)
