"""Ingestion of 3D k-space volumes into 2D training/test slices.

A raw volume holds k-space samples on an (x, y, z) grid. Ingestion
first applies an inverse unitary transform along z, which decouples the
volume into independent x-y k-space planes, one per z-slice. Low-energy
slices (noise near the edges of the scanned region) are dropped, and
each kept plane is inverse-transformed to the image domain and stored
as a ground-truth slice image. Compressive sampling is then simulated
downstream by forward transform plus subsampling, so real and synthetic
data share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyAfterFilter, InvalidParams, InvalidShape, InvalidSplit


@dataclass(frozen=True)
class KSpaceVolume:
    """Complex (Nx, Ny, Nz) k-space samples from one acquisition."""

    data: np.ndarray
    source: str

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.complex128)
        object.__setattr__(self, "data", arr)
        if arr.ndim != 3:
            raise InvalidShape(f"volume must be 3D, got shape {arr.shape}")

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.data.shape


@dataclass(frozen=True)
class SliceRecord:
    """One 2D image-domain slice with its provenance."""

    signal: np.ndarray
    patient: str
    z_index: int

    @property
    def label(self) -> str:
        return f"{self.patient}/z{self.z_index:03d}"


@dataclass(frozen=True)
class SliceSet:
    """An ordered collection of slices with a role tag (train/test/all)."""

    slices: tuple[SliceRecord, ...]
    role: str = "all"

    def __len__(self) -> int:
        return len(self.slices)

    def signals(self) -> list[np.ndarray]:
        return [rec.signal for rec in self.slices]

    def labels(self) -> list[str]:
        return [rec.label for rec in self.slices]

    def patients(self) -> list[str]:
        seen: dict[str, None] = {}
        for rec in self.slices:
            seen.setdefault(rec.patient, None)
        return sorted(seen)


def ifft_z(vol: KSpaceVolume) -> KSpaceVolume:
    """Inverse unitary transform along z; planes stay k-space in x-y."""
    return KSpaceVolume(np.fft.ifft(vol.data, axis=2, norm="ortho"), vol.source)


def filter_slices(vol: KSpaceVolume, tau: float) -> SliceSet:
    """Keep z-slices with energy >= tau times the strongest slice.

    Kept planes are inverse-transformed in x-y to image-domain slices.
    Exactly-zero slices are always dropped; if nothing survives the
    volume is unusable.
    """
    if not 0.0 <= tau < 1.0:
        raise InvalidParams(f"need tau in [0, 1), got {tau}")
    energies = np.sum(np.abs(vol.data) ** 2, axis=(0, 1))
    threshold = tau * float(energies.max())
    records = []
    for z in range(vol.dims[2]):
        energy = float(energies[z])
        if energy <= 0.0 or energy < threshold:
            continue
        image = np.fft.ifft2(vol.data[:, :, z], norm="ortho")
        records.append(SliceRecord(image, vol.source, z))
    if not records:
        raise EmptyAfterFilter(f"no slices of {vol.source} pass tau={tau}")
    return SliceSet(tuple(records))


def concat_slices(sets, role: str = "all") -> SliceSet:
    records: list[SliceRecord] = []
    for s in sets:
        records.extend(s.slices)
    return SliceSet(tuple(records), role)


def split_patients(slices: SliceSet, train_count: int) -> tuple[SliceSet, SliceSet]:
    """Deterministic split: first train_count patients in id order train.

    No patient ever appears on both sides.
    """
    patients = slices.patients()
    if len(patients) < 2:
        raise InvalidSplit(f"need at least 2 patients, got {len(patients)}")
    if not 1 <= train_count < len(patients):
        raise InvalidSplit(
            f"train_count {train_count} must be in [1, {len(patients) - 1}]"
        )
    train_ids = set(patients[:train_count])
    train = tuple(rec for rec in slices.slices if rec.patient in train_ids)
    test = tuple(rec for rec in slices.slices if rec.patient not in train_ids)
    return SliceSet(train, "train"), SliceSet(test, "test")
