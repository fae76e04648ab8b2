"""Volume ingestion: z-transform, slice filtering, patient splits."""

import numpy as np
import pytest

from conftest import random_complex
from csmask.dataset import (
    KSpaceVolume,
    SliceRecord,
    SliceSet,
    concat_slices,
    filter_slices,
    ifft_z,
    split_patients,
)
from csmask.errors import (
    EmptyAfterFilter,
    InvalidParams,
    InvalidShape,
    InvalidSplit,
)


def volume_from_images(images, source="pat0"):
    """Build a raw k-space volume from image-domain slices.

    Mirrors the acquisition direction: 2D FFT in x-y per slice, then a
    forward FFT along z, so ingestion has to undo both.
    """
    stack = np.stack([np.asarray(im, dtype=np.complex128) for im in images], axis=2)
    k_xy = np.fft.fft2(stack, axes=(0, 1), norm="ortho")
    k_xyz = np.fft.fft(k_xy, axis=2, norm="ortho")
    return KSpaceVolume(k_xyz, source)


class TestKSpaceVolume:
    def test_dims(self, rng):
        vol = KSpaceVolume(random_complex(rng, (4, 6, 3)), "a")
        assert vol.dims == (4, 6, 3)

    def test_non_3d_rejected(self, rng):
        with pytest.raises(InvalidShape):
            KSpaceVolume(random_complex(rng, (4, 6)), "a")


class TestIfftZ:
    def test_single_slice_is_identity(self, rng):
        data = random_complex(rng, (4, 4, 1))
        out = ifft_z(KSpaceVolume(data, "a"))
        np.testing.assert_allclose(out.data, data, atol=1e-14)

    def test_energy_preserved(self, rng):
        data = random_complex(rng, (6, 5, 7))
        out = ifft_z(KSpaceVolume(data, "a"))
        assert np.sum(np.abs(out.data) ** 2) == pytest.approx(
            np.sum(np.abs(data) ** 2), rel=1e-9
        )

    def test_forward_then_inverse_restores(self, rng):
        data = random_complex(rng, (4, 4, 6))
        forward = np.fft.fft(data, axis=2, norm="ortho")
        out = ifft_z(KSpaceVolume(forward, "a"))
        assert np.max(np.abs(out.data - data)) < 1e-12


class TestFilterSlices:
    def test_tau_zero_keeps_all_nonzero(self, rng):
        images = [np.abs(random_complex(rng, (4, 4))) + 0.1 for _ in range(5)]
        vol = ifft_z(volume_from_images(images))
        kept = filter_slices(vol, 0.0)
        assert len(kept) == 5

    def test_uniform_energy_keeps_all(self, rng):
        base = np.abs(random_complex(rng, (4, 4))) + 0.5
        vol = ifft_z(volume_from_images([base] * 4))
        assert len(filter_slices(vol, 0.9)) == 4

    def test_dominant_slice_fixture(self, rng):
        # One slice carries 100x the amplitude; tau = 0.5 of max energy
        # must keep exactly that slice.
        quiet = [np.abs(random_complex(rng, (4, 4))) + 0.1 for _ in range(3)]
        loud = 100.0 * (np.abs(random_complex(rng, (4, 4))) + 0.1)
        vol = ifft_z(volume_from_images([quiet[0], loud, quiet[1], quiet[2]]))
        kept = filter_slices(vol, 0.5)
        assert len(kept) == 1
        assert kept.slices[0].z_index == 1

    def test_zero_slices_always_dropped(self, rng):
        images = [np.zeros((4, 4)), np.abs(random_complex(rng, (4, 4))) + 0.1]
        vol = ifft_z(volume_from_images(images))
        kept = filter_slices(vol, 0.0)
        assert [rec.z_index for rec in kept.slices] == [1]

    def test_kept_slice_is_image_domain_ground_truth(self, rng):
        image = np.abs(random_complex(rng, (6, 6))) + 0.2
        vol = ifft_z(volume_from_images([image]))
        kept = filter_slices(vol, 0.0)
        np.testing.assert_allclose(kept.slices[0].signal, image, atol=1e-12)

    def test_all_filtered_out_rejected(self):
        data = np.zeros((4, 4, 3), dtype=np.complex128)
        with pytest.raises(EmptyAfterFilter):
            filter_slices(KSpaceVolume(data, "a"), 0.0)

    def test_tau_validated(self, rng):
        vol = KSpaceVolume(random_complex(rng, (4, 4, 2)), "a")
        with pytest.raises(InvalidParams):
            filter_slices(vol, 1.0)
        with pytest.raises(InvalidParams):
            filter_slices(vol, -0.1)

    def test_labels_carry_provenance(self, rng):
        images = [np.abs(random_complex(rng, (4, 4))) + 0.1 for _ in range(2)]
        kept = filter_slices(ifft_z(volume_from_images(images, "knee7")), 0.0)
        assert kept.labels() == ["knee7/z000", "knee7/z001"]


class TestSplit:
    def build(self, rng, patients, slices_per=2):
        sets = []
        for pid in patients:
            recs = tuple(
                SliceRecord(np.abs(random_complex(rng, (4, 4))) + 0.1, pid, z)
                for z in range(slices_per)
            )
            sets.append(SliceSet(recs))
        return concat_slices(sets)

    def test_first_k_by_sorted_id(self, rng):
        # Insertion order is shuffled; the split must go by id order.
        all_slices = self.build(rng, ["p03", "p01", "p02", "p00"])
        train, test = split_patients(all_slices, 2)
        assert train.patients() == ["p00", "p01"]
        assert test.patients() == ["p02", "p03"]
        assert train.role == "train" and test.role == "test"

    def test_two_patients_one_each(self, rng):
        train, test = split_patients(self.build(rng, ["a", "b"]), 1)
        assert train.patients() == ["a"]
        assert test.patients() == ["b"]

    def test_disjointness(self, rng):
        all_slices = self.build(rng, [f"p{i:02d}" for i in range(6)], 3)
        train, test = split_patients(all_slices, 4)
        assert set(train.patients()) & set(test.patients()) == set()
        assert len(train) + len(test) == len(all_slices)

    def test_too_few_patients_rejected(self, rng):
        with pytest.raises(InvalidSplit):
            split_patients(self.build(rng, ["only"]), 1)

    def test_bad_train_count_rejected(self, rng):
        both = self.build(rng, ["a", "b"])
        with pytest.raises(InvalidSplit):
            split_patients(both, 0)
        with pytest.raises(InvalidSplit):
            split_patients(both, 2)

    def test_twenty_patients_first_ten(self, rng):
        all_slices = self.build(rng, [f"case{i:02d}" for i in range(20)], 1)
        train, test = split_patients(all_slices, 10)
        assert train.patients() == [f"case{i:02d}" for i in range(10)]
        assert test.patients() == [f"case{i:02d}" for i in range(10, 20)]


class TestDeterminism:
    def test_ingestion_is_reproducible(self, rng):
        images = [np.abs(random_complex(rng, (4, 4))) + 0.1 for _ in range(3)]
        vol = volume_from_images(images)
        a = filter_slices(ifft_z(vol), 0.05)
        b = filter_slices(ifft_z(vol), 0.05)
        assert len(a) == len(b)
        for ra, rb in zip(a.slices, b.slices):
            np.testing.assert_array_equal(ra.signal, rb.signal)
            assert (ra.patient, ra.z_index) == (rb.patient, rb.z_index)
