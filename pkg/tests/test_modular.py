"""Exact CRT arithmetic and circle geometry."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from statrcrt import (
    Clustering,
    ModulusSet,
    ObservationMatrix,
    ValidationError,
    crt_reconstruct,
    project_common,
    wrapped_distance,
)


class TestCrtReconstruct:
    def test_known_value(self):
        # x = 2 mod 3, x = 3 mod 5 -> 8
        assert crt_reconstruct([2, 3], [3, 5]) == 8

    @pytest.mark.parametrize("moduli", [[2, 3], [2, 3, 5], [23, 29], [7, 11, 13]])
    def test_bijection(self, moduli):
        total = math.prod(moduli)
        seen = set()
        for x in range(total):
            residues = [x % m for m in moduli]
            y = crt_reconstruct(residues, moduli)
            assert y == x
            seen.add(y)
        assert len(seen) == total

    def test_single_modulus(self):
        assert crt_reconstruct([4], [7]) == 4

    def test_rejects_non_coprime(self):
        with pytest.raises(ValidationError):
            crt_reconstruct([1, 1], [4, 6])

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValidationError):
            crt_reconstruct([1, 2, 3], [3, 5])

    def test_rejects_out_of_range_residue(self):
        with pytest.raises(ValidationError):
            crt_reconstruct([5], [5])

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            crt_reconstruct([], [])

    def test_exact_for_large_products(self):
        moduli = [23, 29, 31, 37, 41, 43]
        x = 588_102_457  # arbitrary value below the product
        assert x < math.prod(moduli)
        assert crt_reconstruct([x % m for m in moduli], moduli) == x


class TestModulusSet:
    def test_from_sigmas_weights(self):
        ms = ModulusSet.from_sigmas(100.0, [23, 29], [2.0, 5.0])
        assert ms.weights == (1.0 / 8.0, 1.0 / 50.0)
        assert ms.moduli == (2300.0, 2900.0)
        assert ms.quotient_range == 23 * 29
        assert ms.dynamic_range == 100.0 * 23 * 29

    def test_from_weights_roundtrip(self):
        ms = ModulusSet.from_weights(5.0, [2, 3], [0.5, 2.0])
        back = ModulusSet.from_sigmas(5.0, [2, 3], ms.sigmas)
        assert back.weights == pytest.approx(ms.weights)

    def test_subset_preserves_per_modulus_data(self):
        ms = ModulusSet.from_sigmas(100.0, [23, 29, 31, 37], [1.0, 2.0, 3.0, 4.0])
        sub = ms.subset((1, 3))
        assert sub.coprimes == (29, 37)
        assert sub.sigmas == (2.0, 4.0)
        assert sub.weights == (ms.weights[1], ms.weights[3])

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(gamma=0.0, coprimes=(2, 3), sigmas=(1.0, 1.0), weights=(1.0, 1.0)),
            dict(gamma=5.0, coprimes=(), sigmas=(), weights=()),
            dict(gamma=5.0, coprimes=(4, 6), sigmas=(1.0, 1.0), weights=(1.0, 1.0)),
            dict(gamma=5.0, coprimes=(2, 3), sigmas=(1.0,), weights=(1.0,)),
            dict(gamma=5.0, coprimes=(2, 3), sigmas=(1.0, 1.0), weights=(1.0, -1.0)),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            ModulusSet(**kwargs)

    def test_rejects_nonpositive_sigma(self):
        with pytest.raises(ValidationError):
            ModulusSet.from_sigmas(5.0, [2, 3], [1.0, 0.0])


class TestProjectCommon:
    def test_scalar_and_negative(self):
        assert project_common(12.5, 5.0) == 2.5
        assert project_common(-1.0, 5.0) == 4.0

    def test_array(self):
        out = project_common(np.array([10.0, 3.0, -2.0]), 5.0)
        assert out.tolist() == [0.0, 3.0, 3.0]

    def test_boundary_clamp(self):
        # rounding artifacts that land exactly on gamma wrap to 0
        assert project_common(5.0, 5.0) == 0.0
        assert project_common(-1e-18, 5.0) in (0.0, 5.0 - 1e-18)
        assert 0.0 <= project_common(-1e-18, 5.0) < 5.0

    @given(
        st.floats(-1e6, 1e6, allow_nan=False),
        st.floats(0.1, 1e3, allow_nan=False),
    )
    def test_in_range_and_congruent(self, v, gamma):
        r = project_common(v, gamma)
        assert 0.0 <= r < gamma
        k = round((v - r) / gamma)
        assert v - r == pytest.approx(k * gamma, abs=1e-6 * max(1.0, abs(v)))


class TestWrappedDistance:
    def test_known_values(self):
        assert wrapped_distance(0.5, 4.5, 5.0) == pytest.approx(1.0)
        assert wrapped_distance(1.0, 1.0, 5.0) == 0.0
        assert wrapped_distance(0.0, 2.5, 5.0) == pytest.approx(2.5)

    @given(
        st.floats(0, 10, allow_nan=False),
        st.floats(0, 10, allow_nan=False),
        st.floats(0, 10, allow_nan=False),
    )
    def test_metric_properties(self, a, b, c):
        gamma = 10.0
        dab = wrapped_distance(a, b, gamma)
        assert 0.0 <= dab <= gamma / 2 + 1e-12
        assert dab == pytest.approx(wrapped_distance(b, a, gamma), abs=1e-9)
        dac = wrapped_distance(a, c, gamma)
        dcb = wrapped_distance(c, b, gamma)
        assert dab <= dac + dcb + 1e-9


class TestClustering:
    def test_rejects_non_permutation(self):
        with pytest.raises(ValidationError):
            Clustering(((0, 0),))

    def test_groups_is_label_free(self):
        a = Clustering(((0, 1), (1, 0)))
        b = Clustering(((1, 0), (0, 1)))  # same partition, labels swapped
        assert a.groups() == b.groups()
        c = Clustering(((0, 1), (0, 1)))
        assert a.groups() != c.groups()

    def test_dimensions(self):
        k = Clustering(((0, 1, 2), (2, 0, 1)))
        assert k.n == 3
        assert k.L == 2


class TestObservationMatrix:
    def test_rejects_wrong_rank(self):
        with pytest.raises(ValidationError):
            ObservationMatrix(np.zeros(4))

    def test_column_access(self):
        obs = ObservationMatrix(np.array([[1.0, 2.0], [3.0, 4.0]]))
        assert obs.n == 2 and obs.L == 2
        assert obs.column(1).tolist() == [2.0, 4.0]
