"""Noise model, reproducible sampling, and the separation probability."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from statrcrt import (
    GroundTruth,
    InstanceSpec,
    ValidationError,
    assumption1_holds,
    default_modulus_set,
    project_common,
    sample_instance,
    separation_bound,
    separation_probability,
)
from statrcrt.modular import Clustering
from statrcrt.noise import primes_from, snr_to_sigma, substream


class TestSnrToSigma:
    def test_reference_points(self):
        assert snr_to_sigma(0.0) == pytest.approx(1.0)
        assert snr_to_sigma(-20.0) == pytest.approx(10.0)
        assert snr_to_sigma(20.0) == pytest.approx(0.1)

    def test_noiseless_sentinel(self):
        assert snr_to_sigma(float("inf")) == 0.0


class TestSubstream:
    def test_same_key_same_draws(self):
        a = substream(42, 1, 2).uniform(size=5)
        b = substream(42, 1, 2).uniform(size=5)
        assert np.array_equal(a, b)

    def test_different_keys_differ(self):
        a = substream(42, 1, 2).uniform(size=5)
        b = substream(42, 1, 3).uniform(size=5)
        c = substream(43, 1, 2).uniform(size=5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)


class TestSampleInstance:
    def test_deterministic(self):
        ms = default_modulus_set(100.0, 4, 0.0)
        spec = InstanceSpec(n=2, ms=ms, snr_db=0.0, seed=7)
        t1, o1 = sample_instance(spec, 5)
        t2, o2 = sample_instance(spec, 5)
        assert np.array_equal(t1.ys, t2.ys)
        assert np.array_equal(o1.values, o2.values)

    def test_planted_permutations_are_consistent(self):
        ms = default_modulus_set(100.0, 4, -10.0)
        spec = InstanceSpec(n=3, ms=ms, snr_db=-10.0, seed=8)
        truth, obs = sample_instance(spec, 1)
        for l in range(ms.L):
            for i in range(3):
                expected = project_common(
                    truth.ys[i] + truth.noises[i, l], ms.moduli[l]
                )
                assert obs.values[truth.true_perms.perms[l][i], l] == pytest.approx(
                    expected
                )

    def test_y_range_respected(self):
        ms = default_modulus_set(100.0, 4, 0.0)
        spec = InstanceSpec(n=50, ms=ms, snr_db=0.0, seed=9, y_range=5000.0)
        truth, _ = sample_instance(spec, 2)
        assert np.all(truth.ys >= 0) and np.all(truth.ys < 5000.0)

    def test_invalid_spec(self):
        ms = default_modulus_set(100.0, 2, 0.0)
        with pytest.raises(ValidationError):
            InstanceSpec(n=0, ms=ms, snr_db=0.0, seed=0)
        with pytest.raises(ValidationError):
            InstanceSpec(n=1, ms=ms, snr_db=0.0, seed=0,
                         y_range=ms.dynamic_range * 2)


class TestAssumption1:
    def _truth(self, ys, noises):
        n, L = np.asarray(noises).shape
        perms = Clustering(tuple(tuple(range(n)) for _ in range(L)))
        return GroundTruth(
            ys=np.asarray(ys, dtype=float),
            noises=np.asarray(noises, dtype=float),
            true_perms=perms,
        )

    def test_small_spread_separated(self):
        truth = self._truth([10.0, 160.0], [[0.1, -0.1], [0.2, 0.0]])
        assert assumption1_holds(truth, 100.0)

    def test_wide_spread_fails(self):
        truth = self._truth([10.0], [[-30.0, 30.0]])
        assert not assumption1_holds(truth, 100.0)

    def test_union_covering_the_circle_fails(self):
        # three arcs of length 40 starting at 0, 33, 66 cover [0, 100)
        truth = self._truth(
            [0.0, 33.0, 66.0],
            [[0.0, 40.0], [0.0, 40.0], [0.0, 40.0]],
        )
        assert not assumption1_holds(truth, 100.0)

    def test_wrapping_arc_handled(self):
        # one interval straddles the wrap point yet leaves a free arc
        truth = self._truth([95.0, 50.0], [[0.0, 10.0], [0.0, 1.0]])
        assert assumption1_holds(truth, 100.0)


class TestSeparationProbability:
    def test_single_modulus_is_certain(self):
        assert separation_probability(5.0, 100.0, 2, 1) == 1.0

    def test_bound_of_trivial_exponent(self):
        # n*(l-1) = 0 -> the bound degenerates to 1
        assert separation_bound(5.0, 100.0, 3, 1) == 1.0

    def test_never_exceeds_bound(self):
        for sigma in (1.0, 5.0, 10.0, 25.0):
            for n in (1, 2, 4):
                l = 2 * n
                p = separation_probability(sigma, 100.0, n, l)
                assert 0.0 <= p <= separation_bound(sigma, 100.0, n, l) + 1e-12

    def test_monotone_in_sigma_and_n(self):
        ps = [separation_probability(s, 100.0, 2, 4) for s in (2.0, 5.0, 10.0, 20.0)]
        assert ps == sorted(ps, reverse=True)
        pn = [separation_probability(8.0, 100.0, n, 4) for n in (1, 2, 3)]
        assert pn == sorted(pn, reverse=True)

    def test_matches_monte_carlo_spot_check(self):
        sigma, n, l = 10.0, 2, 4
        p = separation_probability(sigma, 100.0, n, l)
        delta = 100.0 / (2 * n)
        draws = substream(17, 0).normal(0, sigma, (20000, n, l))
        mc = float(
            np.mean(np.all(draws.max(axis=2) - draws.min(axis=2) < delta, axis=1))
        )
        assert p == pytest.approx(mc, abs=0.02)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValidationError):
            separation_probability(0.0, 100.0, 2, 4)
        with pytest.raises(ValidationError):
            separation_bound(1.0, -1.0, 2, 4)


class TestPrimes:
    def test_simulation_protocol_primes(self):
        assert primes_from(23, 4) == [23, 29, 31, 37]

    def test_from_two(self):
        assert primes_from(2, 5) == [2, 3, 5, 7, 11]

    @given(st.integers(2, 500), st.integers(1, 10))
    @settings(max_examples=50)
    def test_outputs_are_prime_and_ascending(self, start, count):
        ps = primes_from(start, count)
        assert len(ps) == count
        assert ps == sorted(ps)
        for p in ps:
            assert p >= start
            assert all(p % d for d in range(2, int(math.isqrt(p)) + 1))


class TestPaperModulusSet:
    def test_noisy(self):
        ms = default_modulus_set(100.0, 4, 0.0)
        assert ms.coprimes == (23, 29, 31, 37)
        assert ms.weights == tuple([0.5] * 4)

    def test_noiseless_sentinel_uses_unit_weights(self):
        ms = default_modulus_set(100.0, 2, float("inf"))
        assert ms.weights == (1.0, 1.0)
