"""Noise model, reproducible instance generation, and the separation
probability of the order-preservation condition.

All randomness flows through counter-based Philox generators keyed by
(master seed, stream index), so parallel sweeps are bit-reproducible
regardless of scheduling. Gaussian draws use numpy's standard normal
transform of the Philox stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate
from scipy.stats import norm

from .modular import (
    Clustering,
    ModulusSet,
    ObservationMatrix,
    ValidationError,
    project_common,
)


def snr_to_sigma(snr_db: float) -> float:
    """sigma^2 = 10^(-SNR/10); +inf is the noiseless sentinel."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return 10.0 ** (-snr_db / 20.0)


def substream(seed: int, *stream: int) -> np.random.Generator:
    """Deterministic Philox substream for (master seed, stream indices)."""
    ss = np.random.SeedSequence([int(seed), *(int(s) for s in stream)])
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    ms: ModulusSet
    snr_db: float
    seed: int
    y_range: float | None = None  # default: the full dynamic range

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("need at least one number")
        if self.y_range is not None and not (0 < self.y_range <= self.ms.dynamic_range):
            raise ValidationError("y_range must lie in (0, dynamic range]")

    @property
    def sigma(self) -> float:
        return snr_to_sigma(self.snr_db)

    @property
    def range(self) -> float:
        return self.ms.dynamic_range if self.y_range is None else self.y_range


@dataclass(frozen=True)
class GroundTruth:
    ys: np.ndarray          # N true values in [0, y_range)
    noises: np.ndarray      # N x L Gaussian perturbations
    true_perms: Clustering  # planted correspondences (estimand -> obs index)


def sample_instance(
    spec: InstanceSpec, *stream: int
) -> tuple[GroundTruth, ObservationMatrix]:
    """Draw one instance: uniform Y, Gaussian residue noise, and an
    independent uniform shuffle per modulus column.

    Draw order (fixed): ys, then the noise matrix, then one permutation per
    modulus. Extra stream indices select independent substreams of the same
    master seed.
    """
    rng = substream(spec.seed, *stream)
    n, L = spec.n, spec.ms.L
    ys = rng.uniform(0.0, spec.range, n)
    noises = rng.standard_normal((n, L)) * spec.sigma
    obs = np.empty((n, L))
    perms = []
    moduli = spec.ms.moduli
    for l in range(L):
        base = project_common(ys + noises[:, l], moduli[l])
        p = rng.permutation(n)
        obs[p, l] = base
        perms.append(tuple(int(v) for v in p))
    return (
        GroundTruth(ys=ys, noises=noises, true_perms=Clustering(tuple(perms))),
        ObservationMatrix(obs),
    )


def _arcs(truth: GroundTruth, gamma: float) -> list[tuple[float, float]]:
    """Noise distributing intervals as (start, length) arcs on the circle."""
    mus = project_common(truth.ys, gamma)
    lo = truth.noises.min(axis=1)
    hi = truth.noises.max(axis=1)
    starts = project_common(mus + lo, gamma)
    return list(zip(np.atleast_1d(starts), np.atleast_1d(hi - lo)))


def assumption1_holds(truth: GroundTruth, gamma: float) -> bool:
    """True iff every noise interval is shorter than gamma/2 and their union
    leaves at least one cutting point free on the circle."""
    arcs = _arcs(truth, gamma)
    if any(length >= gamma / 2 for _, length in arcs):
        return False
    # Split wrapping arcs and check whether the union covers [0, gamma).
    segments = []
    for start, length in arcs:
        end = start + length
        if end <= gamma:
            segments.append((start, end))
        else:
            segments.append((start, gamma))
            segments.append((0.0, end - gamma))
    segments.sort()
    covered = 0.0
    for start, end in segments:
        if start > covered:
            return True  # gap found
        covered = max(covered, end)
    return covered < gamma


def separation_probability(
    sigma: float, gamma: float, n: int, l: int
) -> float:
    """Probability that for all n numbers the L noise draws have range
    below gamma / (2n).

    Exact order-statistics formula: per number,
    P(range < delta) = L * int f(x) (Phi(x + delta) - Phi(x))^(L-1) dx,
    integrated by adaptive quadrature over [-8 sigma, 8 sigma].
    """
    if sigma <= 0 or gamma <= 0 or n < 1 or l < 1:
        raise ValidationError("parameters must be positive")
    if l == 1:
        return 1.0
    delta = gamma / (2 * n)

    def integrand(x):
        window = norm.cdf(x + delta, scale=sigma) - norm.cdf(x, scale=sigma)
        return norm.pdf(x, scale=sigma) * window ** (l - 1)

    value, _ = integrate.quad(
        integrand, -8 * sigma, 8 * sigma, epsabs=1e-8, limit=200
    )
    p_single = min(1.0, max(0.0, l * value))
    return p_single ** n


def separation_bound(sigma: float, gamma: float, n: int, l: int) -> float:
    """Closed-form upper bound (Phi(delta) - Phi(-delta))^(n(l-1))."""
    if sigma <= 0 or gamma <= 0 or n < 1 or l < 1:
        raise ValidationError("parameters must be positive")
    delta = gamma / (2 * n)
    p = norm.cdf(delta, scale=sigma) - norm.cdf(-delta, scale=sigma)
    return float(p ** (n * (l - 1)))


def primes_from(start: int, count: int) -> list[int]:
    """The first `count` primes >= start (trial division; desk scale)."""

    def is_prime(x: int) -> bool:
        if x < 2:
            return False
        for d in range(2, int(math.isqrt(x)) + 1):
            if x % d == 0:
                return False
        return True

    out: list[int] = []
    x = max(2, start)
    while len(out) < count:
        if is_prime(x):
            out.append(x)
        x += 1
    return out


def default_modulus_set(
    gamma: float, n_moduli: int, snr_db: float, prime_start: int = 23
) -> ModulusSet:
    """The simulation protocol's moduli: gamma times consecutive primes,
    equal noise level per modulus."""
    primes = primes_from(prime_start, n_moduli)
    sigma = snr_to_sigma(snr_db)
    if sigma > 0:
        return ModulusSet.from_sigmas(gamma, primes, [sigma] * n_moduli)
    return ModulusSet.from_weights(gamma, primes, [1.0] * n_moduli)
