"""Exact modular arithmetic and circular geometry on the circle modulo gamma.

Moduli come in the form m_l = gamma * M_l with the M_l pairwise co-prime.
Quotient arithmetic is exact (Python integers); everything on the circle
is double precision, normalized into [0, gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


class ValidationError(ValueError):
    """Raised when inputs violate a documented precondition."""


def _check_pairwise_coprime(moduli: Sequence[int]) -> None:
    for a in range(len(moduli)):
        for b in range(a + 1, len(moduli)):
            if math.gcd(moduli[a], moduli[b]) != 1:
                raise ValidationError(
                    f"moduli {moduli[a]} and {moduli[b]} are not co-prime"
                )


@dataclass(frozen=True)
class ModulusSet:
    """The modulus system gamma * M_l with per-modulus noise levels.

    weights[l] == 1 / (2 * sigmas[l]**2) when built via :meth:`from_sigmas`.
    Co-primality is validated eagerly, never re-checked in hot loops.
    """

    gamma: float
    coprimes: tuple[int, ...]
    sigmas: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValidationError("gamma must be positive")
        if not self.coprimes:
            raise ValidationError("at least one modulus is required")
        if any(m <= 0 for m in self.coprimes):
            raise ValidationError("co-prime factors must be positive")
        if len(self.sigmas) != len(self.coprimes) or len(self.weights) != len(self.coprimes):
            raise ValidationError("sigmas/weights length must match coprimes")
        if any(w <= 0 for w in self.weights):
            raise ValidationError("weights must be positive")
        _check_pairwise_coprime(self.coprimes)

    @classmethod
    def from_sigmas(cls, gamma: float, coprimes: Sequence[int],
                    sigmas: Sequence[float]) -> "ModulusSet":
        sigmas = tuple(float(s) for s in sigmas)
        if any(s <= 0 for s in sigmas):
            raise ValidationError("sigmas must be positive")
        weights = tuple(1.0 / (2.0 * s * s) for s in sigmas)
        return cls(float(gamma), tuple(int(m) for m in coprimes), sigmas, weights)

    @classmethod
    def from_weights(cls, gamma: float, coprimes: Sequence[int],
                     weights: Sequence[float]) -> "ModulusSet":
        weights = tuple(float(w) for w in weights)
        sigmas = tuple(math.sqrt(1.0 / (2.0 * w)) for w in weights)
        return cls(float(gamma), tuple(int(m) for m in coprimes), sigmas, weights)

    @property
    def L(self) -> int:
        return len(self.coprimes)

    @property
    def moduli(self) -> tuple[float, ...]:
        """The real moduli m_l = gamma * M_l."""
        return tuple(self.gamma * m for m in self.coprimes)

    @property
    def quotient_range(self) -> int:
        """Product of the co-prime factors (exact integer)."""
        return math.prod(self.coprimes)

    @property
    def dynamic_range(self) -> float:
        """D = gamma * prod(M_l)."""
        return self.gamma * self.quotient_range

    def subset(self, indices: Sequence[int]) -> "ModulusSet":
        """Restriction to a subset of the moduli (order preserved)."""
        idx = tuple(indices)
        return ModulusSet(
            self.gamma,
            tuple(self.coprimes[l] for l in idx),
            tuple(self.sigmas[l] for l in idx),
            tuple(self.weights[l] for l in idx),
        )


@dataclass(frozen=True)
class ObservationMatrix:
    """N x L raw residues, unordered within each modulus column."""

    values: np.ndarray  # shape (N, L), values[i, l] in [0, m_l)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValidationError("observations must be a 2-D array (N x L)")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def L(self) -> int:
        return self.values.shape[1]

    def column(self, l: int) -> np.ndarray:
        return self.values[:, l]


@dataclass(frozen=True)
class Clustering:
    """One permutation per modulus: perms[l][i] is the observation index
    (within modulus l's column) assigned to estimand i."""

    perms: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for p in self.perms:
            if sorted(p) != list(range(len(p))):
                raise ValidationError(f"{p} is not a permutation")

    @property
    def n(self) -> int:
        return len(self.perms[0])

    @property
    def L(self) -> int:
        return len(self.perms)

    def groups(self) -> frozenset:
        """Label-free view: the partition of (modulus, observation) pairs."""
        return frozenset(
            tuple(p[i] for p in self.perms) for i in range(self.n)
        )


def crt_reconstruct(residues: Sequence[int], moduli: Sequence[int]) -> int:
    """Unique x in [0, prod(moduli)) with x = residues[l] (mod moduli[l]).

    Exact integer arithmetic throughout; residue systems are catastrophically
    sensitive to rounding, so no floats are allowed here.
    """
    if len(residues) == 0 or len(moduli) == 0:
        raise ValidationError("crt_reconstruct requires at least one residue")
    if len(residues) != len(moduli):
        raise ValidationError("residues and moduli must have equal length")
    _check_pairwise_coprime(list(moduli))
    for r, m in zip(residues, moduli):
        if not (0 <= r < m):
            raise ValidationError(f"residue {r} outside [0, {m})")
    total = math.prod(moduli)
    x = 0
    for r, m in zip(residues, moduli):
        mi = total // m
        x += r * mi * pow(mi, -1, m)
    return x % total


def project_common(value, gamma: float):
    """Reduce a real (or array of reals) into [0, gamma).

    Correct for negative inputs; the boundary clamp maps rounding artifacts
    at exactly gamma back to 0.
    """
    v = np.asarray(value, dtype=float)
    r = v - np.floor(v / gamma) * gamma
    r = np.where(r >= gamma, 0.0, np.maximum(r, 0.0))
    if np.ndim(value) == 0:
        return float(r)
    return r


def wrapped_distance(a: float, b: float, gamma: float) -> float:
    """d_gamma(a, b) = min_j |a - b + j*gamma|, the metric on the circle."""
    d = project_common(a - b, gamma)
    return min(d, gamma - d)
