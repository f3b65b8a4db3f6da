"""Robust CRT reconstruction of a single number from its L noisy residues.

Both clustering algorithms reduce to this once the assignment of
observations to estimands is fixed: estimate the common residue on the
circle modulo gamma, then recover the quotient exactly via CRT on the
co-prime factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .modular import (
    ModulusSet,
    ValidationError,
    crt_reconstruct,
    project_common,
    wrapped_distance,
)


@dataclass(frozen=True)
class ClusterResidues:
    """One observation per modulus, already assigned to one estimand."""

    raws: tuple[float, ...]
    commons: tuple[float, ...]

    @classmethod
    def from_raws(cls, raws: Sequence[float], ms: ModulusSet) -> "ClusterResidues":
        raws = tuple(float(r) for r in raws)
        if len(raws) != ms.L:
            raise ValidationError(f"expected {ms.L} residues, got {len(raws)}")
        commons = tuple(project_common(r, ms.gamma) for r in raws)
        return cls(raws, commons)


@dataclass(frozen=True)
class Reconstruction:
    y_hat: float
    quotient: int
    mu_hat: float


def estimate_common_residue(
    commons: Sequence[float], weights: Sequence[float], gamma: float
) -> tuple[float, float]:
    """Minimize sum_l w_l * d_gamma(x, r_l)^2 over x in [0, gamma).

    The minimizer is one of exactly L candidate wrapped means: sort the
    residues ascending and lift the first j of them by gamma, j = 0..L-1.
    Ties in loss go to the smallest j. Returns (mu_hat, loss).
    """
    L = len(commons)
    if L == 0:
        raise ValidationError("cannot estimate a common residue from no residues")
    if len(weights) != L:
        raise ValidationError("weights length must match residues")

    order = sorted(range(L), key=lambda l: (commons[l], l))
    g = [commons[l] for l in order]
    w = [weights[l] for l in order]
    w_total = sum(w)
    s = sum(wi * gi for wi, gi in zip(w, g))

    best_mu = 0.0
    best_loss = float("inf")
    lifted = 0.0  # sum of the first j sorted weights
    for j in range(L):
        cand = project_common((s + gamma * lifted) / w_total, gamma)
        loss = sum(
            wl * wrapped_distance(cand, rl, gamma) ** 2
            for wl, rl in zip(weights, commons)
        )
        if loss < best_loss:
            best_loss = loss
            best_mu = cand
        lifted += w[j]
    return best_mu, best_loss


def quotient_from_mu(
    raws: Sequence[float], mu_hat: float, ms: ModulusSet
) -> tuple[int, tuple[int, ...]]:
    """Recover the quotient of Y divided by gamma from raw residues.

    j_l = round((R_l - mu_hat) / gamma) may be negative when R_l sits just
    below the wrap point; reducing modulo M_l subsumes that bookkeeping.
    round() at exact half-integers is round-half-even.
    """
    q = tuple(
        round((r - mu_hat) / ms.gamma) % m for r, m in zip(raws, ms.coprimes)
    )
    quotient = crt_reconstruct(list(q), list(ms.coprimes))
    return quotient, q


def reconstruct_single(cluster: ClusterResidues, ms: ModulusSet) -> Reconstruction:
    """Conventional robust CRT for one number from its assigned residues."""
    mu_hat, _ = estimate_common_residue(cluster.commons, ms.weights, ms.gamma)
    quotient, _ = quotient_from_mu(cluster.raws, mu_hat, ms)
    return Reconstruction(quotient * ms.gamma + mu_hat, quotient, mu_hat)
