"""Conditional MAP estimation of the residue clustering (cutting-point search).

The circle modulo gamma is cut at a candidate point tau and straightened;
grouping the i-th order statistics of the shifted residues across moduli is
then optimal for that tau. Enumerating the N*L observed residues as cutting
points yields the global conditional MAP, after which each group is handed
to the single-number reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modular import Clustering, ModulusSet, ObservationMatrix, project_common
from .single import ClusterResidues, Reconstruction, reconstruct_single

SCORE_TOL = 1e-9  # scores analytically equal may differ by fp noise


@dataclass(frozen=True)
class ShiftedResidues:
    """Residues moved into (-gamma, gamma) by cutting the circle at tau."""

    values: np.ndarray  # N x L, each entry in {r, r - gamma}
    tau: float


def shift_residues(commons: np.ndarray, tau: float, gamma: float) -> ShiftedResidues:
    """Cut the circle at tau: residues above tau drop by gamma.

    A tau at or outside the data range leaves everything unchanged (the cut
    falls in the empty arc through 0).
    """
    commons = np.asarray(commons, dtype=float)
    if tau <= commons.min() or tau >= commons.max():
        values = commons.copy()
    else:
        values = np.where(commons <= tau, commons, commons - gamma)
    return ShiftedResidues(values, float(tau))


def cluster_score(groups, weights: Sequence[float]) -> float:
    """Score of a grouping of shifted residues; always <= 0.

    Per group: (sum_l w_l r)^2 / sum_l w_l - sum_l w_l r^2, summed over
    groups. Zero exactly when every group is constant (Cauchy-Schwarz).
    """
    g = np.asarray(groups, dtype=float)
    w = np.asarray(weights, dtype=float)
    num = (g @ w) ** 2 / w.sum()
    sq = (g * g) @ w
    return float(np.sum(num - sq))


def _order_stat_perms(shifted: np.ndarray) -> tuple[tuple[int, ...], ...]:
    """Per column, the observation indices sorted ascending by (value, index)."""
    n, L = shifted.shape
    return tuple(
        tuple(sorted(range(n), key=lambda i: (shifted[i, l], i)))
        for l in range(L)
    )


def _grouped(shifted: np.ndarray, perms) -> np.ndarray:
    n, L = shifted.shape
    return np.array(
        [[shifted[perms[l][i], l] for l in range(L)] for i in range(n)]
    )


def map_clustering(
    commons: np.ndarray, ms: ModulusSet
) -> tuple[Clustering, float, float]:
    """Best cutting point among the N*L observed residues, with its clustering.

    Ties in score (within SCORE_TOL) are broken toward the smallest tau; sort
    ties within a column are broken by observation index.
    """
    commons = np.asarray(commons, dtype=float)
    candidates = sorted({float(v) for v in commons.flat})
    best: tuple[Clustering, float, float] | None = None
    for tau in candidates:
        shifted = shift_residues(commons, tau, ms.gamma).values
        perms = _order_stat_perms(shifted)
        score = cluster_score(_grouped(shifted, perms), ms.weights)
        if best is None or score > best[2] + SCORE_TOL:
            best = (Clustering(perms), tau, score)
    assert best is not None
    return best


def reconstruct_algo1(
    observations: ObservationMatrix, ms: ModulusSet
) -> list[Reconstruction]:
    """Algorithm 1: MAP clustering, then N independent single-number RCRTs."""
    commons = project_common(observations.values, ms.gamma)
    clustering, _, _ = map_clustering(commons, ms)
    out = []
    for i in range(observations.n):
        raws = [
            observations.values[clustering.perms[l][i], l]
            for l in range(ms.L)
        ]
        out.append(reconstruct_single(ClusterResidues.from_raws(raws, ms), ms))
    return out
