"""Brute-force reference implementations for small instances.

These exist to verify the closed forms and optimality claims of the fast
paths: wrapped-likelihood integration vs. the cutting-point score,
exhaustive permutation search vs. the rotation matching, and quotient
enumeration vs. the CRT reconstruction. They are shipped with the library
so the verification suite runs from a clean checkout; none of them share
code with the paths they check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .modular import Clustering, ModulusSet, ValidationError, wrapped_distance
from .single import ClusterResidues

GRID_STEPS = 2000  # composite quadrature resolution over one circle


class BudgetExceededError(ValidationError):
    """The requested enumeration is larger than the oracle budget allows."""


@dataclass(frozen=True)
class OracleBudget:
    max_n: int = 3           # clustering enumeration: (N!)^(L-1) candidates
    max_matching_n: int = 6  # matching enumeration: N! candidates
    max_l: int = 3
    wrap_terms: int = 5      # truncation J of the wrap sums

    def check_clustering(self, n: int, L: int) -> None:
        if n > self.max_n or L > self.max_l:
            raise BudgetExceededError(
                f"clustering enumeration refused for N={n}, L={L}"
            )


def evaluate_likelihood(
    clustering: Clustering,
    commons: np.ndarray,
    ms: ModulusSet,
    budget: OracleBudget = OracleBudget(),
) -> float:
    """Log of the clustering likelihood, up to a clustering-independent
    constant.

    Per estimand, numerically integrates over mu in [0, gamma) the product
    across moduli of the wrapped Gaussian density, with the wrap sum
    truncated to |j| <= budget.wrap_terms.
    """
    commons = np.asarray(commons, dtype=float)
    n, L = commons.shape
    budget.check_clustering(n, L)
    gamma = ms.gamma
    mu = (np.arange(GRID_STEPS) + 0.5) * (gamma / GRID_STEPS)
    js = np.arange(-budget.wrap_terms, budget.wrap_terms + 1)
    total = 0.0
    for i in range(n):
        log_prod = np.zeros_like(mu)
        for l in range(L):
            r = commons[clustering.perms[l][i], l]
            # exponents over (grid, wrap term)
            e = -ms.weights[l] * (r - mu[:, None] + js[None, :] * gamma) ** 2
            log_prod += logsumexp(e, axis=1)
        total += logsumexp(log_prod) + math.log(gamma / GRID_STEPS)
    return float(total)


def brute_force_map_clustering(
    commons: np.ndarray,
    ms: ModulusSet,
    budget: OracleBudget = OracleBudget(),
) -> Clustering:
    """Exact argmax of the integrated likelihood over all clusterings.

    The first column's permutation is fixed to the identity (clusterings
    are label-free); the remaining (N!)^(L-1) are enumerated in
    lexicographic order, which is also the tie-break.
    """
    commons = np.asarray(commons, dtype=float)
    n, L = commons.shape
    budget.check_clustering(n, L)
    identity = tuple(range(n))
    best: Clustering | None = None
    best_score = -math.inf
    for rest in product(permutations(range(n)), repeat=L - 1):
        clustering = Clustering((identity, *rest))
        score = evaluate_likelihood(clustering, commons, ms, budget)
        if score > best_score + 1e-12:
            best_score = score
            best = clustering
    assert best is not None
    return best


def brute_force_matching(
    column: Sequence[float], mu: Sequence[float], gamma: float
) -> tuple[int, ...]:
    """Exact minimizer of sum_i d_gamma^2(column[perm[i]], mu[i]) over all
    N! assignments; ties break to the lexicographically smallest perm."""
    n = len(column)
    if n > 8:
        raise BudgetExceededError(f"matching enumeration refused for N={n}")
    # precompute the n x n pairwise costs so each permutation is n lookups
    col = np.asarray(column, dtype=float)
    target = np.asarray(mu, dtype=float)
    diff = np.abs(col[:, None] - target[None, :]) % gamma
    pair_cost = (np.minimum(diff, gamma - diff) ** 2).tolist()
    best_perm = None
    best_cost = math.inf
    for perm in permutations(range(n)):
        cost = sum(pair_cost[perm[i]][i] for i in range(n))
        if cost < best_cost - 1e-12:
            best_cost = cost
            best_perm = perm
    assert best_perm is not None
    return best_perm


def matching_cost(
    column: Sequence[float], mu: Sequence[float], perm: Sequence[int], gamma: float
) -> float:
    return sum(
        wrapped_distance(column[perm[i]], mu[i], gamma) ** 2
        for i in range(len(mu))
    )


def exhaustive_reconstruct(cluster: ClusterResidues, ms: ModulusSet) -> float:
    """Independent oracle for the single-number reconstruction.

    Enumerates every quotient k, grid-searches the best common residue for
    it on [0, gamma), then refines exactly using the wrap offsets implied by
    the grid optimum. Returns the globally best Y-hat.
    """
    K = ms.quotient_range
    if K > 10**6:
        raise BudgetExceededError(f"quotient enumeration refused for {K} values")
    gamma = ms.gamma
    raws = np.asarray(cluster.raws)
    moduli = np.asarray(ms.moduli)
    weights = np.asarray(ms.weights)
    grid = (np.arange(GRID_STEPS) + 0.5) * (gamma / GRID_STEPS)

    best_y = 0.0
    best_obj = math.inf
    for k in range(K):
        c = np.mod(raws - k * gamma, moduli)  # target residues given quotient k
        diff = np.mod(c[None, :] - grid[:, None], moduli[None, :])
        d = np.minimum(diff, moduli[None, :] - diff)
        obj = (d * d) @ weights
        g = int(np.argmin(obj))
        # exact refinement: pick the wrap offset of each residue at the grid
        # optimum, then the weighted mean is the exact minimizer
        shifts = np.round((grid[g] - c) / moduli) * moduli
        lifted = c + shifts
        mu = float((weights @ lifted) / weights.sum())
        residual = float(weights @ (lifted - mu) ** 2)
        if residual < best_obj:
            best_obj = residual
            best_y = k * gamma + mu
    # the refinement step can lift mu outside [0, gamma), which shifts y by
    # a full period; reduce to the canonical range
    return float(best_y % ms.dynamic_range)
