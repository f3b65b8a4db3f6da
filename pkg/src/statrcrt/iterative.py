"""Two-step alternating MAP over clusterings and common residues.

A wrapped-Gaussian-mixture flavored coordinate ascent: given current common
residue estimates, each modulus column is matched to them by the best of N
cyclic rotations (sorted order against sorted order); given the matching,
each estimand's common residue is re-estimated on the circle. The clustering
space is finite, so with fixed tie-breaking the loop reaches a fixed point.

The per-modulus matching objective sum_i d_gamma^2(r, mu) drops the noise
variance: it cancels from the per-column argmin, so weights play no role in
the matching step (they do in the update step).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .modular import Clustering, ModulusSet, ObservationMatrix, project_common, wrapped_distance
from .single import (
    ClusterResidues,
    Reconstruction,
    estimate_common_residue,
    quotient_from_mu,
)

DEFAULT_MAX_ITERS = 50


@dataclass(frozen=True)
class IterationState:
    mu: tuple[float, ...]
    clustering: Clustering
    objective: float
    iteration: int
    converged: bool
    history: tuple[float, ...] = ()  # objective after each full iteration


def match_step(
    column: Sequence[float], mu: Sequence[float], gamma: float
) -> tuple[int, ...]:
    """Best assignment of one modulus column to the current mu estimates.

    Only the N cyclic rotations of sorted-column against sorted-mu can be
    optimal (non-crossing chords on two concentric circles). Ties go to the
    smallest rotation. Returns perm with perm[i] = observation index for
    estimand i.
    """
    n = len(column)
    order_r = sorted(range(n), key=lambda i: (column[i], i))
    order_m = sorted(range(n), key=lambda i: (mu[i], i))

    best_zeta = 0
    best_cost = float("inf")
    for zeta in range(n):
        cost = sum(
            wrapped_distance(column[order_r[(i + zeta) % n]], mu[order_m[i]], gamma) ** 2
            for i in range(n)
        )
        if cost < best_cost - 1e-12:
            best_cost = cost
            best_zeta = zeta

    perm = [0] * n
    for i in range(n):
        perm[order_m[i]] = order_r[(i + best_zeta) % n]
    return tuple(perm)


def update_step(
    clusters: Sequence[Sequence[float]], weights: Sequence[float], gamma: float
) -> list[float]:
    """Re-estimate each estimand's common residue from its assigned residues."""
    return [
        estimate_common_residue(cluster, weights, gamma)[0] for cluster in clusters
    ]


def _objective(commons: np.ndarray, perms, mu, ms: ModulusSet) -> float:
    return sum(
        ms.weights[l]
        * wrapped_distance(commons[perms[l][i], l], mu[i], ms.gamma) ** 2
        for l in range(ms.L)
        for i in range(len(mu))
    )


def iterate(
    observations: ObservationMatrix,
    ms: ModulusSet,
    init: Sequence[float],
    max_iters: int = DEFAULT_MAX_ITERS,
) -> IterationState:
    """Alternate matching and re-estimation until the clustering repeats.

    Non-convergence within max_iters is flagged, not an error; the last
    state is still usable. The objective is non-increasing across full
    iterations (each step minimizes its own coordinate).
    """
    commons = project_common(observations.values, ms.gamma)
    n = observations.n
    mu = [project_common(m, ms.gamma) for m in init]
    prev_perms = None
    perms = None
    iteration = 0
    converged = False
    history = []
    for t in range(1, max_iters + 1):
        iteration = t
        perms = tuple(
            match_step(commons[:, l], mu, ms.gamma) for l in range(ms.L)
        )
        if perms == prev_perms:
            converged = True
            history.append(_objective(commons, perms, mu, ms))
            break
        clusters = [
            [commons[perms[l][i], l] for l in range(ms.L)] for i in range(n)
        ]
        mu = update_step(clusters, ms.weights, ms.gamma)
        history.append(_objective(commons, perms, mu, ms))
        prev_perms = perms
    assert perms is not None
    return IterationState(
        mu=tuple(mu),
        clustering=Clustering(perms),
        objective=_objective(commons, perms, mu, ms),
        iteration=iteration,
        converged=converged,
        history=tuple(history),
    )


def reconstruct_algo2(
    observations: ObservationMatrix,
    ms: ModulusSet,
    init: Sequence[float] | None = None,
    max_iters: int = DEFAULT_MAX_ITERS,
    restarts: int = 0,
    seed: int = 0,
) -> tuple[list[Reconstruction], IterationState]:
    """Algorithm 2: iterate to a clustering fixed point, then quotient CRT.

    Default initialization takes the common residues of the first modulus
    column as the starting estimates. The descent only reaches a stationary
    state, not necessarily the global optimum; restarts > 0 adds that many
    seeded uniform-random initializations and keeps the lowest-objective
    fixed point (ties go to the earliest start).
    """
    if init is None:
        init = list(project_common(observations.values[:, 0], ms.gamma))
    state = iterate(observations, ms, init, max_iters=max_iters)
    for r in range(restarts):
        rng = np.random.Generator(
            np.random.Philox(np.random.SeedSequence([int(seed), r]))
        )
        alt = iterate(
            observations,
            ms,
            rng.uniform(0.0, ms.gamma, observations.n),
            max_iters=max_iters,
        )
        if alt.objective < state.objective - 1e-12:
            state = alt
    out = []
    for i in range(observations.n):
        raws = [
            observations.values[state.clustering.perms[l][i], l]
            for l in range(ms.L)
        ]
        quotient, _ = quotient_from_mu(raws, state.mu[i], ms)
        out.append(
            Reconstruction(quotient * ms.gamma + state.mu[i], quotient, state.mu[i])
        )
    return out, state


def cluster_for(
    observations: ObservationMatrix, clustering: Clustering, i: int, ms: ModulusSet
) -> ClusterResidues:
    """The residues a clustering assigns to estimand i."""
    raws = [
        observations.values[clustering.perms[l][i], l] for l in range(ms.L)
    ]
    return ClusterResidues.from_raws(raws, ms)
