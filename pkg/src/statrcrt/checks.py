"""Randomized agreement suite between the fast paths and their brute-force
oracles, runnable from the CLI."""

from __future__ import annotations

import numpy as np

from .clustering_map import map_clustering
from .iterative import match_step
from .modular import ModulusSet, ObservationMatrix, project_common
from .noise import InstanceSpec, assumption1_holds, default_modulus_set, sample_instance, substream
from .oracle import (
    OracleBudget,
    brute_force_map_clustering,
    brute_force_matching,
    exhaustive_reconstruct,
    matching_cost,
)
from .single import ClusterResidues, estimate_common_residue, reconstruct_single


def _grid_min(commons, weights, gamma, steps=50000):
    xs = np.arange(steps) * (gamma / steps)
    obj = np.zeros(steps)
    for w, r in zip(weights, commons):
        d = np.abs(xs - r)
        d = np.minimum(d, gamma - d)
        obj += w * d * d
    g = int(np.argmin(obj))
    return float(xs[g]), float(obj[g])


def check_map_vs_bruteforce(trials: int, seed: int) -> tuple[int, int]:
    """Clustering agreement on conditioned small instances; returns
    (agreements, total conditioned instances)."""
    budget = OracleBudget()
    agree = total = 0
    attempt = 0
    rng = substream(seed, 1)
    while total < trials and attempt < trials * 20:
        attempt += 1
        n = int(rng.integers(2, 4))
        L = int(rng.integers(2, 4))
        snr = float(rng.uniform(0.0, 10.0))
        ms = default_modulus_set(100.0, L, snr)
        spec = InstanceSpec(n=n, ms=ms, snr_db=snr, seed=seed)
        truth, obs = sample_instance(spec, 2, attempt)
        if not assumption1_holds(truth, ms.gamma):
            continue
        total += 1
        commons = project_common(obs.values, ms.gamma)
        fast, _, _ = map_clustering(commons, ms)
        exact = brute_force_map_clustering(commons, ms, budget)
        agree += fast.groups() == exact.groups()
    return agree, total


def check_matching_vs_bruteforce(trials: int, seed: int) -> tuple[int, int]:
    """Rotation matching objective equals the exact minimum; exact count."""
    rng = substream(seed, 2)
    good = 0
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        gamma = float(rng.uniform(1.0, 100.0))
        column = rng.uniform(0, gamma, n)
        mu = rng.uniform(0, gamma, n)
        fast = match_step(column, mu, gamma)
        exact = brute_force_matching(column, mu, gamma)
        good += abs(
            matching_cost(column, mu, fast, gamma)
            - matching_cost(column, mu, exact, gamma)
        ) <= 1e-9
    return good, trials


def check_common_residue_vs_grid(trials: int, seed: int) -> tuple[int, int]:
    rng = substream(seed, 3)
    good = 0
    for _ in range(trials):
        L = int(rng.integers(1, 8))
        gamma = float(rng.uniform(1.0, 50.0))
        commons = rng.uniform(0, gamma, L)
        weights = rng.uniform(0.1, 5.0, L)
        _, loss = estimate_common_residue(commons, weights, gamma)
        _, grid_loss = _grid_min(commons, weights, gamma)
        good += loss <= grid_loss + 1e-6
    return good, trials


def check_single_vs_exhaustive(trials: int, seed: int) -> tuple[int, int]:
    """Single-number reconstruction against quotient enumeration, with
    conditioned noise (spread below gamma/2)."""
    rng = substream(seed, 4)
    good = 0
    gamma = 5.0
    ms = ModulusSet.from_weights(gamma, [2, 3, 7], [1.0, 1.0, 1.0])
    for _ in range(trials):
        y = float(rng.uniform(0, ms.dynamic_range))
        while True:
            noise = rng.normal(0, 0.4, ms.L)
            if noise.max() - noise.min() < gamma / 2:
                break
        raws = [project_common(y + noise[l], ms.moduli[l]) for l in range(ms.L)]
        cluster = ClusterResidues.from_raws(raws, ms)
        fast = reconstruct_single(cluster, ms).y_hat
        exact = exhaustive_reconstruct(cluster, ms)
        good += abs(fast - exact) <= 1e-6
    return good, trials


def run_oracle_check(trials: int, seed: int) -> tuple[str, bool]:
    """Run all agreement suites; returns (report, passed)."""
    lines = []
    passed = True

    a, t = check_map_vs_bruteforce(min(trials, 500), seed)
    ok = t > 0 and a / t >= 0.99
    passed &= ok
    lines.append(f"map clustering vs brute force      : {a}/{t} agree "
                 f"[{'pass' if ok else 'FAIL'}]")

    a, t = check_matching_vs_bruteforce(trials, seed)
    ok = a == t
    passed &= ok
    lines.append(f"rotation matching vs brute force   : {a}/{t} agree "
                 f"[{'pass' if ok else 'FAIL'}]")

    a, t = check_common_residue_vs_grid(trials, seed)
    ok = a == t
    passed &= ok
    lines.append(f"common residue vs grid search      : {a}/{t} agree "
                 f"[{'pass' if ok else 'FAIL'}]")

    a, t = check_single_vs_exhaustive(min(trials, 300), seed)
    ok = a == t
    passed &= ok
    lines.append(f"single-number vs quotient search   : {a}/{t} agree "
                 f"[{'pass' if ok else 'FAIL'}]")

    lines.append("overall: " + ("pass" if passed else "FAIL"))
    return "\n".join(lines) + "\n", passed
