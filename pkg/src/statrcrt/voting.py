"""Robustness strengthening: moduli regrouping, majority voting on quotients,
and an error-tolerant single-number decoder.

Because CRT quotients are exact integers, reconstructions from different
moduli subsets are directly comparable: a corrupted subset lands on an
essentially random quotient while correct ones agree, so a plain majority
vote over subsets already filters outliers. The one systematic ambiguity is
a uniform gamma shift (quotients Q and Q+1 with the common residue on
opposite sides of the wrap point), which is merged before counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .clustering_map import reconstruct_algo1
from .iterative import reconstruct_algo2
from .modular import Clustering, ModulusSet, ObservationMatrix, ValidationError
from .single import ClusterResidues, Reconstruction, reconstruct_single


class DegenerateVoteError(ValidationError):
    """Fewer distinct quotient candidates than numbers to output."""

    def __init__(self, message: str, partial: list[Reconstruction]):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class VotingConfig:
    """Subset size and the minimal prefix length whose lcm covers the
    reconstruction range."""

    group_size: int
    l0: int

    def __post_init__(self):
        if self.l0 < 1 or self.group_size < self.l0:
            raise ValidationError("group_size must be at least l0")


@dataclass(frozen=True)
class DecodeResult:
    y_hat: float
    quotient: int
    mu_hat: float
    confidence: float
    low_confidence: bool


def minimal_prefix(ms: ModulusSet, y_range: float) -> int:
    """Smallest L0 with gamma * prod(M_1..M_L0) covering [0, y_range)."""
    prod = 1
    for l0, m in enumerate(ms.coprimes, start=1):
        prod *= m
        if ms.gamma * prod >= y_range:
            return l0
    raise ValidationError("y_range exceeds the dynamic range of the moduli")


def regroup_moduli(
    ms: ModulusSet, group_size: int, y_range: float | None = None
) -> list[tuple[int, ...]]:
    """All size-group_size index subsets whose moduli lcm covers y_range.

    y_range defaults to gamma times the product of the group_size smallest
    co-prime factors, under which every subset of that size qualifies.
    """
    if y_range is None:
        y_range = ms.gamma * math.prod(sorted(ms.coprimes)[:group_size])
    l0 = minimal_prefix(ms, y_range)
    if group_size < l0:
        raise ValidationError(
            f"group_size {group_size} below the minimal prefix length {l0}"
        )
    return [
        subset
        for subset in combinations(range(ms.L), group_size)
        if ms.gamma * math.prod(ms.coprimes[l] for l in subset) >= y_range
    ]


def _merge_shift_pairs(
    candidates: list[tuple[int, float]], gamma: float
) -> dict[int, list[float]]:
    """Group (quotient, mu) candidates, folding the uniform gamma shift.

    (Q+1, mu2) merges into (Q, mu1-group) when some mu1 sits above the wrap
    point, mu2 below it, and d_gamma(mu1, mu2) < gamma/4; the merged mu is
    lifted by gamma so plain averaging stays consistent.
    """
    by_q: dict[int, list[float]] = {}
    for q, mu in sorted(candidates):
        by_q.setdefault(q, []).append(mu)
    for q in sorted(by_q):
        if q + 1 not in by_q or q not in by_q:
            continue
        upper = [m for m in by_q[q] if m > gamma / 2]
        if not upper:
            continue
        keep = []
        for mu2 in by_q[q + 1]:
            d = min(abs(mu1 - mu2) % gamma for mu1 in upper)
            d = min(d, gamma - d)
            if mu2 < gamma / 2 and d < gamma / 4:
                by_q[q].append(mu2 + gamma)
            else:
                keep.append(mu2)
        if keep:
            by_q[q + 1] = keep
        else:
            del by_q[q + 1]
    return by_q


def vote_reconstruct(
    observations: ObservationMatrix,
    ms: ModulusSet,
    cfg: VotingConfig,
    algo: str = "algo2",
    y_range: float | None = None,
    planted: Clustering | None = None,
) -> list[Reconstruction]:
    """Run the chosen algorithm on every qualifying moduli subset and keep
    the N most frequent quotients.

    Frequency ties break toward the smaller quotient, so the output is
    invariant to subset evaluation order. Each winner's estimate averages
    the supporting common residues. A planted clustering, when given,
    bypasses the algorithm and assigns each subset's observations from it
    (the perfect-clustering baseline under the same voting protocol).
    """
    subsets = regroup_moduli(ms, cfg.group_size, y_range)
    if not subsets:
        raise ValidationError("no qualifying moduli subsets")
    n = observations.n
    candidates: list[tuple[int, float]] = []
    for subset in subsets:
        sub_ms = ms.subset(subset)
        sub_obs = ObservationMatrix(observations.values[:, list(subset)])
        if planted is not None:
            recs = [
                reconstruct_single(
                    ClusterResidues.from_raws(
                        [observations.values[planted.perms[l][i], l] for l in subset],
                        sub_ms,
                    ),
                    sub_ms,
                )
                for i in range(n)
            ]
        elif algo == "algo1":
            recs = reconstruct_algo1(sub_obs, sub_ms)
        elif algo == "algo2":
            recs, _ = reconstruct_algo2(sub_obs, sub_ms)
        else:
            raise ValidationError(f"unknown algorithm {algo!r}")
        candidates.extend((r.quotient, r.mu_hat) for r in recs)

    by_q = _merge_shift_pairs(candidates, ms.gamma)
    ranked = sorted(by_q.items(), key=lambda item: (-len(item[1]), item[0]))
    out = []
    for q, mus in ranked[:n]:
        mu = sum(mus) / len(mus)
        out.append(Reconstruction(q * ms.gamma + mu, q, mu))
    if len(out) < n:
        raise DegenerateVoteError(
            f"only {len(out)} distinct quotient candidates for {n} numbers", out
        )
    return out


def decode_with_errors(
    cluster: ClusterResidues, ms: ModulusSet, l0: int
) -> DecodeResult:
    """Error-tolerant single-number decoding via size-l0 subset voting.

    Every size-l0 residue subset proposes a quotient; the modal one (after
    merging gamma-shift pairs) wins, and the common residue is re-estimated
    from the residues consistent with it. Tolerates up to
    floor((L - l0) / 2) arbitrarily corrupted residues when the correct
    ones have noise spread below gamma/2.
    """
    L = ms.L
    if L <= l0:
        raise ValidationError("decoding with errors needs L > l0 redundancy")
    candidates = []
    for subset in combinations(range(L), l0):
        sub_ms = ms.subset(subset)
        sub_cluster = ClusterResidues.from_raws(
            [cluster.raws[l] for l in subset], sub_ms
        )
        rec = reconstruct_single(sub_cluster, sub_ms)
        candidates.append((rec.quotient, rec.mu_hat))

    by_q = _merge_shift_pairs(candidates, ms.gamma)
    q_star, mus = min(by_q.items(), key=lambda item: (-len(item[1]), item[0]))
    support = len(mus)
    mu0 = sum(mus) / len(mus)

    # Keep only residues whose implied quotient residue matches Q*.
    consistent = []
    for l in range(L):
        j = round((cluster.raws[l] - mu0) / ms.gamma)
        if j % ms.coprimes[l] == q_star % ms.coprimes[l]:
            # lifted estimate of mu: may drift slightly outside [0, gamma)
            consistent.append((ms.weights[l], cluster.raws[l] - j * ms.gamma))
    if consistent:
        w_total = sum(w for w, _ in consistent)
        mu_hat = sum(w * v for w, v in consistent) / w_total
    else:
        mu_hat = mu0

    total = math.comb(L, l0)
    return DecodeResult(
        y_hat=q_star * ms.gamma + mu_hat,
        quotient=q_star,
        mu_hat=mu_hat,
        confidence=support / total,
        low_confidence=support <= 1,
    )
