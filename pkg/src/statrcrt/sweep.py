"""Monte Carlo harness: SNR sweeps, probability tables, and aggregation.

Every trial draws its instance from a Philox substream keyed by
(seed, n, snr, trial), so results are bit-reproducible and identical
instances are fed to every algorithm in a cell (paired comparison).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np
from scipy.optimize import linear_sum_assignment

from .clustering_map import map_clustering, reconstruct_algo1
from .iterative import cluster_for, reconstruct_algo2
from .modular import ModulusSet, ObservationMatrix, ValidationError, project_common
from .noise import (
    GroundTruth,
    InstanceSpec,
    assumption1_holds,
    primes_from,
    sample_instance,
    separation_bound,
    separation_probability,
    snr_to_sigma,
)
from .single import ClusterResidues, Reconstruction, reconstruct_single
from .voting import DegenerateVoteError, VotingConfig, decode_with_errors, vote_reconstruct

CSV_COLUMNS = (
    "snr,n,algo,error_correction,trials,success_rate_avg,perfect_rate,"
    "mean_iters,p90_iters,assumption1_rate,stderr"
).split(",")

KNOWN_ALGOS = ("algo1", "algo2", "oracle-clustered")


def _default_snr_grid() -> list[float]:
    return [round(-40.0 + 2.5 * k, 6) for k in range(17)]  # -40 .. 0 step 2.5


@dataclass
class SweepConfig:
    gamma: float = 100.0
    prime_start: int = 23
    moduli: list[int] | None = None
    n_values: list[int] = field(default_factory=lambda: [2])
    l_rule: str = "2N"  # "2N" or a literal L
    snr_grid: list[float] = field(default_factory=_default_snr_grid)
    trials: int = 1000
    algos: list[str] = field(default_factory=lambda: ["algo1", "algo2"])
    error_correction: bool = False
    group_size: int = 0  # 0 disables subset voting
    l0: int = 2
    seed: int = 0

    def validate(self) -> None:
        if self.gamma <= 0:
            raise ValidationError("gamma: must be positive")
        if self.trials < 1:
            raise ValidationError("trials: must be at least 1")
        if not self.n_values or any(n < 1 for n in self.n_values):
            raise ValidationError("n_values: need positive integers")
        for a in self.algos:
            if a not in KNOWN_ALGOS:
                raise ValidationError(f"algos: unknown algorithm {a!r}")
        if self.l_rule != "2N":
            try:
                if int(self.l_rule) < 1:
                    raise ValueError
            except ValueError:
                raise ValidationError(
                    f"l_rule: expected '2N' or a positive integer, got {self.l_rule!r}"
                ) from None
        if self.error_correction and self.group_size:
            raise ValidationError(
                "error_correction and group_size voting are mutually exclusive"
            )

    def l_for(self, n: int) -> int:
        return 2 * n if self.l_rule == "2N" else int(self.l_rule)

    @property
    def mode(self) -> str:
        if self.error_correction:
            return "decode"
        return "vote" if self.group_size else "none"


_LIST_FIELDS = {"moduli", "n_values", "snr_grid", "algos"}
_BOOL_FIELDS = {"error_correction"}


def parse_config(text: str, base: SweepConfig | None = None) -> SweepConfig:
    """Flat key=value config; '#' starts a comment; lists are comma-separated."""
    cfg = base or SweepConfig()
    types = {f.name: f.type for f in fields(SweepConfig)}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"config line {lineno}: expected key=value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in types:
            raise ValidationError(f"config line {lineno}: unknown key {key!r}")
        cfg = replace(cfg, **{key: _parse_value(key, value, lineno)})
    cfg.validate()
    return cfg


def _parse_value(key: str, value: str, lineno: int):
    try:
        if key in _BOOL_FIELDS:
            if value.lower() not in ("true", "false", "0", "1"):
                raise ValueError
            return value.lower() in ("true", "1")
        if key in _LIST_FIELDS:
            items = [v.strip() for v in value.split(",") if v.strip()]
            if key == "algos":
                return items
            if key == "snr_grid":
                return [float(v) for v in items]
            return [int(v) for v in items]
        if key == "gamma":
            return float(value)
        if key == "l_rule":
            return value
        return int(value)
    except ValueError:
        raise ValidationError(
            f"config line {lineno}: bad value for {key}: {value!r}"
        ) from None


def _estimates(
    algo: str,
    mode: str,
    obs: ObservationMatrix,
    ms: ModulusSet,
    truth: GroundTruth,
    cfg: SweepConfig,
    y_range: float,
) -> tuple[list[float], int]:
    """Reconstructions for one trial; returns (y estimates, iterations)."""
    iters = 0
    if mode == "vote":
        # oracle-clustered rides the same voting protocol with the planted
        # clustering, so the comparison isolates the clustering step
        planted = truth.true_perms if algo == "oracle-clustered" else None
        vcfg = VotingConfig(group_size=cfg.group_size, l0=cfg.l0)
        try:
            recs = vote_reconstruct(
                obs, ms, vcfg, algo=algo, y_range=y_range, planted=planted
            )
        except DegenerateVoteError as err:
            recs = err.partial
        return [r.y_hat for r in recs], 0

    if algo == "oracle-clustered":
        recs = []
        for i in range(obs.n):
            raws = [obs.values[truth.true_perms.perms[l][i], l] for l in range(ms.L)]
            recs.append(reconstruct_single(ClusterResidues.from_raws(raws, ms), ms))
        return [r.y_hat for r in recs], 0

    if algo == "algo1":
        if mode == "decode":
            commons = project_common(obs.values, ms.gamma)
            clustering, _, _ = map_clustering(commons, ms)
        else:
            return [r.y_hat for r in reconstruct_algo1(obs, ms)], 0
    else:  # algo2
        recs, state = reconstruct_algo2(obs, ms)
        iters = state.iteration
        if mode != "decode":
            return [r.y_hat for r in recs], iters
        clustering = state.clustering

    decoded = [
        decode_with_errors(cluster_for(obs, clustering, i, ms), ms, cfg.l0)
        for i in range(obs.n)
    ]
    return [d.y_hat for d in decoded], iters


def _success_flags(ys_hat: list[float], ys_true: np.ndarray, gamma: float) -> list[bool]:
    """Per-number success after optimal assignment of estimates to truths."""
    n = len(ys_true)
    if not ys_hat:
        return [False] * n
    cost = np.abs(np.asarray(ys_hat)[:, None] - ys_true[None, :])
    rows, cols = linear_sum_assignment(cost)
    flags = [False] * n
    for r, c in zip(rows, cols):
        flags[c] = cost[r, c] <= gamma
    return flags


def _snr_stream_key(snr: float) -> int:
    if math.isinf(snr):  # noiseless sentinel
        return 2**62
    return int(round((snr + 10_000.0) * 1000.0))


def build_modulus_set(cfg: SweepConfig, n: int, snr: float) -> tuple[ModulusSet, float]:
    """Moduli and the Y sampling range for one sweep cell."""
    L = cfg.l_for(n)
    coprimes = cfg.moduli if cfg.moduli else primes_from(cfg.prime_start, L)
    if len(coprimes) != L:
        raise ValidationError(f"moduli: expected {L} entries, got {len(coprimes)}")
    sigma = snr_to_sigma(snr)
    if sigma > 0:
        ms = ModulusSet.from_sigmas(cfg.gamma, coprimes, [sigma] * L)
    else:
        ms = ModulusSet.from_weights(cfg.gamma, coprimes, [1.0] * L)
    y_range = cfg.gamma * math.prod(coprimes[: cfg.l0])
    return ms, y_range


def run_sweep(cfg: SweepConfig) -> list[dict]:
    """One row per (n, snr, algo) cell, in deterministic config order."""
    cfg.validate()
    mode = cfg.mode
    rows = []
    for n in cfg.n_values:
        for snr in cfg.snr_grid:
            ms, y_range = build_modulus_set(cfg, n, snr)
            spec = InstanceSpec(n=n, ms=ms, snr_db=snr, seed=cfg.seed, y_range=y_range)
            per_algo = {a: {"flags": [], "perfect": [], "iters": []} for a in cfg.algos}
            a1_count = 0
            for t in range(cfg.trials):
                truth, obs = sample_instance(spec, n, _snr_stream_key(snr), t)
                a1_count += assumption1_holds(truth, cfg.gamma)
                for algo in cfg.algos:
                    ys_hat, iters = _estimates(algo, mode, obs, ms, truth, cfg, y_range)
                    flags = _success_flags(ys_hat, truth.ys, cfg.gamma)
                    agg = per_algo[algo]
                    agg["flags"].extend(flags)
                    agg["perfect"].append(all(flags))
                    agg["iters"].append(iters)
            for algo in cfg.algos:
                agg = per_algo[algo]
                p = float(np.mean(agg["flags"]))
                iters = np.asarray(agg["iters"], dtype=float)
                rows.append({
                    "snr": snr,
                    "n": n,
                    "algo": algo,
                    "error_correction": mode,
                    "trials": cfg.trials,
                    "success_rate_avg": p,
                    "perfect_rate": float(np.mean(agg["perfect"])),
                    "mean_iters": float(iters.mean()),
                    "p90_iters": float(np.percentile(iters, 90)),
                    "assumption1_rate": a1_count / cfg.trials,
                    "stderr": math.sqrt(p * (1 - p) / len(agg["flags"])),
                })
    return rows


def format_csv(rows: list[dict], columns=CSV_COLUMNS) -> str:
    """Fixed column order, mandatory header, floats at 6 significant digits."""
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for col in columns:
            v = row[col]
            cells.append(f"{v:.6g}" if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


PROB_COLUMNS = ["sigma", "n", "l", "probability", "bound"]


def run_probability(
    sigma_grid: list[float],
    n_grid: list[int],
    gamma: float = 100.0,
    l_rule: str = "2N",
) -> list[dict]:
    """Tabulate the separation probability and its closed-form bound."""
    rows = []
    for sigma in sigma_grid:
        for n in n_grid:
            l = 2 * n if l_rule == "2N" else int(l_rule)
            rows.append({
                "sigma": float(sigma),
                "n": n,
                "l": l,
                "probability": separation_probability(sigma, gamma, n, l),
                "bound": separation_bound(sigma, gamma, n, l),
            })
    return rows
