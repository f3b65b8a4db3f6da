"""Command-line front end for the Monte Carlo harness.

Subcommands:
  sweep        SNR sweep over (n, snr, algo) cells, CSV out
  demo         worked small instances with checked intermediates
  prob         separation probability / bound tables, CSV out
  oracle-check randomized fast-path vs brute-force agreement suite

Exit codes: 0 success, 1 validation error, 2 demo or oracle mismatch.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .checks import run_oracle_check
from .demo import run_demo
from .modular import ValidationError
from .sweep import (
    PROB_COLUMNS,
    SweepConfig,
    format_csv,
    parse_config,
    run_probability,
    run_sweep,
)


def _add_sweep_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="flat key=value config file")
    p.add_argument("--gamma", type=float)
    p.add_argument("--prime-start", type=int, dest="prime_start")
    p.add_argument("--moduli", type=str, help="explicit co-prime factors, comma-separated")
    p.add_argument("--n-values", type=str, dest="n_values")
    p.add_argument("--l-rule", type=str, dest="l_rule")
    p.add_argument("--snr-grid", type=str, dest="snr_grid")
    p.add_argument("--trials", type=int)
    p.add_argument("--algos", type=str)
    p.add_argument("--error-correction", action="store_true", default=None,
                   dest="error_correction")
    p.add_argument("--group-size", type=int, dest="group_size")
    p.add_argument("--l0", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, help="CSV output path (default stdout)")


def _sweep_config(args: argparse.Namespace) -> SweepConfig:
    cfg = SweepConfig()
    if args.config is not None:
        cfg = parse_config(args.config.read_text(), cfg)
    overrides = {}
    for key in ("gamma", "prime_start", "trials", "group_size", "l0", "seed",
                "l_rule", "error_correction"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    for key in ("moduli", "n_values", "snr_grid", "algos"):
        value = getattr(args, key, None)
        if value is not None:
            items = [v.strip() for v in value.split(",") if v.strip()]
            if key == "algos":
                overrides[key] = items
            elif key == "snr_grid":
                overrides[key] = [float(v) for v in items]
            else:
                overrides[key] = [int(v) for v in items]
    cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="statrcrt",
        description="statistical robust CRT simulation harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run an SNR sweep and emit CSV")
    _add_sweep_overrides(p_sweep)

    sub.add_parser("demo", help="run the worked instances with checks")

    p_prob = sub.add_parser("prob", help="tabulate separation probabilities")
    p_prob.add_argument("--sigma-grid", type=str, required=True)
    p_prob.add_argument("--n-grid", type=str, default="2,4,6")
    p_prob.add_argument("--gamma", type=float, default=100.0)
    p_prob.add_argument("--l-rule", type=str, default="2N", dest="l_rule")
    p_prob.add_argument("--out", type=Path)

    p_check = sub.add_parser("oracle-check", help="fast path vs oracle agreement")
    p_check.add_argument("--trials", type=int, default=500)
    p_check.add_argument("--seed", type=int, default=0)

    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            cfg = _sweep_config(args)
            _emit(format_csv(run_sweep(cfg)), args.out)
            return 0
        if args.command == "demo":
            text, ok = run_demo()
            sys.stdout.write(text)
            return 0 if ok else 2
        if args.command == "prob":
            sigmas = [float(v) for v in args.sigma_grid.split(",") if v.strip()]
            ns = [int(v) for v in args.n_grid.split(",") if v.strip()]
            rows = run_probability(sigmas, ns, gamma=args.gamma, l_rule=args.l_rule)
            _emit(format_csv(rows, PROB_COLUMNS), args.out)
            return 0
        if args.command == "oracle-check":
            text, ok = run_oracle_check(args.trials, args.seed)
            sys.stdout.write(text)
            return 0 if ok else 2
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
