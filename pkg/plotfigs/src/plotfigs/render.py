"""Figure rendering and the matching data-dump serialization.

Every kind defines the series it plots; `dump_series` emits exactly those
values (verbatim source strings), so tests can verify the plotted data is
a pure passthrough of the CSV.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .schema import FigureSpec, load_rows

# iteration statistics are binned into the two noise regimes the sweep
# protocol distinguishes
LOW_BAND = (-40.0, -20.0)   # [-40, -20)
HIGH_BAND = (-20.0, 0.0)    # [-20, 0]

DUMP_COLUMNS = {
    "sweep-curves": ("snr", "n", "algo", "success_rate_avg"),
    "iter-hist": ("snr", "n", "algo", "mean_iters"),
    "prob-table": ("sigma", "n", "l", "probability", "bound"),
}


def series_for(kind: str, rows: list[dict[str, str]]) -> list[dict[str, str]]:
    """The subset of columns a figure kind actually plots, source-ordered."""
    cols = DUMP_COLUMNS[kind]
    return [{c: row[c] for c in cols} for row in rows]


def dump_series(kind: str, rows: list[dict[str, str]]) -> str:
    """Plotted series as CSV, cells byte-identical to the source file."""
    cols = DUMP_COLUMNS[kind]
    lines = [",".join(cols)]
    lines += [",".join(row[c] for c in cols) for row in series_for(kind, rows)]
    return "\n".join(lines) + "\n"


def _groups(rows, keys):
    out: dict[tuple, list] = {}
    for row in rows:
        out.setdefault(tuple(row[k] for k in keys), []).append(row)
    return out


def _render_sweep_curves(rows, ax):
    for (n, algo), group in sorted(_groups(rows, ("n", "algo")).items()):
        group = sorted(group, key=lambda r: float(r["snr"]))
        ax.plot(
            [float(r["snr"]) for r in group],
            [float(r["success_rate_avg"]) for r in group],
            marker="o",
            label=f"N={n}, {algo}",
        )
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)


def _render_iter_hist(rows, ax):
    bands = {"low SNR [-40,-20)": [], "high SNR [-20,0]": []}
    for row in rows:
        snr = float(row["snr"])
        value = float(row["mean_iters"])
        if LOW_BAND[0] <= snr < LOW_BAND[1]:
            bands["low SNR [-40,-20)"].append(value)
        elif HIGH_BAND[0] <= snr <= HIGH_BAND[1]:
            bands["high SNR [-20,0]"].append(value)
    ax.hist(
        list(bands.values()),
        bins=10,
        label=list(bands.keys()),
    )
    ax.set_xlabel("mean iterations per cell")
    ax.set_ylabel("cells")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)


def _render_prob_table(rows, ax):
    for (n,), group in sorted(_groups(rows, ("n",)).items(), key=lambda kv: int(kv[0][0])):
        group = sorted(group, key=lambda r: float(r["sigma"]))
        sigmas = [float(r["sigma"]) for r in group]
        ax.plot(sigmas, [float(r["probability"]) for r in group],
                marker="o", label=f"N={n} probability")
        ax.plot(sigmas, [float(r["bound"]) for r in group],
                linestyle="--", label=f"N={n} bound")
    ax.set_xlabel("sigma")
    ax.set_ylabel("probability")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)


_RENDERERS = {
    "sweep-curves": _render_sweep_curves,
    "iter-hist": _render_iter_hist,
    "prob-table": _render_prob_table,
}


def render(spec: FigureSpec) -> Path:
    """Validate, draw, and write the figure; returns the output path.

    Reads the input exactly once and never writes anything on validation
    failure, so a bad input leaves the filesystem untouched.
    """
    rows = load_rows(spec.source, spec.kind)
    fig, ax = plt.subplots(figsize=(7, 4.5), dpi=120)
    try:
        _RENDERERS[spec.kind](rows, ax)
        fig.tight_layout()
        fig.savefig(spec.output)
    finally:
        plt.close(fig)
    return spec.output
