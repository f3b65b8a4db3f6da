"""The CSV contracts this tool consumes, validated by header.

Only the documented column layout is accepted — no coupling to the
producing package's internals, so either side can be replaced
independently.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

SWEEP_COLUMNS = (
    "snr", "n", "algo", "error_correction", "trials", "success_rate_avg",
    "perfect_rate", "mean_iters", "p90_iters", "assumption1_rate", "stderr",
)
PROB_COLUMNS = ("sigma", "n", "l", "probability", "bound")

KINDS = ("sweep-curves", "iter-hist", "prob-table")

# which contract each figure kind reads
COLUMNS_FOR_KIND = {
    "sweep-curves": SWEEP_COLUMNS,
    "iter-hist": SWEEP_COLUMNS,
    "prob-table": PROB_COLUMNS,
}


class SchemaError(ValueError):
    """The input CSV does not match the documented contract."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    source: Path
    output: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(
                f"unknown figure kind {self.kind!r}; expected one of {', '.join(KINDS)}"
            )


def load_rows(path: Path, kind: str) -> list[dict[str, str]]:
    """Parse and validate one CSV against the contract for `kind`.

    Values are kept as the exact strings from the file so a data dump can
    reproduce them byte-for-byte. Raises SchemaError naming the first
    offending column on a header mismatch, and on empty data.
    """
    expected = COLUMNS_FOR_KIND[kind]
    text = path.read_text()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(f"{path}: empty file, expected header "
                          f"{','.join(expected)}") from None
    if tuple(header) != expected:
        for got, want in zip(header, expected):
            if got != want:
                raise SchemaError(
                    f"{path}: expected column {want!r}, found {got!r}"
                )
        missing_or_extra = set(header) ^ set(expected)
        raise SchemaError(
            f"{path}: header length mismatch around column(s) "
            f"{', '.join(sorted(missing_or_extra))}"
        )
    rows = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells:
            continue
        if len(cells) != len(expected):
            raise SchemaError(f"{path}:{lineno}: expected {len(expected)} cells, "
                              f"got {len(cells)}")
        rows.append(dict(zip(expected, cells)))
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows
