from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import TYPE_CHECKING

import pandas as pd

from src.report.verdict import fmt_fraction, fmt_value
from src.sets.set_algebra import CylinderSet
from src.sets.streams import DEFAULT_DEPTH, PieceStream

if TYPE_CHECKING:
    from src.masks.mask_analysis import StepTable

COLUMNS = ["lo", "hi", "value"]


def _value_text(value, table: StepTable | None) -> str:
    if table is None:
        return fmt_value(value)
    if isinstance(value, complex):
        if value.imag == 0:
            return f"{value.real:.12g}"
        return f"{value.real:.12g}{value.imag:+.12g}j"
    if value.is_rational():
        return fmt_value(value.rational_value())
    return str(value)


def interval_frame(s, depth: int = DEFAULT_DEPTH) -> pd.DataFrame:
    """lambda*-intervals of a set (value 1) or of a step table, adjacent equal rows merged."""
    from src.masks.mask_analysis import StepTable

    table = s if isinstance(s, StepTable) else None
    if table is not None:
        rows = table.rows()
    else:
        if isinstance(s, PieceStream):
            s = s.finite if s.is_finite() else s.enumerate(depth)[0]
        rows = [(lo, hi, 1) for lo, hi in s.intervals]

    df = pd.DataFrame(
        [(lo, hi, _value_text(v, table)) for lo, hi, v in rows],
        columns=COLUMNS,
    )
    if df.empty:
        return df
    starts = (df["value"] != df["value"].shift()) | (df["lo"] != df["hi"].shift())
    df["run"] = starts.cumsum()
    merged = df.groupby("run", sort=True).agg(lo=("lo", "first"), hi=("hi", "last"), value=("value", "first"))
    merged["lo"] = merged["lo"].map(fmt_fraction)
    merged["hi"] = merged["hi"].map(fmt_fraction)
    return merged.reset_index(drop=True)[COLUMNS]


def export_intervals(s, path, depth: int = DEFAULT_DEPTH) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    interval_frame(s, depth).to_csv(path, sep="\t", index=False, lineterminator="\n")
    return path


def read_intervals(path, p) -> CylinderSet:
    """The set of rows with a nonzero value in an exported file."""
    df = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    intervals = [
        (Fraction(row.lo), Fraction(row.hi))
        for row in df.itertuples(index=False)
        if row.value not in ("0", "0/1")
    ]
    return CylinderSet.from_intervals(p, intervals)
