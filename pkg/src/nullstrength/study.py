"""Reading study tables, analysing each reported comparison, and writing reports.

A study table has one row per published two-group comparison with the
exact header::

    group_x,xbar,s_x,m,group_y,ybar,s_y,n,units,alpha,species,provenance,claimed_ne

``alpha`` may be a literal division such as ``0.05/3`` to record a
Bonferroni adjustment.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import IO, Iterable, Sequence

import numpy as np

from .candidates import CandidateValue, NullRegion, StatisticId, evaluate_all, r_xbar_dm
from .deltam import DeltaMResult, Scale, compute_delta_m, delta_m_from_draws
from .equivalence import EquivalenceDecision, test_negligible
from .errors import ControlMeanNotPositive, ControlNearZero, SchemaMismatch
from .posterior import DEFAULT_K, SampleSummary, draw_posterior_means, relative_difference_draws
from .rng import RngSeed, as_seed

COLUMNS = (
    "group_x",
    "xbar",
    "s_x",
    "m",
    "group_y",
    "ybar",
    "s_y",
    "n",
    "units",
    "alpha",
    "species",
    "provenance",
    "claimed_ne",
)

BUNDLED_TABLES = ("cholesterol_null", "cholesterol_positive", "plaque_null", "plaque_positive")

_SCI = re.compile(r"[eE][+-]?\d+$")
_TRUE = {"true", "1", "yes", "y", "✓"}
_FALSE = {"false", "0", "no", "n", ""}


def parse_alpha(expr: str) -> float:
    """Evaluate ``"a"`` or ``"a/b"`` as a float in (0, 1)."""
    parts = expr.strip().split("/")
    if len(parts) > 2:
        raise ValueError(f"alpha must be 'a' or 'a/b', got {expr!r}")
    value = float(parts[0])
    if len(parts) == 2:
        value /= float(parts[1])
    if not 0 < value < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {expr!r} = {value}")
    return value


@dataclass(frozen=True)
class StudyRecord:
    group_x_label: str
    xbar: float
    s_x: float
    m: int
    group_y_label: str
    ybar: float
    s_y: float
    n: int
    units: str
    alpha_expr: str
    species: str
    provenance: str
    claimed_ne: bool
    low_precision: bool = False

    def __post_init__(self) -> None:
        parse_alpha(self.alpha_expr)
        _ = (self.x, self.y)  # validates both summaries

    @property
    def alpha(self) -> float:
        return parse_alpha(self.alpha_expr)

    @property
    def x(self) -> SampleSummary:
        return SampleSummary(self.xbar, self.s_x, self.m)

    @property
    def y(self) -> SampleSummary:
        return SampleSummary(self.ybar, self.s_y, self.n)

    def to_dict(self) -> dict:
        return asdict(self)


def _read_row(i: int, row: dict) -> StudyRecord:
    def cell(name, conv):
        raw = row[name]
        try:
            return conv(raw)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"row {i}, column {name!r}: cannot parse {raw!r} ({exc})") from None

    def flag(raw):
        v = raw.strip().lower()
        if v in _TRUE:
            return True
        if v in _FALSE:
            return False
        raise ValueError("expected true/false")

    def integer(raw):
        v = float(raw)
        if v != int(v):
            raise ValueError("not an integer")
        return int(v)

    for name in ("alpha", "xbar", "s_x", "m", "ybar", "s_y", "n"):
        cell(name, parse_alpha if name == "alpha" else float)
    low = any(_SCI.search(row[c].strip()) for c in ("xbar", "s_x", "ybar", "s_y"))
    try:
        return StudyRecord(
            group_x_label=row["group_x"],
            xbar=cell("xbar", float),
            s_x=cell("s_x", float),
            m=cell("m", integer),
            group_y_label=row["group_y"],
            ybar=cell("ybar", float),
            s_y=cell("s_y", float),
            n=cell("n", integer),
            units=row["units"],
            alpha_expr=row["alpha"].strip(),
            species=row["species"],
            provenance=row["provenance"],
            claimed_ne=cell("claimed_ne", flag),
            low_precision=bool(low),
        )
    except ValueError as exc:
        if str(exc).startswith("row "):
            raise
        raise ValueError(f"row {i}: {exc}") from None


def parse_study_csv(source: str | os.PathLike | IO[str]) -> list[StudyRecord]:
    """Read a study table from a path or an open text stream.

    Raises
    ------
    SchemaMismatch
        If the header differs from :data:`COLUMNS` (names and order).
    ValueError
        If a cell cannot be parsed; the message names row and column.
    """
    if hasattr(source, "read"):
        return _parse(source)
    with open(source, newline="", encoding="utf-8") as fh:
        return _parse(fh)


def _parse(fh: IO[str]) -> list[StudyRecord]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None:
        raise SchemaMismatch("empty table: missing header row")
    header = [h.strip() for h in header]
    if tuple(header) != COLUMNS:
        missing = [c for c in COLUMNS if c not in header]
        extra = [c for c in header if c not in COLUMNS]
        detail = []
        if missing:
            detail.append(f"missing {missing}")
        if extra:
            detail.append(f"unexpected {extra}")
        if not detail:
            detail.append(f"columns out of order; expected {list(COLUMNS)}")
        raise SchemaMismatch("study table header: " + "; ".join(detail))
    records = []
    for i, cells in enumerate(reader, start=1):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != len(COLUMNS):
            raise ValueError(f"row {i}: expected {len(COLUMNS)} cells, got {len(cells)}")
        records.append(_read_row(i, dict(zip(COLUMNS, cells))))
    return records


def bundled_table(name: str) -> str:
    """Path of a bundled example table (see :data:`BUNDLED_TABLES`)."""
    if name not in BUNDLED_TABLES:
        raise ValueError(f"unknown table {name!r}; choose from {BUNDLED_TABLES}")
    return str(resources.files("nullstrength") / "data" / f"{name}.csv")


# -- analysis ------------------------------------------------------------------


@dataclass(frozen=True)
class StudyReportRow:
    record: StudyRecord
    candidate_values: list[CandidateValue]
    r_delta_m: DeltaMResult | None
    decision: EquivalenceDecision | None
    credible_interval: tuple[float, float] | None
    flags: tuple[str, ...] = field(default=())

    @property
    def r_xbar_dm(self) -> float:
        return r_xbar_dm(self.record.x, self.record.y)

    @property
    def equivalent(self) -> bool:
        return self.decision is not None and self.decision.equivalent


def analyze_record(
    record: StudyRecord, threshold_relative: float, k: int = DEFAULT_K, seed: RngSeed | int | None = None
) -> StudyReportRow:
    """Analyse one comparison at its own (possibly adjusted) alpha.

    When the control mean's posterior reaches zero the relative statistic
    is unstable; the row is then decided on raw delta_M against
    ``threshold_relative * xbar`` and flagged ``control_near_zero``.
    """
    if not threshold_relative > 0:
        raise ValueError(f"threshold must be positive, got {threshold_relative!r}")
    seed = as_seed(seed)
    x, y, alpha = record.x, record.y, record.alpha
    region = NullRegion.symmetric(threshold_relative, Scale.RELATIVE)
    values = evaluate_all(x, y, alpha, region, k, seed)
    flags = ["low_precision"] if record.low_precision else []
    if x.mean <= 0:
        flags.append(ControlMeanNotPositive.__name__)
        return StudyReportRow(record, values, None, None, None, tuple(flags))
    draws = draw_posterior_means(x, y, k, seed)
    try:
        rel = relative_difference_draws(draws)
    except ControlNearZero:
        flags.append("control_near_zero")
        raw = compute_delta_m(x, y, alpha, k, seed)
        decision = test_negligible(raw, threshold_relative * x.mean)
        return StudyReportRow(record, values, None, decision, None, tuple(flags))
    result = delta_m_from_draws(draws, alpha, Scale.RELATIVE)
    decision = test_negligible(result, threshold_relative, Scale.RELATIVE)
    lo, hi = np.quantile(rel, [alpha / 2.0, 1.0 - alpha / 2.0])
    return StudyReportRow(record, values, result, decision, (float(lo), float(hi)), tuple(flags))


def analyze_study(
    records: Iterable[StudyRecord],
    threshold_relative: float,
    k: int = DEFAULT_K,
    seed: RngSeed | int | None = None,
    workers: int = 1,
) -> list[StudyReportRow]:
    """Analyse every record; record ``i`` uses the stream ``seed.derive("record", i)``.

    Output does not depend on ``workers``.
    """
    seed = as_seed(seed)
    records = list(records)
    args = [(r, threshold_relative, k, seed.derive("record", i)) for i, r in enumerate(records)]
    if workers <= 1 or len(records) < 2:
        return [analyze_record(*a) for a in args]
    with ProcessPoolExecutor(max_workers=min(workers, len(records))) as pool:
        return list(pool.map(analyze_record, *zip(*args)))


# -- reporting -----------------------------------------------------------------


def percent_label(fraction: float) -> str:
    """Whole-percent label with halves rounded away from zero, e.g. ``-6%``."""
    if not math.isfinite(fraction):
        return "nan%"
    whole = int(math.floor(abs(fraction) * 100.0 + 0.5))
    return f"-{whole}%" if fraction < 0 and whole else f"{whole}%"


CSV_COLUMNS = (
    "provenance",
    "group_x",
    "group_y",
    "r_xbar_dm_percent",
    *(s.value for s in StatisticId),
    "tested_value",
    "tested_kind",
    "threshold",
    "decision",
    "ci_lower",
    "ci_upper",
    "flags",
)


def _num(v) -> str:
    if v is None:
        return ""
    return repr(float(v))


def _csv_row(row: StudyReportRow) -> list[str]:
    rec = row.record
    by_id = {c.statistic_id: c.value for c in row.candidate_values}
    d = row.decision
    ci = row.credible_interval or (None, None)
    return [
        rec.provenance,
        rec.group_x_label,
        rec.group_y_label,
        percent_label(row.r_xbar_dm),
        *(_num(by_id.get(s)) for s in StatisticId),
        _num(d.delta_m.value) if d else "",
        d.delta_m.kind.value if d else "",
        _num(d.threshold) if d else "",
        d.designation.value if d else "",
        _num(ci[0]),
        _num(ci[1]),
        ";".join(row.flags),
    ]


def row_to_dict(row: StudyReportRow) -> dict:
    return {
        "record": row.record.to_dict(),
        "r_xbar_dm": row.r_xbar_dm,
        "r_xbar_dm_percent": percent_label(row.r_xbar_dm),
        "candidate_values": [
            {
                "statistic_id": c.statistic_id.value,
                "value": c.value,
                "direction": c.direction.value,
                "error": c.error,
            }
            for c in row.candidate_values
        ],
        "r_delta_m": row.r_delta_m.to_dict() if row.r_delta_m else None,
        "decision": row.decision.to_dict() if row.decision else None,
        "credible_interval": list(row.credible_interval) if row.credible_interval else None,
        "flags": list(row.flags),
    }


def emit_report(
    rows: Sequence[StudyReportRow], format: str = "json", manifest: dict | None = None
) -> str:
    """Render report rows as CSV or JSON.

    JSON is an array of row objects, or ``{"manifest": ..., "rows": [...]}``
    when a manifest is given.  CSV prepends the manifest as a ``# manifest``
    comment line.  Floats keep full precision; non-finite values use the
    ``NaN`` and ``Infinity`` spellings of Python's json module.
    """
    if format == "json":
        body = [row_to_dict(r) for r in rows]
        doc = body if manifest is None else {"manifest": manifest, "rows": body}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if format == "csv":
        buf = io.StringIO()
        if manifest is not None:
            buf.write("# manifest " + json.dumps(manifest, sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in rows:
            w.writerow(_csv_row(r))
        return buf.getvalue()
    raise ValueError(f"format must be 'csv' or 'json', got {format!r}")
