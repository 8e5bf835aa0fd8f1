"""CSV ingestion, orchestration of all test families and plain-text reports."""

from __future__ import annotations

import csv
import datetime as _dt
import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from . import basic, interval, nonneg, probability
from .basic import PValuePair, TestConfig
from .errors import MissingColumn, PairDiffError, ParseError
from .sample import Kind, PairedSample, SampleSummary, normalize_weights, summarize, weight_adjust

logger = logging.getLogger(__name__)

SCRIPT_NAME = "pairdiff"
WEIGHT_COLUMN = "raw.w"
NA = "NA"

EQ, WTD, ADJ = "Eq-weighted", "Weighted", "W-adjusted"
ROW_T, ROW_JEFFREYS = "t-test", "Jeffreys"
ROW_BASIC, ROW_BASIC_NORMAL = "Basic", "Basic normal"
ROW_EXP, ROW_EXP_NORMAL = "Expanded variance", "Exp var normal"

DIRECTIONS = (
    ("p_prudent", "p-values for H0: mean(obs-pred)>=0 vs. H1: mean(obs-pred)<0"),
    ("p_aggressive", "p-values for H0: mean(obs-pred)<=0 vs. H1: mean(obs-pred)>0"),
)


def bundled_dataset(name: str) -> Path:
    """Path of a CSV file shipped in ``pairdiff/data``."""
    return Path(str(resources.files("pairdiff") / "data" / name))


# ---------------------------------------------------------------------------
# ingestion
# ---------------------------------------------------------------------------


def load_csv(path, mode: Kind, weight_column: Optional[str] = WEIGHT_COLUMN) -> PairedSample:
    """Read columns ``obs``, ``pred`` and the raw weight column into a :class:`PairedSample`.

    ``weight_column=None`` ignores any weight column and weights pairs equally.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        required = ["obs", "pred"] + ([weight_column] if weight_column else [])
        for col in required:
            if col not in header:
                raise MissingColumn(f"{path.name}: column '{col}' not found (have {header})")
        obs, pred, raw = [], [], []
        for lineno, row in enumerate(reader, start=2):
            try:
                obs.append(float(row["obs"]))
                pred.append(float(row["pred"]))
                if weight_column:
                    raw.append(float(row[weight_column]))
            except (TypeError, ValueError) as exc:
                raise ParseError(f"{path.name}, line {lineno}: {exc}") from None
    if not obs:
        raise ParseError(f"{path.name}: no data rows")
    obs_a, pred_a = np.array(obs), np.array(pred)
    try:
        w = normalize_weights(raw) if weight_column else np.full(obs_a.size, 1.0 / obs_a.size)
        return PairedSample(obs_a, pred_a, w, mode)
    except PairDiffError as exc:
        raise type(exc)(f"{path.name}: {exc} (data row numbering starts at 1)") from None


# ---------------------------------------------------------------------------
# orchestration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    mode: Kind = Kind.UNIT_INTERVAL
    seed: int = 23
    iterations: int = 999
    v_override: Optional[float] = None
    # "both": equal and column weights from raw.w; "equal": equal weights only;
    # anything else names the column holding the raw weights
    weight_source: str = "both"
    timestamp: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")

    @property
    def weight_column(self) -> Optional[str]:
        if self.weight_source == "equal":
            return None
        if self.weight_source == "both":
            return WEIGHT_COLUMN
        return self.weight_source


@dataclass
class ReportDocument:
    timestamp: str
    script: str
    input_name: str
    mode: Kind
    summary: SampleSummary
    seed: int
    iterations: int
    columns: list
    rows: list
    cells: dict  # row -> column -> PValuePair | None
    notes: list = field(default_factory=list)

    def value(self, direction: str, row: str, column: str) -> Optional[float]:
        cell = self.cells[row][column]
        return None if cell is None else getattr(cell, direction)


class _Notes:
    def __init__(self):
        self.items: list[str] = []

    def add(self, text: str) -> int:
        if text not in self.items:
            self.items.append(text)
        return self.items.index(text) + 1


def _dispersion(sample: PairedSample, override: Optional[float], own_kind: Kind) -> float:
    if override is not None and sample.kind is own_kind:
        return override
    if sample.kind is Kind.UNIT_INTERVAL:
        return interval.estimate_v_unit(sample.obs, sample.weights)
    return nonneg.estimate_v_gamma(sample.obs, sample.weights)


def _expanded_cells(sample: PairedSample, cfg: RunConfig, tcfg: TestConfig, column: str, notes: _Notes):
    """(bootstrap-or-exact cell, normal cell) for the variance-expanded rows of one column."""
    if sample.kind is Kind.PROBABILITY:
        return probability.exact_pvalues(sample), probability.probability_normal(sample)
    if sample.kind is Kind.RESIDUAL:
        notes.add(f"{column}: no variance-expansion model for unrestricted residuals.")
        return None, None

    v = _dispersion(sample, cfg.v_override, cfg.mode)
    family = "beta" if sample.kind is Kind.UNIT_INTERVAL else "gamma"
    notes.add(f"{column}: dispersion v = {_fmt(v)} ({family} mixture).")
    if v == 0.0:
        notes.add(f"{column}: v = 0 (constant observations); expanded-variance rows use the basic approach.")
        d, w = sample.residuals, sample.weights
        return basic.basic_bootstrap(d, w, tcfg), basic.basic_normal(d, w)
    if family == "beta":
        return interval.interval_bootstrap(sample, tcfg, v), interval.interval_normal(sample, v)
    if v > sample.obs_mean:
        notes.add(f"{column}: v exceeds the weighted mean observation; gamma dispersion is large.")
    return nonneg.nonneg_bootstrap(sample, tcfg, v), nonneg.nonneg_normal(sample, v)


def _guard(fn, column: str, row: str, notes: _Notes):
    try:
        return fn()
    except PairDiffError as exc:
        notes.add(f"{row} / {column}: not computed ({type(exc).__name__}: {exc}).")
        return None


def run_suite(cfg: RunConfig) -> ReportDocument:
    sample = load_csv(cfg.input_path, cfg.mode, cfg.weight_column)
    tcfg = TestConfig(R=cfg.iterations, seed=cfg.seed, workers=cfg.workers)
    notes = _Notes()

    columns = {EQ: sample.equally_weighted()}
    if cfg.weight_source != "equal":
        columns[WTD] = sample
        if cfg.mode is not Kind.PROBABILITY:
            columns[ADJ] = weight_adjust(sample)

    first_row = ROW_JEFFREYS if cfg.mode is Kind.PROBABILITY else ROW_T
    rows = [first_row, ROW_BASIC, ROW_BASIC_NORMAL, ROW_EXP, ROW_EXP_NORMAL]
    cells: dict = {r: {} for r in rows}

    for col, s in columns.items():
        d, w = s.residuals, s.weights
        if first_row == ROW_T:
            cells[ROW_T][col] = _guard(lambda: basic.t_test(d, w), col, ROW_T, notes)
            if col == WTD:
                notes.add(
                    "t-test / Weighted: weighted mean and second moment in the t statistic "
                    "(no strong theoretical foundation)."
                )
        elif col == EQ:
            summary = probability.BinomialSummary.from_sample(s)
            cells[ROW_JEFFREYS][col] = _guard(
                lambda: probability.jeffreys_pvalue(summary), col, ROW_JEFFREYS, notes
            )
        else:
            cells[ROW_JEFFREYS][col] = None
            notes.add("Jeffreys / Weighted: no weighted version of the binomial Jeffreys test.")
        cells[ROW_BASIC][col] = _guard(lambda: basic.basic_bootstrap(d, w, tcfg), col, ROW_BASIC, notes)
        cells[ROW_BASIC_NORMAL][col] = _guard(lambda: basic.basic_normal(d, w), col, ROW_BASIC_NORMAL, notes)
        exp = _guard(lambda: _expanded_cells(s, cfg, tcfg, col, notes), col, ROW_EXP, notes)
        cells[ROW_EXP][col], cells[ROW_EXP_NORMAL][col] = exp if exp is not None else (None, None)

    stamp = cfg.timestamp or _dt.datetime.now().astimezone().strftime("%Y-%m-%d %H:%M:%S %Z")
    return ReportDocument(
        timestamp=stamp,
        script=SCRIPT_NAME,
        input_name=Path(cfg.input_path).name,
        mode=cfg.mode,
        summary=summarize(sample),
        seed=cfg.seed,
        iterations=cfg.iterations,
        columns=list(columns),
        rows=rows,
        cells=cells,
        notes=notes.items,
    )


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _fmt(x: Optional[float]) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return NA
    return f"{x:.4g}"


def _row(values, width: int) -> str:
    return "".join(v.rjust(width) for v in values)


def render_report(doc: ReportDocument) -> str:
    s = doc.summary
    prob = doc.mode is Kind.PROBABILITY
    lines = [
        f"Run at: {doc.timestamp}",
        f"Script: {doc.script} ({doc.mode.value})",
        f"Input data: {doc.input_name}",
        "",
        "Summary of sample distribution:",
        f"Sample size: {s.n}",
        "Sample means:",
        _row(["EqWeighted", "Weighted"], 11),
        _row([_fmt(s.mean_eq), _fmt(s.mean_w)], 11),
        "Sample standard deviations:",
    ]
    sd_labels = ["EqWeighted", "Weighted"] + ([] if prob else ["W.adjusted"])
    sd_values = [s.sd_eq, s.sd_w] + ([] if prob else [s.sd_adj])
    lines += [_row(sd_labels, 11), _row([_fmt(x) for x in sd_values], 11)]
    lines.append("Three largest weights: " + " ".join(_fmt(x) for x in s.top_weights))
    q_labels = ["10%", "25%", "50%", "75%", "90%"]
    lines += ["Sample quantiles:", _row(q_labels, 11), _row([_fmt(x) for x in s.quantiles], 11)]
    if not prob:
        lines += [
            "Weight-adjusted sample quantiles:",
            _row(q_labels, 11),
            _row([_fmt(x) for x in s.quantiles_adj], 11),
        ]
    lines += ["", f"Random seed: {doc.seed}", f"Bootstrap iterations: {doc.iterations}"]

    for direction, title in DIRECTIONS:
        lines += ["", title, " " * 18 + _row(doc.columns, 12)]
        for r in doc.rows:
            vals = [_fmt(doc.value(direction, r, c)) for c in doc.columns]
            lines.append(r.ljust(18) + _row(vals, 12))

    if doc.notes:
        lines += ["", "Notes:"]
        lines += [f"[{i}] {text}" for i, text in enumerate(doc.notes, start=1)]
    return "\n".join(lines) + "\n"
