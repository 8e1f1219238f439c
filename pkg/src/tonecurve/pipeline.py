"""Batch analysis: manifest -> per-token TCATT results -> statistics tables."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .exceptions import GeometryError, StatsError, ToneCurveError
from .ingest import CorpusManifest, TokenRecord, load_corpus
from .normalize import REFERENCE_METHODS, normalize_corpus
from .stats import (
    Observation,
    anova,
    format_p,
    group_summary,
    mann_whitney_z,
    pearson,
)
from .tcatt import CURVATURE_CONVENTION, analyze_token

RESULT_COLUMNS = (
    "token_id", "speaker", "gender", "tonal_combination", "position", "repetition",
    "duration_ms", *[f"s{i}" for i in range(1, 11)], "class",
    "turn_idx_1", "angle_1_rad", "sine_1", "obtuse_1",
    "turn_idx_2", "angle_2_rad", "sine_2", "obtuse_2",
    "curvature_index", "paper_sine_1", "paper_sine_2",
)
FACTORS = ("tonal_combination", "position", "gender")
N_TURNS = {"Monotone": 0, "One": 1, "TwoOrMore": 2}


@dataclass(frozen=True)
class RunConfig:
    manifest: str = ""
    output_dir: str = ""
    reference_method: str = "arithmetic_mean"
    voiced_coverage_threshold: float = 0.5
    eps_slope: float = 1e-6
    semitone_axis_scale: float = 1.0
    emit_paper_sine: bool = True
    anova_interactions: bool = False
    anova_one_way_fallback: bool = False
    seed: int = 2021

    def __post_init__(self):
        if self.reference_method not in REFERENCE_METHODS:
            raise ValueError(f"reference_method must be one of {REFERENCE_METHODS}")
        for name in ("voiced_coverage_threshold", "eps_slope", "semitone_axis_scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def metadata(self) -> Dict[str, object]:
        """Every setting that can change a number, plus the geometry convention."""
        d = asdict(self)
        d.pop("output_dir")
        d["curvature_convention"] = CURVATURE_CONVENTION
        d["tonecurve_version"] = __version__
        return d


def fmt(x) -> str:
    """Six significant digits; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return f"{x:.6g}"


def _result_row(tok: TokenRecord, contour, res, emit_paper_sine: bool) -> Dict[str, object]:
    row = {"token_id": tok.token_id, "speaker": tok.speaker_id, "gender": tok.gender,
           "tonal_combination": tok.tonal_combination, "position": tok.position,
           "repetition": tok.repetition, "duration_ms": contour.duration_ms}
    for i, s in enumerate(contour.s.tolist(), start=1):
        row[f"s{i}"] = s
    row["class"] = res.contour_class.value
    for k in (1, 2):
        turn = res.turns[k - 1] if len(res.turns) >= k else None
        row[f"turn_idx_{k}"] = turn.index if turn else None
        row[f"angle_{k}_rad"] = turn.angle_rad if turn else None
        row[f"sine_{k}"] = turn.sine if turn else None
        row[f"obtuse_{k}"] = turn.obtuse if turn else None
        row[f"paper_sine_{k}"] = turn.paper_sine if (turn and emit_paper_sine) else None
    row["curvature_index"] = res.curvature_index
    return row


def analyze_records(records: Sequence[TokenRecord], config: RunConfig, workers: int = 1,
                    errors: Optional[List[Tuple[str, str]]] = None) -> List[Dict[str, object]]:
    """Normalize and run TCATT on loaded tokens; rows sorted by token_id."""
    errors = [] if errors is None else errors
    contours = normalize_corpus(records, config.reference_method,
                                config.voiced_coverage_threshold, workers, errors)
    by_id = {r.token_id: r for r in records}

    def one(contour):
        try:
            res = analyze_token(contour, config.eps_slope, config.semitone_axis_scale)
        except GeometryError as exc:
            return None, (contour.token_id, str(exc))
        return _result_row(by_id[contour.token_id], contour, res,
                           config.emit_paper_sine), None

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, contours))
    else:
        outcomes = [one(c) for c in contours]
    rows = []
    for row, err in outcomes:
        if err:
            errors.append(err)
        else:
            rows.append(row)
    rows.sort(key=lambda r: r["token_id"])
    errors.sort()
    return rows


def analyze_manifest(manifest: CorpusManifest, file_loader, config: RunConfig,
                     workers: int = 1):
    """Returns ``(rows, errors)``; per-token failures never abort the run."""
    if manifest.n_tokens == 0:
        raise ToneCurveError("manifest lists no tokens")
    errors: List[Tuple[str, str]] = []
    records = load_corpus(manifest, file_loader, errors=errors, workers=workers)
    rows = analyze_records(records, config, workers, errors)
    return rows, sorted(errors)


def results_csv(rows: Sequence[Mapping[str, object]], config: RunConfig) -> str:
    buf = io.StringIO()
    buf.write("# tonecurve per-token results\n")
    for key, value in config.metadata().items():
        buf.write(f"# {key}: {value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for row in rows:
        w.writerow([fmt(row[c]) if c not in ("token_id", "speaker", "gender",
                                             "tonal_combination", "position", "class")
                    else row[c] for c in RESULT_COLUMNS])
    return buf.getvalue()


def errors_csv(errors: Sequence[Tuple[str, str]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["token_id", "reason"])
    w.writerows(errors)
    return buf.getvalue()


def results_json(rows, config: RunConfig) -> str:
    return json.dumps({"metadata": config.metadata(), "tokens": list(rows)},
                      indent=1, sort_keys=False, ensure_ascii=False) + "\n"


def read_results_csv(text: str) -> List[Dict[str, str]]:
    """Parse ``results.csv`` back into dict rows (strings), skipping ``#`` lines."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def _observations(rows, dependent, factors):
    out = []
    for row in rows:
        if dependent == "n_turns":
            value = float(N_TURNS[row["class"]])
        else:
            value = float(row[dependent])
        out.append(Observation(value, {f: row[f] for f in factors}))
    return out


@dataclass
class StatsReport:
    anova: List[Dict[str, object]]
    groups: List[Dict[str, object]]
    correlation: List[Dict[str, object]]
    ranktest: List[Dict[str, object]]

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=1) + "\n"


def compute_stats(rows: Sequence[Mapping[str, str]], factors: Sequence[str] = FACTORS,
                  include_interactions: bool = False,
                  one_way_fallback: bool = False) -> StatsReport:
    """The full statistics battery over analyzed token rows."""
    if not rows:
        raise StatsError("no result rows")
    required = list(factors) + ["curvature_index", "class", "duration_ms"]
    for col in required:
        if col not in rows[0]:
            raise StatsError(f"results file has no column {col!r}")

    anova_rows = []
    for dep in ("curvature_index", "n_turns"):
        tables = anova(_observations(rows, dep, factors), factors,
                       include_interactions, one_way_fallback)
        for table in tables:
            for r in table.rows:
                anova_rows.append({"dependent": dep, "model": table.model, "effect": r.name,
                                   "df": r.df, "sum_sq": r.sum_sq, "mean_sq": r.mean_sq,
                                   "F": None if math.isnan(r.F) else r.F,
                                   "p": None if math.isnan(r.p) else r.p,
                                   "degenerate": table.degenerate})

    group_rows = []
    for dep in ("curvature_index", "n_turns", "duration_ms"):
        for factor in factors:
            for g in group_summary(_observations(rows, dep, [factor]), [factor]):
                group_rows.append({"variable": dep, "factor": factor, "level": g.levels[0][1],
                                   "n": g.n, "mean": g.mean, "sd": g.sd})

    corr_rows = []
    try:
        c = pearson([float(r["curvature_index"]) for r in rows],
                    [float(r["duration_ms"]) for r in rows])
        corr_rows.append({"x": "curvature_index", "y": "duration_ms", "n": c.n, "r": c.r,
                          "t_stat": c.t_stat, "p": c.p, "note": ""})
    except StatsError as exc:
        corr_rows.append({"x": "curvature_index", "y": "duration_ms", "n": len(rows),
                          "r": None, "t_stat": None, "p": None, "note": str(exc)})

    rank_rows = []
    if "gender" in rows[0]:
        x = [float(r["curvature_index"]) for r in rows if r["gender"] == "F"]
        y = [float(r["curvature_index"]) for r in rows if r["gender"] == "M"]
        base = {"variable": "curvature_index", "group_1": "F", "group_2": "M"}
        try:
            t = mann_whitney_z(x, y)
            rank_rows.append({**base, "n1": t.n1, "n2": t.n2, "U": t.U, "z": t.z, "p": t.p,
                              "note": ""})
        except StatsError as exc:
            rank_rows.append({**base, "n1": len(x), "n2": len(y), "U": None, "z": None,
                              "p": None, "note": str(exc)})
    return StatsReport(anova_rows, group_rows, corr_rows, rank_rows)


def table_csv(rows: Sequence[Mapping[str, object]], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        out = []
        for c in columns:
            v = row.get(c)
            if c == "p" and v is not None:
                out.append(format_p(v))
            elif isinstance(v, str):
                out.append(v)
            else:
                out.append(fmt(v))
        w.writerow(out)
    return buf.getvalue()


STATS_COLUMNS = {
    "anova.csv": ("dependent", "model", "effect", "df", "sum_sq", "mean_sq", "F", "p",
                  "degenerate"),
    "groups.csv": ("variable", "factor", "level", "n", "mean", "sd"),
    "correlation.csv": ("x", "y", "n", "r", "t_stat", "p", "note"),
    "ranktest.csv": ("variable", "group_1", "group_2", "n1", "n2", "U", "z", "p", "note"),
}


def stats_files(report: StatsReport) -> Dict[str, str]:
    return {
        "anova.csv": table_csv(report.anova, STATS_COLUMNS["anova.csv"]),
        "groups.csv": table_csv(report.groups, STATS_COLUMNS["groups.csv"]),
        "correlation.csv": table_csv(report.correlation, STATS_COLUMNS["correlation.csv"]),
        "ranktest.csv": table_csv(report.ranktest, STATS_COLUMNS["ranktest.csv"]),
        "stats.json": report.to_json(),
    }
