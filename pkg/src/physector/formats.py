"""JSON and CSV file formats.

measurement  {"n_outcomes": J, "n_levels": D, "complete": bool, "coefficients": [[...], ...]}
state        {"n_levels": D, "diag": [...]}
counts       {"n_events": N, "seed": s, "counts": [...]}   (seed optional, -1 if unknown)
report       full ExtractionReport as JSON; per-step CSV for plotting
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .extraction import ExtractionReport, ExtractionStep
from .measurement import COMPLETENESS_TOL, CommutingMeasurement, validate
from .simulate import UNKNOWN_SEED, FrequencyRecord
from .states import DiagonalState, from_diag

__all__ = [
    "FormatError",
    "measurement_to_dict",
    "measurement_from_dict",
    "load_measurement",
    "save_measurement",
    "state_to_dict",
    "state_from_dict",
    "load_state",
    "record_to_dict",
    "record_from_dict",
    "load_record",
    "save_record",
    "report_to_dict",
    "report_from_dict",
    "report_csv",
    "levels_csv",
    "dumps",
    "write_text",
]

STEP_COLUMNS = ("k", "subspace_levels", "mean_b_sub", "std_b_sub", "mean_w", "mean_variance")


class FormatError(ValueError):
    """A file does not follow its schema."""


def dumps(obj) -> str:
    # fixed key order and separators keep report files byte-stable
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc


def _require(d, key, kind):
    if not isinstance(d, dict) or key not in d:
        raise FormatError(f"missing field {key!r} in {kind}")
    return d[key]


def measurement_to_dict(m: CommutingMeasurement) -> dict:
    return {
        "n_outcomes": m.n_outcomes,
        "n_levels": m.n_levels,
        "complete": m.complete,
        "coefficients": m.coefficients.tolist(),
    }


def measurement_from_dict(d) -> CommutingMeasurement:
    coeffs = _require(d, "coefficients", "measurement")
    try:
        c = np.array(coeffs, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"coefficients are not a numeric matrix: {exc}") from exc
    if c.ndim != 2 or c.size == 0:
        raise FormatError(f"coefficients must be a non-empty J x D matrix, got shape {c.shape}")
    for key, expected in (("n_outcomes", c.shape[0]), ("n_levels", c.shape[1])):
        if key in d and int(d[key]) != expected:
            raise FormatError(f"{key}={d[key]} disagrees with coefficient shape {c.shape}")
    m = CommutingMeasurement(c, complete=bool(d.get("complete", False)))
    problems = validate(m)
    if problems:
        raise FormatError("invalid measurement: " + "; ".join(problems[:5]))
    return m


def _measurement_from_csv(text) -> CommutingMeasurement:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(cell.strip() for cell in r)]
    try:
        c = np.array([[float(cell) for cell in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise FormatError(f"non-numeric CSV entry: {exc}") from exc
    if c.ndim != 2 or c.size == 0:
        raise FormatError("CSV measurement must be a rectangular table, one outcome per row")
    complete = bool(np.all(np.abs(c.sum(axis=0) - 1.0) <= COMPLETENESS_TOL))
    m = CommutingMeasurement(c, complete=complete)
    problems = validate(m)
    if problems:
        raise FormatError("invalid measurement: " + "; ".join(problems[:5]))
    return m


def load_measurement(path) -> CommutingMeasurement:
    """Load a measurement from JSON, or from CSV when the suffix is ``.csv``."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        try:
            return _measurement_from_csv(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise FormatError(f"cannot read {path}: {exc}") from exc
    return measurement_from_dict(_read_json(path))


def save_measurement(m: CommutingMeasurement, path) -> None:
    write_text(path, dumps(measurement_to_dict(m)))


def state_to_dict(s: DiagonalState) -> dict:
    return {"n_levels": s.n_levels, "diag": s.diag.tolist()}


def state_from_dict(d) -> DiagonalState:
    diag = _require(d, "diag", "state")
    try:
        s = from_diag(diag)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid state: {exc}") from exc
    if "n_levels" in d and int(d["n_levels"]) != s.n_levels:
        raise FormatError(f"n_levels={d['n_levels']} disagrees with {s.n_levels} diagonal entries")
    return s


def load_state(path) -> DiagonalState:
    return state_from_dict(_read_json(path))


def record_to_dict(r: FrequencyRecord) -> dict:
    return {"n_events": r.n_events, "seed": r.seed, "counts": r.counts.tolist()}


def record_from_dict(d) -> FrequencyRecord:
    counts = _require(d, "counts", "counts file")
    n_events = _require(d, "n_events", "counts file")
    if not isinstance(counts, list) or not all(isinstance(c, int) and not isinstance(c, bool) for c in counts):
        raise FormatError("counts must be a list of integers")
    try:
        return FrequencyRecord(counts, int(float(n_events)), int(d.get("seed", UNKNOWN_SEED)))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid counts file: {exc}") from exc


def load_record(path) -> FrequencyRecord:
    return record_from_dict(_read_json(path))


def save_record(r: FrequencyRecord, path) -> None:
    write_text(path, dumps(record_to_dict(r)))


def report_to_dict(report: ExtractionReport, **extra) -> dict:
    d = {
        "alpha": report.alpha,
        "status": report.status,
        "extracted_sector": None if report.extracted_sector is None else list(report.extracted_sector),
        "d_phys": report.d_phys,
        "order_mode": report.order_mode,
        "sorted_order": list(report.sorted_order),
        "default_order": sorted(report.fov),
        "fov": list(report.fov),
        "hint": report.hint,
        "n_sets": report.n_sets,
        "acceptance_rule": "mean of per-set B_sub >= alpha",
        "warnings": list(report.warnings),
        "steps": [
            {
                "k": s.k,
                "subspace": list(s.subspace),
                "mean_b_sub": s.mean_b_sub,
                "std_b_sub": s.std_b_sub,
                "mean_w": s.mean_w,
                "mean_variance": s.mean_variance,
                "b_sub_per_set": s.b_sub_per_set,
            }
            for s in report.steps
        ],
        "levels": report.level_view(),
    }
    d.update(extra)
    return d


def report_from_dict(d) -> ExtractionReport:
    sector = d.get("extracted_sector")
    return ExtractionReport(
        sorted_order=tuple(d["sorted_order"]),
        hint=list(d["hint"]),
        steps=[
            ExtractionStep(
                k=s["k"],
                subspace=tuple(s["subspace"]),
                mean_b_sub=s["mean_b_sub"],
                std_b_sub=s["std_b_sub"],
                mean_w=s["mean_w"],
                mean_variance=s["mean_variance"],
                b_sub_per_set=list(s.get("b_sub_per_set", [])),
            )
            for s in d["steps"]
        ],
        alpha=d["alpha"],
        extracted_sector=None if sector is None else tuple(sector),
        status=d["status"],
        order_mode=d.get("order_mode", "hint"),
        fov=tuple(d.get("fov", ())),
        n_sets=d.get("n_sets", 0),
        warnings=list(d.get("warnings", [])),
    )


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def report_csv(report: ExtractionReport) -> str:
    """One row per step, levels joined with spaces."""
    rows = [
        (s.k, " ".join(map(str, s.subspace)), repr(s.mean_b_sub), repr(s.std_b_sub), repr(s.mean_w), repr(s.mean_variance))
        for s in report.steps
    ]
    return _csv_text(STEP_COLUMNS, rows)


def levels_csv(report: ExtractionReport) -> str:
    """Per-level view in ascending level order (histogram-style)."""
    rows = [
        (r["level"], r["step"], repr(r["mean_b_sub"]), repr(r["std_b_sub"]), int(r["in_sector"]))
        for r in report.level_view()
    ]
    return _csv_text(("level", "step", "mean_b_sub", "std_b_sub", "in_sector"), rows)
