"""
Report I/O Module.

This module writes and reads feature tables and writes SMD reports. Both come
in a delimited (CSV) and a structured (JSON) variant with frozen column names.
Numbers are written locale-independently with six significant digits.
"""
import io
import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError

from models.feature_model import FEATURE_NAMES, FeatureRow, FeatureVector
from models.smd_model import SmdRow
from processing.statistics import DIMENSIONALITY_ORDER
from utils.config import FEATURE_FLOAT_FORMAT, FEATURE_PRECISION
from utils.exceptions import DataValidationError, ParseError, SchemaError
from utils.record_io import Sink, Source, open_sink, read_source_text

logger = logging.getLogger(__name__)

FORMATS = ("delimited", "structured")
KEY_COLUMNS = ["subject_id", "group", "task", "dimensionality", "repetition"]
FEATURE_TABLE_COLUMNS = KEY_COLUMNS + list(FEATURE_NAMES)
SMD_STAT_COLUMNS = ["hc_mean", "hc_sd", "hc_n", "pd_mean", "pd_sd", "pd_n", "smd", "magnitude"]
SMD_REPORT_COLUMNS = ["task", "feature"] + [
    f"{dimensionality.value.lower()}_{column}"
    for dimensionality in DIMENSIONALITY_ORDER
    for column in SMD_STAT_COLUMNS
]


def _round(value: float) -> float:
    return float(f"{value:.{FEATURE_PRECISION}g}")


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise DataValidationError(f"Unknown format '{fmt}', expected one of {FORMATS}")


def _write_frame(frame: pd.DataFrame, sink: Sink) -> None:
    with open_sink(sink) as handle:
        frame.to_csv(handle, index=False, float_format=FEATURE_FLOAT_FORMAT, lineterminator="\n")


def _write_json(document: Dict[str, Any], sink: Sink) -> None:
    with open_sink(sink) as handle:
        handle.write(json.dumps(document, indent=2) + "\n")


def write_feature_table(rows: Sequence[FeatureRow], sink: Sink, fmt: str = "delimited") -> None:
    """
    Write one line per (subject, task, dimensionality, repetition).

    Args:
        rows: Feature rows in output order
        sink: Path or text stream
        fmt: "delimited" (CSV) or "structured" (JSON with a columns list and row objects)
    """
    _check_format(fmt)
    records = [row.as_flat_dict() for row in rows]
    if fmt == "delimited":
        _write_frame(pd.DataFrame(records, columns=FEATURE_TABLE_COLUMNS), sink)
    else:
        for record in records:
            for name in FEATURE_NAMES:
                record[name] = _round(record[name])
        _write_json({"columns": FEATURE_TABLE_COLUMNS, "rows": records}, sink)
    logger.info(f"Wrote feature table with {len(records)} rows")


def _detect_format(text: str) -> str:
    return "structured" if text.lstrip().startswith("{") else "delimited"


def parse_feature_table(source: Source, fmt: Optional[str] = None) -> List[FeatureRow]:
    """
    Read a feature table written by `write_feature_table`.

    Args:
        source: Path, bytes or text stream
        fmt: Format; detected from the first character when omitted

    Raises:
        SchemaError: If a column is missing
        DataValidationError: If a row violates the feature invariants
    """
    text = read_source_text(source)
    fmt = fmt or _detect_format(text)
    _check_format(fmt)

    if fmt == "structured":
        try:
            document = json.loads(text)
        except (ValueError, RecursionError) as e:
            raise ParseError(f"invalid JSON feature table: {e}")
        if not isinstance(document, dict) or not isinstance(document.get("rows"), list):
            raise SchemaError("structured feature table must hold a 'rows' list")
        frame = pd.DataFrame(document["rows"])
        if frame.empty:
            return []
    else:
        if not text.strip():
            raise SchemaError("feature table has no header")
        try:
            frame = pd.read_csv(io.StringIO(text), dtype={"subject_id": str})
        except (pd.errors.ParserError, pd.errors.EmptyDataError, ValueError) as e:
            raise ParseError(f"invalid feature table: {e}")

    missing = [c for c in FEATURE_TABLE_COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaError(f"feature table lacks columns: {', '.join(missing)}")

    rows = []
    for position, record in enumerate(frame[FEATURE_TABLE_COLUMNS].to_dict("records")):
        try:
            rows.append(FeatureRow(
                subject_id=str(record["subject_id"]),
                group=record["group"],
                task=record["task"],
                dimensionality=record["dimensionality"],
                repetition=record["repetition"],
                features=FeatureVector(**{name: record[name] for name in FEATURE_NAMES}),
            ))
        except (ValidationError, TypeError) as e:
            raise DataValidationError(f"feature row {position + 1}: {e}")
    logger.info(f"Read feature table with {len(rows)} rows")
    return rows


def smd_report_records(rows: Sequence[SmdRow]) -> List[Dict[str, Any]]:
    """One record per (task, feature), 3D and 2D statistics side by side."""
    records: Dict[tuple, Dict[str, Any]] = {}
    for row in rows:
        record = records.setdefault((row.task, row.feature), {"task": row.task.value, "feature": row.feature})
        prefix = row.dimensionality.value.lower()
        record.update({
            f"{prefix}_hc_mean": row.hc_mean,
            f"{prefix}_hc_sd": row.hc_sd,
            f"{prefix}_hc_n": row.hc_n,
            f"{prefix}_pd_mean": row.pd_mean,
            f"{prefix}_pd_sd": row.pd_sd,
            f"{prefix}_pd_n": row.pd_n,
            f"{prefix}_smd": row.smd,
            f"{prefix}_magnitude": row.magnitude.value,
        })
    return list(records.values())


def write_smd_report(rows: Sequence[SmdRow], sink: Sink, fmt: str = "delimited") -> None:
    """
    Write a cohort report mirroring the published table layout.

    Delimited output has one line per (task, feature) with 3D and 2D columns
    side by side; a dimensionality that was not analysed leaves its columns
    empty. Structured output nests the same values per dimensionality.
    """
    _check_format(fmt)
    records = smd_report_records(rows)
    if fmt == "delimited":
        frame = pd.DataFrame(records, columns=SMD_REPORT_COLUMNS)
        for dimensionality in DIMENSIONALITY_ORDER:
            for column in ("hc_n", "pd_n"):
                name = f"{dimensionality.value.lower()}_{column}"
                frame[name] = frame[name].astype("Int64")
        _write_frame(frame, sink)
    else:
        nested = []
        for record in records:
            entry: Dict[str, Any] = {"task": record["task"], "feature": record["feature"]}
            for dimensionality in DIMENSIONALITY_ORDER:
                prefix = dimensionality.value.lower()
                if f"{prefix}_smd" not in record:
                    continue
                entry[dimensionality.value] = {
                    "hc": {
                        "mean": _round(record[f"{prefix}_hc_mean"]),
                        "sd": _round(record[f"{prefix}_hc_sd"]),
                        "n": record[f"{prefix}_hc_n"],
                    },
                    "pd": {
                        "mean": _round(record[f"{prefix}_pd_mean"]),
                        "sd": _round(record[f"{prefix}_pd_sd"]),
                        "n": record[f"{prefix}_pd_n"],
                    },
                    "smd": _round(record[f"{prefix}_smd"]),
                    "magnitude": record[f"{prefix}_magnitude"],
                }
            nested.append(entry)
        _write_json({"rows": nested}, sink)
    logger.info(f"Wrote SMD report with {len(records)} (task, feature) lines")


def write_table(frame: pd.DataFrame, sink: Sink, fmt: str = "delimited") -> None:
    """Write an arbitrary result table, used for the published-table recomputation."""
    _check_format(fmt)
    if fmt == "delimited":
        _write_frame(frame, sink)
    else:
        records = json.loads(frame.to_json(orient="records", double_precision=FEATURE_PRECISION + 4))
        _write_json({"rows": records}, sink)
