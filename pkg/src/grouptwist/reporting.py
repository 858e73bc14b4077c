"""Structured report documents (JSON) and summary CSV output.

Volatile run metadata (timestamps, timing, worker count) lives under the
single ``meta`` key; scrubbing drops that key, and scrubbed reports are
byte-identical across worker counts.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Any

from .splitting import format_fraction
from .survey import StructureReport, SurveyReport, ThresholdReport


def to_jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return format_fraction(value)
    if is_dataclass(value) and not isinstance(value, type):
        return {k: to_jsonable(v) for k, v in asdict(value).items()}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "tolist"):
        return value.tolist()
    return value


def survey_report_document(report: SurveyReport) -> dict:
    return {
        "kind": "survey",
        "n": report.n,
        "class_restriction": report.class_restriction,
        "max_order": report.max_order,
        "catalog_hash": report.catalog_hash,
        "frontier": to_jsonable(report.frontier),
        "groups": to_jsonable(report.groups),
        "meta": dict(report.meta),
    }


def threshold_report_document(report: ThresholdReport) -> dict:
    doc = to_jsonable(report)
    doc["kind"] = "threshold"
    doc["ok"] = report.ok
    doc.setdefault("meta", {})
    return doc


def structure_report_document(report: StructureReport) -> dict:
    doc = to_jsonable(report)
    doc["kind"] = "structure"
    doc["ok"] = report.ok
    doc.setdefault("meta", {})
    return doc


def scrubbed_bytes(document: dict) -> bytes:
    """Canonical bytes of a report with volatile metadata removed."""
    clean = {k: v for k, v in document.items() if k != "meta"}
    return json.dumps(clean, sort_keys=True, indent=1).encode()


def dump_report(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=1)


def survey_csv(report: SurveyReport) -> str:
    """Summary CSV: one row per (group, automorphism) pair."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["group", "order", "aut_order", "density", "coverage"])
    for gs in report.groups:
        for pair in gs.pairs:
            writer.writerow([gs.spec, gs.order, pair.aut_order,
                             format_fraction(pair.density), gs.coverage])
    return buf.getvalue()
