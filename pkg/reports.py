#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Reports Module
--------------
JSON and CSV serialisation of laboratory results.

JSON documents carry "schema_version"; CSV files carry it as their first
column. Complex points are written as [x, y] pairs and non-finite values
as null (JSON) or an empty cell (CSV).
"""

import csv
import dataclasses
import io
import json
import logging
import math
import sys
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from geometry.geom_core import AxisEllipse, CirclePencil, Line, Polygon, Tolerances
from harmonic.harmonic_family import BrocardObjects, FamilySpec, PolygonSnapshot
from harmonic.invariants import InvariantReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
SWEEP_COLUMNS = ("schema_version", "quantity", "t", "value", "closed_form", "abs_dev")


def fmt(x: Optional[float]) -> str:
    """17 significant digits, empty for None and non-finite values."""
    if x is None or not math.isfinite(x):
        return ""
    return format(float(x), ".17g")


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Polygon):
        return [to_jsonable(v) for v in obj.vertices]
    if isinstance(obj, Line):
        return {"point": to_jsonable(obj.point), "direction": to_jsonable(obj.direction)}
    if isinstance(obj, AxisEllipse):
        return {"center": to_jsonable(obj.center), "a": obj.a, "b": obj.b,
                "foci": to_jsonable(list(obj.foci)), "eccentricity": obj.eccentricity}
    if isinstance(obj, CirclePencil):
        return {"l1": to_jsonable(obj.l1), "l2": to_jsonable(obj.l2), "radical_axis": to_jsonable(obj.radical_axis)}
    if isinstance(obj, InvariantReport):
        return report_dict(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def report_dict(report: InvariantReport, with_samples: bool = False) -> Dict[str, Any]:
    data = {
        "quantity": str(report.quantity),
        "verdict": report.verdict.value,
        "closed_form": to_jsonable(report.closed_form),
        "mean": to_jsonable(report.mean),
        "max_abs_dev": to_jsonable(report.max_abs_dev),
        "relative_dev": to_jsonable(report.relative_dev),
        "closed_form_dev": to_jsonable(report.closed_form_dev),
        "closed_form_ok": report.closed_form_ok,
        "samples": len(report.samples),
    }
    if report.notes:
        data["notes"] = list(report.notes)
    if with_samples:
        data["t"] = to_jsonable(report.ts)
        data["values"] = to_jsonable(report.samples)
    return data


def family_dict(spec: FamilySpec) -> Dict[str, Any]:
    return {"n": spec.n, "frame": spec.frame.value, "param": spec.param, "x0": spec.x0, "alpha": spec.alpha}


def construct_payload(spec: FamilySpec, snap: PolygonSnapshot, objects: BrocardObjects) -> Dict[str, Any]:
    return {
        "family": family_dict(spec),
        "t": snap.t,
        "vertices": to_jsonable(snap.polygon),
        "sidelengths": to_jsonable(snap.sidelengths),
        "angles": to_jsonable(snap.angles),
        "area": snap.area,
        "perimeter": snap.perimeter,
        "brocard": to_jsonable(objects),
    }


def document(command: str, payload: Dict[str, Any], tol: Optional[Tolerances] = None) -> Dict[str, Any]:
    doc = {"schema_version": SCHEMA_VERSION, "command": command}
    if tol is not None:
        doc["tolerances"] = to_jsonable(tol)
    doc.update(to_jsonable(payload))
    return doc


def dump_json(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def sweep_rows(reports: Iterable[InvariantReport]) -> List[List[str]]:
    """
    One row per (quantity, t); abs_dev is measured from the closed form
    when there is one and from the sweep mean otherwise.
    """
    rows = []
    for report in reports:
        reference = report.closed_form if report.closed_form is not None else report.mean
        for t, value in zip(report.ts, report.samples):
            rows.append([
                str(SCHEMA_VERSION),
                str(report.quantity),
                fmt(t),
                fmt(value),
                fmt(report.closed_form),
                fmt(abs(value - reference)),
            ])
    return rows


def flatten(payload: Any, prefix: str = "") -> List[List[str]]:
    """key/value rows for documents that are not sweeps."""
    rows = []
    data = to_jsonable(payload)
    if isinstance(data, dict):
        for k, v in data.items():
            rows.extend(flatten(v, f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(data, list):
        for i, v in enumerate(data):
            rows.extend(flatten(v, f"{prefix}[{i}]"))
    else:
        if isinstance(data, float):
            text = fmt(data)
        elif data is None:
            text = ""
        else:
            text = str(data)
        rows.append([str(SCHEMA_VERSION), prefix, text])
    return rows


def dump_csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def emit(text: str, out: Optional[str], stream: Optional[TextIO] = None) -> None:
    """Write to a file, or to the stream (stdout by default) when out is None."""
    if out:
        with open(out, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Wrote report to {out}")
    else:
        (stream or sys.stdout).write(text)
