"""Plain-dict forms of the model types for JSON output.

Floats are rounded to 9 decimal places so that outputs are byte-stable.
"""
from __future__ import annotations

import enum
import json
from dataclasses import fields, is_dataclass
from decimal import Decimal
from typing import Any

from .headers import serialize_value
from .model import AuditReport, Estimate, PolicySet

FLOAT_DIGITS = 9


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round(obj, FLOAT_DIGITS)
    if isinstance(obj, Decimal):
        return float(obj)
    if isinstance(obj, PolicySet):
        return serialize_value(obj)
    if isinstance(obj, Estimate):
        return {"pre": to_jsonable(obj.pre), "post": to_jsonable(obj.post)}
    if isinstance(obj, AuditReport):
        return report_dict(obj)
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_dict(r: AuditReport) -> dict:
    return {
        "url": r.url,
        "policy": serialize_value(r.policy),
        "violations": [to_jsonable(v) for v in r.violations],
        "counts_per_feature": {k.value: c for k, c in r.counts_per_feature.items()},
        "total_violations": r.total_violations,
        "bytes_saved_estimate": r.bytes_saved_estimate,
        "first_render_estimate_s": to_jsonable(r.first_render_estimate_s),
        "lcp_estimate_s": to_jsonable(r.lcp_estimate_s),
        "cls_estimate": to_jsonable(r.cls_estimate),
    }


def dumps(obj: Any) -> str:
    """Key-sorted, indented JSON with a trailing newline."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"
