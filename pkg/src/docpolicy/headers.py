"""Document-Policy header values: serialize, parse and merge.

Values use the structured-field dictionary syntax: ``name=?0`` for a
restricted boolean feature, ``name=<decimal>`` for a parameterized one.
"""
from __future__ import annotations

import re
from decimal import Decimal
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .model import FeatureKind, PolicyError, PolicyFeature, PolicySet, validate_policy_set

DOCUMENT_POLICY = "Document-Policy"
DOCUMENT_POLICY_REPORT_ONLY = "Document-Policy-Report-Only"
PERMISSIONS_POLICY = "Permissions-Policy"

_KEY = re.compile(r"[a-z*][a-z0-9_\-.*]*")
_BARE = re.compile(
    r'\?[01]'                       # boolean
    r'|-?\d{1,15}(?:\.\d{1,3})?'    # integer / decimal
    r'|[A-Za-z*][!#$%&\'*+\-.^_`|~:/\w]*'  # token
    r'|"(?:[^"\\]|\\["\\])*"'       # string
)


class HeaderParseError(PolicyError):
    pass


def format_decimal(value: Decimal) -> str:
    """Canonical decimal text: minimal digits, always one fractional digit
    (``2`` -> ``2.0``, ``0.50`` -> ``0.5``)."""
    value = Decimal(value)
    if not value.is_finite():
        raise PolicyError(f"not a finite decimal: {value}")
    text = format(value.normalize(), "f")
    if "." not in text:
        text += ".0"
    int_part, frac = text.lstrip("-").split(".")
    if len(int_part) > 12 or len(frac) > 3:
        raise PolicyError(f"{value} does not fit a header decimal (12.3 digits)")
    return text


def _item(feature: PolicyFeature) -> str:
    if feature.parameter is None:
        return f"{feature.kind.value}=?0"
    return f"{feature.kind.value}={format_decimal(feature.parameter)}"


def serialize_value(ps: PolicySet) -> str:
    """The header value for ``ps``, items sorted by name; empty if none."""
    validate_policy_set(ps)
    items = [(f.kind.value, _item(f)) for f in ps.features]
    items += [(name, f"{name}={raw}" if raw else name) for name, raw in ps.unknown]
    return ", ".join(text for _, text in sorted(items))


def serialize_headers(ps: PolicySet, report_only: bool = False) -> List[Tuple[str, str]]:
    value = serialize_value(ps)
    if not value:
        return []
    return [(DOCUMENT_POLICY_REPORT_ONLY if report_only else DOCUMENT_POLICY, value)]


def _split_members(value: str) -> List[str]:
    members, buf, in_str, escaped = [], [], False, False
    for c in value:
        if in_str:
            buf.append(c)
            if escaped:
                escaped = False
            elif c == "\\":
                escaped = True
            elif c == '"':
                in_str = False
        elif c == '"':
            in_str = True
            buf.append(c)
        elif c == ",":
            members.append("".join(buf))
            buf = []
        else:
            buf.append(c)
    if in_str:
        raise HeaderParseError(f"unterminated string in {value!r}")
    members.append("".join(buf))
    return members


def split_items(value: str) -> List[Tuple[str, str]]:
    """Split a dictionary header value into ``(key, raw_value)`` pairs.

    ``raw_value`` is everything after ``=`` (parameters included), or
    ``""`` for a bare key. Later duplicates replace earlier ones.
    """
    if not value.strip():
        return []
    out: Dict[str, str] = {}
    for member in _split_members(value):
        member = member.strip(" \t")
        if not member:
            raise HeaderParseError(f"empty member in {value!r}")
        key_m = _KEY.match(member)
        if not key_m:
            raise HeaderParseError(f"bad key in {member!r}")
        key = key_m.group(0)
        rest = member[key_m.end():]
        if rest.startswith("="):
            raw = rest[1:]
            val_m = _BARE.match(raw)
            if not val_m:
                raise HeaderParseError(f"bad value in {member!r}")
            _check_params(raw[val_m.end():], member)
        else:
            raw = ""
            _check_params(rest, member)
        out.pop(key, None)
        out[key] = raw
    return list(out.items())


def _check_params(params: str, member: str) -> None:
    while params:
        if not params.startswith(";"):
            raise HeaderParseError(f"trailing garbage in {member!r}")
        params = params[1:].lstrip(" ")
        key_m = _KEY.match(params)
        if not key_m:
            raise HeaderParseError(f"bad parameter key in {member!r}")
        params = params[key_m.end():]
        if params.startswith("="):
            val_m = _BARE.match(params[1:])
            if not val_m:
                raise HeaderParseError(f"bad parameter value in {member!r}")
            params = params[1 + val_m.end():]


def parse_headers(header_value: str) -> PolicySet:
    """Inverse of :func:`serialize_value`.

    Unknown feature names, and known boolean features left unrestricted
    (``?1``), are kept verbatim in ``PolicySet.unknown``.
    """
    features = []
    unknown = []
    for key, raw in split_items(header_value):
        value = raw.split(";", 1)[0].strip()
        try:
            kind = FeatureKind(key)
        except ValueError:
            unknown.append((key, raw))
            continue
        if kind.parameterized:
            if not re.fullmatch(r"-?\d+(\.\d+)?", value):
                raise HeaderParseError(f"{key} needs a number, got {raw!r}")
            features.append(PolicyFeature(kind, Decimal(value)))
        elif value == "?0":
            features.append(PolicyFeature(kind))
        elif value in ("?1", ""):
            unknown.append((key, raw))
        else:
            raise HeaderParseError(f"{key} needs a boolean, got {raw!r}")
    return validate_policy_set(PolicySet(tuple(features), tuple(unknown)))


def merge_values(existing: Iterable[str], ours: PolicySet) -> str:
    """Combine header values already on a response with ours; our entries
    win per feature, unrelated upstream items survive verbatim."""
    ours_value = serialize_value(ours)
    mine = dict(split_items(ours_value))
    merged: Dict[str, str] = {}
    for value in existing:
        for key, raw in split_items(value):
            merged[key] = raw
    merged.update(mine)
    return ", ".join(f"{k}={v}" if v else k for k, v in sorted(merged.items()))


def serialize_permissions_policy(allowlists: Mapping[str, Sequence[str]]) -> str:
    """``name=(self "https://a.example")`` form; an empty list gives ``name=()``.
    Only used to pass permissions-class features through."""
    parts = []
    for name in sorted(allowlists):
        if not _KEY.fullmatch(name):
            raise PolicyError(f"bad feature name {name!r}")
        members = []
        for origin in allowlists[name]:
            if origin in ("self", "*", "src"):
                members.append(origin)
            else:
                members.append('"' + origin.replace("\\", "\\\\").replace('"', '\\"') + '"')
        parts.append(f"{name}=({' '.join(members)})")
    return ", ".join(parts)


def parse_permissions_policy(value: str) -> Dict[str, List[str]]:
    out: Dict[str, List[str]] = {}
    for member in _split_members(value):
        member = member.strip()
        if not member:
            continue
        name, sep, rest = member.partition("=")
        if not sep or not _KEY.fullmatch(name.strip()):
            raise HeaderParseError(f"bad permissions member {member!r}")
        rest = rest.split(";", 1)[0].strip()
        if rest.startswith("(") and rest.endswith(")"):
            tokens = re.findall(r'"(?:[^"\\]|\\.)*"|[^\s"]+', rest[1:-1])
        else:
            tokens = [rest]
        out[name.strip()] = [
            re.sub(r'\\(.)', r'\1', t[1:-1]) if t.startswith('"') else t for t in tokens
        ]
    return out
