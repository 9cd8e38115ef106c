"""Audit pages for QoE-impacting Document Policy violations, simulate
enforcement, and inject policy headers through a proxy."""

from .model import (
    AnimationRule,
    AuditReport,
    EncodingClass,
    Estimate,
    FeatureKind,
    FontDisplay,
    FontFaceRule,
    MediaElement,
    MediaKind,
    NetworkProfile,
    PageSnapshot,
    PolicyError,
    PolicyFeature,
    PolicySet,
    ScriptElement,
    SLOW_4G,
    ViewportConfig,
    Violation,
    default_policy_set,
    validate_policy_set,
)
from .extract import ResourceRecord, extract_snapshot
from .fetch import FetchConfig, FetchLimiter, Unreachable, fetch_page
from .layout import SizingMode, container_width, estimate_cls, layout_pass
from .detect import audit
from .enforce import enforce, estimate_timeline, fetch_time, report
from .headers import parse_headers, serialize_headers
from .synth import generate_synthetic

__version__ = "0.1.0"

__all__ = [
    "AnimationRule",
    "AuditReport",
    "EncodingClass",
    "Estimate",
    "FeatureKind",
    "FetchConfig",
    "FetchLimiter",
    "FontDisplay",
    "FontFaceRule",
    "MediaElement",
    "MediaKind",
    "NetworkProfile",
    "PageSnapshot",
    "PolicyError",
    "PolicyFeature",
    "PolicySet",
    "ResourceRecord",
    "SLOW_4G",
    "ScriptElement",
    "SizingMode",
    "Unreachable",
    "ViewportConfig",
    "Violation",
    "audit",
    "container_width",
    "default_policy_set",
    "enforce",
    "estimate_cls",
    "estimate_timeline",
    "extract_snapshot",
    "fetch_page",
    "fetch_time",
    "generate_synthetic",
    "layout_pass",
    "parse_headers",
    "report",
    "serialize_headers",
    "validate_policy_set",
]
