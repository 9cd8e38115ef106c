"""Value types shared by every other module.

Everything here is an immutable dataclass; nothing does I/O.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

Number = Union[int, float, str, Decimal]

# Numeric comparisons against rational parameters use this slack.
TOLERANCE = 1e-9


class PolicyError(ValueError):
    """Raised for an invalid PolicySet or an unparseable policy header."""


class FeatureKind(str, enum.Enum):
    UNSIZED_MEDIA = "unsized-media"
    OVERSIZED_IMAGES = "oversized-images"
    LOSSY_IMAGES_MAX_BPP = "lossy-images-max-bpp"
    LOSSLESS_IMAGES_MAX_BPP = "lossless-images-max-bpp"
    LOSSLESS_IMAGES_STRICT_MAX_BPP = "lossless-images-strict-max-bpp"
    FONT_DISPLAY_LATE_SWAP = "font-display-late-swap"
    LAYOUT_ANIMATIONS = "layout-animations"
    BLOCKING_SCRIPT = "blocking-script"

    def __str__(self) -> str:
        return self.value

    @property
    def parameterized(self) -> bool:
        return self in DEFAULT_PARAMETERS

    @property
    def is_image_check(self) -> bool:
        return self in IMAGE_CHECK_ORDER


BPP_KINDS = (
    FeatureKind.LOSSY_IMAGES_MAX_BPP,
    FeatureKind.LOSSLESS_IMAGES_MAX_BPP,
    FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP,
)

# First-trigger precedence for media elements; at most one of these is
# reported per element.
IMAGE_CHECK_ORDER = (
    FeatureKind.OVERSIZED_IMAGES,
    FeatureKind.LOSSY_IMAGES_MAX_BPP,
    FeatureKind.LOSSLESS_IMAGES_MAX_BPP,
    FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP,
    FeatureKind.UNSIZED_MEDIA,
)

DEFAULT_PARAMETERS: Mapping[FeatureKind, Decimal] = {
    FeatureKind.OVERSIZED_IMAGES: Decimal("2.0"),
    FeatureKind.LOSSY_IMAGES_MAX_BPP: Decimal("0.5"),
    FeatureKind.LOSSLESS_IMAGES_MAX_BPP: Decimal("1.0"),
    FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP: Decimal("1.0"),
}


def to_decimal(value: Number) -> Decimal:
    if isinstance(value, Decimal):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise PolicyError(f"parameter must be finite, got {value!r}")
        value = repr(value)
    try:
        return Decimal(str(value).strip())
    except InvalidOperation:
        raise PolicyError(f"not a decimal number: {value!r}") from None


@dataclass(frozen=True)
class PolicyFeature:
    """One enabled feature. Parameterized kinds get their default when
    ``parameter`` is omitted; boolean kinds must not carry one."""

    kind: FeatureKind
    parameter: Optional[Decimal] = None

    def __post_init__(self):
        kind = FeatureKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind.parameterized:
            value = DEFAULT_PARAMETERS[kind] if self.parameter is None else self.parameter
            object.__setattr__(self, "parameter", to_decimal(value))
        elif self.parameter is not None:
            raise PolicyError(f"{kind} takes no parameter")

    @property
    def value(self) -> Optional[float]:
        return None if self.parameter is None else float(self.parameter)


@dataclass(frozen=True)
class PolicySet:
    """Features keyed by kind, plus unknown header items kept verbatim.

    ``features`` is stored sorted so equality does not depend on insertion
    order. Duplicates are kept so that :func:`validate_policy_set` can
    report them.
    """

    features: Tuple[PolicyFeature, ...] = ()
    unknown: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        feats = tuple(sorted(self.features, key=lambda f: (f.kind.value, f.parameter or 0)))
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "unknown", tuple(sorted(tuple(u) for u in self.unknown)))

    @classmethod
    def of(cls, *items: Union[PolicyFeature, FeatureKind, str, Tuple[str, Number]]) -> "PolicySet":
        """Build a set from kinds, ``(kind, parameter)`` pairs or features."""
        feats = []
        for item in items:
            if isinstance(item, PolicyFeature):
                feats.append(item)
            elif isinstance(item, tuple):
                kind, param = item
                feats.append(PolicyFeature(FeatureKind(kind), to_decimal(param)))
            else:
                feats.append(PolicyFeature(FeatureKind(item)))
        return cls(tuple(feats))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Union[FeatureKind, str], Optional[Number]]) -> "PolicySet":
        return cls(tuple(
            PolicyFeature(FeatureKind(k), None if v is None else to_decimal(v))
            for k, v in mapping.items()
        ))

    def __contains__(self, kind) -> bool:
        return any(f.kind == kind for f in self.features)

    def __iter__(self) -> Iterator[PolicyFeature]:
        return iter(self.features)

    def __len__(self) -> int:
        return len(self.features)

    def get(self, kind) -> Optional[PolicyFeature]:
        for f in self.features:
            if f.kind == kind:
                return f
        return None

    def param(self, kind) -> Optional[float]:
        f = self.get(kind)
        return None if f is None else f.value

    @property
    def kinds(self) -> Tuple[FeatureKind, ...]:
        return tuple(f.kind for f in self.features)

    def with_feature(self, feature: PolicyFeature) -> "PolicySet":
        rest = tuple(f for f in self.features if f.kind != feature.kind)
        return PolicySet(rest + (feature,), self.unknown)


def default_policy_set() -> PolicySet:
    """All eight features enabled with default parameters."""
    return PolicySet.of(*FeatureKind)


def validate_policy_set(ps: PolicySet) -> PolicySet:
    """Return ``ps`` unchanged if it is well formed, else raise PolicyError."""
    seen = set()
    for f in ps.features:
        if f.kind in seen:
            raise PolicyError(f"duplicate feature {f.kind}")
        seen.add(f.kind)
        if f.kind.parameterized:
            if f.parameter is None or not f.parameter.is_finite() or f.parameter <= 0:
                raise PolicyError(f"{f.kind} parameter must be > 0, got {f.parameter}")
    strict = ps.get(FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP)
    loose = ps.get(FeatureKind.LOSSLESS_IMAGES_MAX_BPP)
    if strict is not None and loose is not None and strict.parameter > loose.parameter:
        raise PolicyError(
            f"lossless-images-strict-max-bpp ({strict.parameter}) exceeds "
            f"lossless-images-max-bpp ({loose.parameter})"
        )
    return ps


@dataclass(frozen=True)
class ViewportConfig:
    # 360x640 @3x approximates a Moto G4 class phone.
    width_css_px: int = 360
    height_css_px: int = 640
    device_pixel_ratio: float = 3.0

    def __post_init__(self):
        if self.width_css_px <= 0 or self.height_css_px <= 0 or self.device_pixel_ratio <= 0:
            raise ValueError(f"viewport dimensions must be positive: {self}")

    @property
    def area(self) -> float:
        return float(self.width_css_px * self.height_css_px)


@dataclass(frozen=True)
class NetworkProfile:
    rtt_ms: float = 150.0
    downlink_kbps: float = 1600.0
    uplink_kbps: float = 750.0

    def __post_init__(self):
        if self.rtt_ms < 0:
            raise ValueError("rtt_ms must be non-negative")
        if self.downlink_kbps <= 0 or self.uplink_kbps <= 0:
            raise ValueError("throughput must be positive")


SLOW_4G = NetworkProfile(rtt_ms=150.0, downlink_kbps=1600.0, uplink_kbps=750.0)


class MediaKind(str, enum.Enum):
    IMAGE = "image"
    VIDEO = "video"


class EncodingClass(str, enum.Enum):
    LOSSY = "lossy"
    LOSSLESS = "lossless"
    UNKNOWN = "unknown"


class FontDisplay(str, enum.Enum):
    AUTO = "auto"
    BLOCK = "block"
    SWAP = "swap"
    FALLBACK = "fallback"
    OPTIONAL = "optional"


class AnimationMechanism(str, enum.Enum):
    KEYFRAMES = "keyframes"
    TRANSITION = "transition"


class ElementClass(str, enum.Enum):
    MEDIA = "media"
    SCRIPT = "script"
    FONT = "font"
    ANIMATION = "animation"


@dataclass(frozen=True)
class MediaElement:
    id: int
    media_kind: MediaKind = MediaKind.IMAGE
    declared_width_css_px: Optional[int] = None
    declared_height_css_px: Optional[int] = None
    natural_width_px: Optional[int] = None
    natural_height_px: Optional[int] = None
    encoded_bytes: Optional[int] = None
    encoding_class: EncodingClass = EncodingClass.UNKNOWN
    source_url: str = ""
    # Set by enforcement when the image was swapped for a placeholder box.
    placeholder: bool = False

    def __post_init__(self):
        object.__setattr__(self, "media_kind", MediaKind(self.media_kind))
        object.__setattr__(self, "encoding_class", EncodingClass(self.encoding_class))
        if (self.natural_width_px is None) != (self.natural_height_px is None):
            raise ValueError("natural width and height must be given together")
        if self.encoded_bytes is None and self.encoding_class is not EncodingClass.UNKNOWN:
            raise ValueError("encoding_class requires encoded_bytes")

    @property
    def is_sized(self) -> bool:
        return self.declared_width_css_px is not None and self.declared_height_css_px is not None

    @property
    def has_natural_size(self) -> bool:
        return self.natural_width_px is not None


@dataclass(frozen=True)
class ScriptElement:
    id: int
    external: bool = False
    source_url: Optional[str] = None
    has_async: bool = False
    has_defer: bool = False
    is_module: bool = False
    encoded_bytes: Optional[int] = None

    def __post_init__(self):
        if self.external != (self.source_url is not None):
            raise ValueError("source_url must be present iff the script is external")


@dataclass(frozen=True)
class FontFaceRule:
    family: str
    source_url: str = ""
    font_display: FontDisplay = FontDisplay.AUTO
    encoded_bytes: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "font_display", FontDisplay(self.font_display))


@dataclass(frozen=True)
class AnimationRule:
    selector: str
    animated_properties: frozenset
    mechanism: AnimationMechanism = AnimationMechanism.KEYFRAMES
    neutralized: bool = False

    def __post_init__(self):
        props = frozenset(self.animated_properties)
        if not props:
            raise ValueError("animated_properties must be non-empty")
        object.__setattr__(self, "animated_properties", props)
        object.__setattr__(self, "mechanism", AnimationMechanism(self.mechanism))


# Marker left on a neutralized animation rule in place of its properties.
NO_MOTION = frozenset({"none"})


@dataclass(frozen=True)
class PageSnapshot:
    url: str = ""
    html_bytes: int = 0
    media: Tuple[MediaElement, ...] = ()
    scripts: Tuple[ScriptElement, ...] = ()
    fonts: Tuple[FontFaceRule, ...] = ()
    animations: Tuple[AnimationRule, ...] = ()
    diagnostics: Tuple[Tuple[str, int], ...] = ()

    def __post_init__(self):
        for name in ("media", "scripts", "fonts", "animations"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        diag = self.diagnostics
        if isinstance(diag, Mapping):
            diag = diag.items()
        object.__setattr__(self, "diagnostics", tuple(sorted((k, int(v)) for k, v in diag if v)))
        for name in ("media", "scripts"):
            ids = [e.id for e in getattr(self, name)]
            if any(b <= a for a, b in zip(ids, ids[1:])):
                raise ValueError(f"{name} ids must be strictly increasing")

    def media_by_id(self, media_id: int) -> MediaElement:
        for m in self.media:
            if m.id == media_id:
                return m
        raise KeyError(f"no media element with id {media_id}")

    def diagnostic(self, name: str) -> int:
        return dict(self.diagnostics).get(name, 0)


@dataclass(frozen=True)
class Violation:
    feature_kind: FeatureKind
    element_id: int
    element_class: ElementClass
    measured: Optional[float] = None
    threshold: Optional[float] = None
    above_fold: bool = False

    def __post_init__(self):
        object.__setattr__(self, "feature_kind", FeatureKind(self.feature_kind))
        object.__setattr__(self, "element_class", ElementClass(self.element_class))
        needs_pair = self.feature_kind in (FeatureKind.OVERSIZED_IMAGES,) + BPP_KINDS
        has_pair = self.measured is not None and self.threshold is not None
        if needs_pair != has_pair or (self.measured is None) != (self.threshold is None):
            raise ValueError(f"measured/threshold pairing invalid for {self.feature_kind}")


@dataclass(frozen=True)
class Estimate:
    """A pre/post enforcement pair."""

    pre: float
    post: float

    @property
    def delta(self) -> float:
        return self.pre - self.post


@dataclass(frozen=True)
class AuditReport:
    url: str
    violations: Tuple[Violation, ...]
    counts_per_feature: Mapping[FeatureKind, int]
    bytes_saved_estimate: int
    first_render_estimate_s: Estimate
    lcp_estimate_s: Estimate
    cls_estimate: Estimate
    policy: PolicySet = field(default_factory=PolicySet)

    @property
    def total_violations(self) -> int:
        return len(self.violations)


def count_by_kind(violations: Iterable[Violation]) -> dict:
    counts = {k: 0 for k in FeatureKind}
    for v in violations:
        counts[v.feature_kind] += 1
    return counts
