"""Policy violation detectors with first-trigger counting for media."""
from __future__ import annotations

from typing import List, Optional, Tuple

from .layout import above_fold_ids, container_width
from .model import (
    TOLERANCE,
    AnimationRule,
    ElementClass,
    EncodingClass,
    FeatureKind,
    FontDisplay,
    FontFaceRule,
    IMAGE_CHECK_ORDER,
    MediaElement,
    MediaKind,
    PageSnapshot,
    PolicySet,
    ScriptElement,
    ViewportConfig,
    Violation,
)

# Bytes of slack granted to lossless-images-max-bpp (not to the strict form).
LOSSLESS_ALLOWANCE_BYTES = 10240

LATE_SWAP_DISPLAYS = frozenset({FontDisplay.AUTO, FontDisplay.BLOCK, FontDisplay.SWAP})

LAYOUT_PROPERTIES = frozenset({
    "width", "height", "top", "left", "right", "bottom", "inset",
    "inset-block", "inset-inline", "inset-block-start", "inset-block-end",
    "inset-inline-start", "inset-inline-end",
    "border-width", "border-top-width", "border-right-width",
    "border-bottom-width", "border-left-width",
    "flex-basis", "font-size",
    "all",  # `transition: all` covers every layout property
})

Measurement = Tuple[float, float]


def _is_layout_property(prop: str) -> bool:
    return prop in LAYOUT_PROPERTIES or prop.startswith(("margin", "padding"))


def check_oversized(m: MediaElement, ratio: float, container_css_w: float,
                    vp: ViewportConfig) -> Optional[Measurement]:
    """``(measured, threshold)`` when the image is wider (or, if it declares
    a height, taller) than its box times DPR times ``ratio``."""
    if m.media_kind is not MediaKind.IMAGE or m.placeholder or not m.has_natural_size:
        return None
    threshold = container_css_w * vp.device_pixel_ratio * ratio
    if m.natural_width_px > threshold + TOLERANCE:
        return float(m.natural_width_px), threshold
    if m.declared_height_css_px is not None:
        h_threshold = m.declared_height_css_px * vp.device_pixel_ratio * ratio
        if m.natural_height_px > h_threshold + TOLERANCE:
            return float(m.natural_height_px), h_threshold
    return None


def bits_per_pixel(m: MediaElement, allowance: int = 0) -> Optional[float]:
    if not m.has_natural_size or m.encoded_bytes is None:
        return None
    pixels = m.natural_width_px * m.natural_height_px
    if pixels <= 0:
        return None
    return max(0, m.encoded_bytes - allowance) * 8 / pixels


def check_bpp(m: MediaElement, feature: FeatureKind, max_bpp: float,
              lossless_allowance: int = LOSSLESS_ALLOWANCE_BYTES) -> Optional[Measurement]:
    feature = FeatureKind(feature)
    if m.media_kind is not MediaKind.IMAGE or m.placeholder:
        return None
    wanted = EncodingClass.LOSSY if feature is FeatureKind.LOSSY_IMAGES_MAX_BPP else EncodingClass.LOSSLESS
    if m.encoding_class is not wanted:
        return None
    allowance = lossless_allowance if feature is FeatureKind.LOSSLESS_IMAGES_MAX_BPP else 0
    measured = bits_per_pixel(m, allowance)
    if measured is None or measured <= max_bpp + TOLERANCE:
        return None
    return measured, float(max_bpp)


def check_unsized(m: MediaElement) -> bool:
    return not m.is_sized


def check_blocking_script(s: ScriptElement, include_inline: bool = False) -> bool:
    if not s.external and not include_inline:
        return False
    return not (s.has_async or s.has_defer or s.is_module)


def check_font_late_swap(f: FontFaceRule) -> bool:
    return f.font_display in LATE_SWAP_DISPLAYS


def check_layout_animation(a: AnimationRule) -> bool:
    return any(_is_layout_property(p) for p in a.animated_properties)


def media_trigger(m: MediaElement, ps: PolicySet, container_w: float, vp: ViewportConfig,
                  lossless_allowance: int = LOSSLESS_ALLOWANCE_BYTES,
                  first_only: bool = True) -> List[Tuple[FeatureKind, Optional[Measurement]]]:
    """Image-class checks that fire for ``m``, in precedence order.

    With ``first_only`` the list holds at most one entry.
    """
    hits = []
    for kind in IMAGE_CHECK_ORDER:
        if kind not in ps:
            continue
        if kind is FeatureKind.OVERSIZED_IMAGES:
            hit = check_oversized(m, ps.param(kind), container_w, vp)
        elif kind is FeatureKind.UNSIZED_MEDIA:
            hit = () if check_unsized(m) else None
        else:
            hit = check_bpp(m, kind, ps.param(kind), lossless_allowance)
        if hit is not None:
            hits.append((kind, hit or None))
            if first_only:
                break
    return hits


def audit(snapshot: PageSnapshot, ps: PolicySet, vp: Optional[ViewportConfig] = None, *,
          include_inline_scripts: bool = False,
          lossless_allowance: int = LOSSLESS_ALLOWANCE_BYTES) -> List[Violation]:
    """Violations of ``ps`` in ``snapshot``.

    Each media element contributes at most one image-class violation (the
    first check to trigger in precedence order). Script, font and
    animation checks are counted per element.
    """
    vp = vp or ViewportConfig()
    out: List[Violation] = []
    if not ps.features:
        return out
    fold = above_fold_ids(snapshot, vp)
    for m in snapshot.media:
        for kind, hit in media_trigger(m, ps, container_width(snapshot, vp, m.id), vp, lossless_allowance):
            measured, threshold = hit if hit else (None, None)
            out.append(Violation(kind, m.id, ElementClass.MEDIA, measured, threshold, fold.get(m.id, False)))

    # Scripts, fonts and animations have no box, so above_fold stays False.
    if FeatureKind.BLOCKING_SCRIPT in ps:
        for s in snapshot.scripts:
            if check_blocking_script(s, include_inline_scripts):
                out.append(Violation(FeatureKind.BLOCKING_SCRIPT, s.id, ElementClass.SCRIPT))
    if FeatureKind.FONT_DISPLAY_LATE_SWAP in ps:
        for i, f in enumerate(snapshot.fonts):
            if check_font_late_swap(f):
                out.append(Violation(FeatureKind.FONT_DISPLAY_LATE_SWAP, i, ElementClass.FONT))
    if FeatureKind.LAYOUT_ANIMATIONS in ps:
        for i, a in enumerate(snapshot.animations):
            if check_layout_animation(a):
                out.append(Violation(FeatureKind.LAYOUT_ANIMATIONS, i, ElementClass.ANIMATION))
    return out
