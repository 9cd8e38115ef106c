"""Simulated policy enforcement and the analytic timeline model.

The timeline is a sequential fetch model: every fetch costs one round trip
plus its transfer time, nothing overlaps.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import replace
from typing import Optional, Tuple

from .detect import (
    LOSSLESS_ALLOWANCE_BYTES,
    audit,
    check_blocking_script,
    check_font_late_swap,
    check_layout_animation,
    check_unsized,
    media_trigger,
)
from .layout import DEFAULT_MEDIA_SIZE, SizingMode, estimate_cls, layout_pass, box_width
from .model import (
    NO_MOTION,
    SLOW_4G,
    AuditReport,
    EncodingClass,
    Estimate,
    FeatureKind,
    FontDisplay,
    MediaKind,
    NetworkProfile,
    PageSnapshot,
    PolicySet,
    ViewportConfig,
    count_by_kind,
)


def enforce(snapshot: PageSnapshot, ps: PolicySet, vp: Optional[ViewportConfig] = None, *,
            include_inline_scripts: bool = False,
            lossless_allowance: int = LOSSLESS_ALLOWANCE_BYTES) -> PageSnapshot:
    """Return the snapshot as a browser enforcing ``ps`` would present it.

    Images failing an oversized or bpp check become zero-byte placeholders
    occupying the same box, unsized media get the 300x150 default, blocking
    scripts are deferred, late-swap fonts become ``optional`` and layout
    animations are neutralized.
    """
    vp = vp or ViewportConfig()
    diag = Counter(dict(snapshot.diagnostics))
    media = []
    for m in snapshot.media:
        # Sizing comes first: the image checks then see the box the
        # element will actually occupy, which keeps enforcement idempotent.
        if FeatureKind.UNSIZED_MEDIA in ps and check_unsized(m):
            m = replace(m, declared_width_css_px=DEFAULT_MEDIA_SIZE[0],
                        declared_height_css_px=DEFAULT_MEDIA_SIZE[1])
            diag["enforced_default_size"] += 1
        hits = media_trigger(m, ps, box_width(m, vp), vp, lossless_allowance, first_only=False)
        if {k for k, _ in hits} - {FeatureKind.UNSIZED_MEDIA}:
            # An unsized placeholder keeps the natural size so layout (and
            # so CLS) is unchanged; the image checks all need one anyway.
            if m.is_sized:
                size = (m.declared_width_css_px, m.declared_height_css_px)
            elif m.has_natural_size:
                size = (m.natural_width_px, m.natural_height_px)
            else:
                size = DEFAULT_MEDIA_SIZE
            m = replace(m, encoded_bytes=0, natural_width_px=size[0], natural_height_px=size[1],
                        encoding_class=EncodingClass.UNKNOWN, placeholder=True)
            diag["enforced_placeholder"] += 1
        media.append(m)

    scripts = list(snapshot.scripts)
    if FeatureKind.BLOCKING_SCRIPT in ps:
        for i, s in enumerate(scripts):
            if check_blocking_script(s, include_inline_scripts):
                scripts[i] = replace(s, has_defer=True)
                diag["enforced_defer"] += 1

    fonts = list(snapshot.fonts)
    if FeatureKind.FONT_DISPLAY_LATE_SWAP in ps:
        for i, f in enumerate(fonts):
            if check_font_late_swap(f):
                fonts[i] = replace(f, font_display=FontDisplay.OPTIONAL)
                diag["enforced_font_optional"] += 1

    animations = list(snapshot.animations)
    if FeatureKind.LAYOUT_ANIMATIONS in ps:
        for i, a in enumerate(animations):
            if check_layout_animation(a):
                animations[i] = replace(a, animated_properties=NO_MOTION, neutralized=True)
                diag["enforced_animation_neutralized"] += 1

    return replace(snapshot, media=tuple(media), scripts=tuple(scripts), fonts=tuple(fonts),
                   animations=tuple(animations), diagnostics=diag)


def fetch_time(n_bytes: int, np: NetworkProfile = SLOW_4G) -> float:
    """Seconds to fetch ``n_bytes``: one round trip plus transfer time."""
    return np.rtt_ms / 1000.0 + n_bytes * 8 / (np.downlink_kbps * 1000.0)


def estimate_timeline(snapshot: PageSnapshot, np: NetworkProfile = SLOW_4G,
                      vp: Optional[ViewportConfig] = None, *,
                      reference: Optional[PageSnapshot] = None,
                      include_inline_scripts: bool = False) -> Tuple[float, float]:
    """``(first_render_s, lcp_s)`` for the snapshot.

    First render waits for the HTML and every blocking script in turn. LCP
    adds the largest above-fold image and the slowest late-swap font.
    Element geometry (which image is largest, what is above the fold) is
    read from ``reference`` when given, so a pre/post comparison judges
    the same LCP element both times.
    """
    vp = vp or ViewportConfig()
    first_render = fetch_time(snapshot.html_bytes, np)
    for s in snapshot.scripts:
        if check_blocking_script(s, include_inline_scripts):
            first_render += fetch_time(s.encoded_bytes or 0, np)

    geometry = reference if reference is not None else snapshot
    boxes = layout_pass(geometry, vp, SizingMode.FINAL)
    above = [b for b in boxes if b.y_css_px < vp.height_css_px]
    images = {m.id: m for m in snapshot.media if m.media_kind is MediaKind.IMAGE}
    candidates = [b for b in above if b.element_id in images]
    image_time = 0.0
    if candidates:
        largest = max(candidates, key=lambda b: (b.area, -b.element_id))
        image_time = fetch_time(images[largest.element_id].encoded_bytes or 0, np)
    font_penalty = 0.0
    late = [f for f in snapshot.fonts if check_font_late_swap(f)]
    if above and late:
        font_penalty = max(fetch_time(f.encoded_bytes or 0, np) for f in late)
    return first_render, first_render + image_time + font_penalty


def report(snapshot: PageSnapshot, ps: PolicySet, vp: Optional[ViewportConfig] = None,
           np: NetworkProfile = SLOW_4G, **options) -> AuditReport:
    """Audit, enforce, and estimate before/after for one page."""
    vp = vp or ViewportConfig()
    violations = audit(snapshot, ps, vp, **options)
    enforced = enforce(snapshot, ps, vp, **options)
    inline = options.get("include_inline_scripts", False)
    fr_pre, lcp_pre = estimate_timeline(snapshot, np, vp, include_inline_scripts=inline)
    fr_post, lcp_post = estimate_timeline(enforced, np, vp, reference=snapshot, include_inline_scripts=inline)
    cls_pre, _ = estimate_cls(snapshot, vp)
    cls_post, _ = estimate_cls(enforced, vp)
    saved = sum((a.encoded_bytes or 0) - (b.encoded_bytes or 0)
                for a, b in zip(snapshot.media, enforced.media))
    return AuditReport(
        url=snapshot.url,
        violations=tuple(violations),
        counts_per_feature=count_by_kind(violations),
        bytes_saved_estimate=saved,
        first_render_estimate_s=Estimate(fr_pre, fr_post),
        lcp_estimate_s=Estimate(lcp_pre, lcp_post),
        cls_estimate=Estimate(cls_pre, cls_post),
        policy=ps,
    )
