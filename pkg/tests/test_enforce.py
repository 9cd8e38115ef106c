import math

import pytest
from hypothesis import given, strategies as st

from docpolicy.detect import audit, check_blocking_script, check_font_late_swap
from docpolicy.enforce import enforce, estimate_timeline, fetch_time, report
from docpolicy.layout import estimate_cls
from docpolicy.model import (
    NO_MOTION,
    SLOW_4G,
    AnimationRule,
    FeatureKind as F,
    FontFaceRule,
    MediaElement,
    NetworkProfile,
    PageSnapshot,
    PolicySet,
    ScriptElement,
    ViewportConfig,
    default_policy_set,
)
from strategies import policy_sets, snapshots

VP = ViewportConfig()
KB = 1024


def total_bytes(s):
    return sum(m.encoded_bytes or 0 for m in s.media)


def test_fetch_time_examples():
    assert fetch_time(32768, SLOW_4G) == pytest.approx(0.313840, abs=1e-12)
    assert fetch_time(0, SLOW_4G) == pytest.approx(0.150, abs=1e-12)
    assert fetch_time(10**9, NetworkProfile(150, math.inf, math.inf)) == 0.150


def one_script_page(**flags):
    return PageSnapshot(html_bytes=32 * KB, scripts=(
        ScriptElement(0, True, "a.js", encoded_bytes=16 * KB, **flags),))


def test_first_render_with_blocking_script():
    fr, lcp = estimate_timeline(one_script_page(), SLOW_4G, VP)
    assert fr == pytest.approx(0.545760, abs=1e-9)
    assert lcp == fr  # no images, no fonts


def test_first_render_without_blocking_scripts():
    fr, _ = estimate_timeline(one_script_page(has_async=True), SLOW_4G, VP)
    assert fr == fetch_time(32 * KB, SLOW_4G)


def test_enforcing_blocking_script_saves_one_fetch():
    page = one_script_page()
    r = report(page, PolicySet.of(F.BLOCKING_SCRIPT), VP, SLOW_4G)
    assert r.first_render_estimate_s.delta == pytest.approx(0.231920, abs=1e-9)


def test_unknown_script_bytes_cost_a_round_trip():
    page = PageSnapshot(scripts=(ScriptElement(0, True, "a.js"),))
    assert estimate_timeline(page, SLOW_4G, VP)[0] == pytest.approx(0.3)


def test_lcp_adds_largest_above_fold_image_and_late_font():
    page = PageSnapshot(
        media=(MediaElement(0, declared_width_css_px=100, declared_height_css_px=100, encoded_bytes=1000),
               MediaElement(1, declared_width_css_px=360, declared_height_css_px=300, encoded_bytes=20000),
               MediaElement(2, declared_width_css_px=360, declared_height_css_px=900, encoded_bytes=10**6)),
        fonts=(FontFaceRule("A", font_display="swap", encoded_bytes=4000),
               FontFaceRule("B", font_display="swap", encoded_bytes=8000),
               FontFaceRule("C", font_display="optional", encoded_bytes=10**6)),
    )
    fr, lcp = estimate_timeline(page, SLOW_4G, VP)
    # element 2 is 400px tall at y=400: above the fold and largest
    assert lcp == pytest.approx(fr + fetch_time(10**6) + fetch_time(8000))


def test_oversized_600kb_becomes_placeholder():
    m = MediaElement(0, declared_width_css_px=360, declared_height_css_px=240,
                     natural_width_px=2400, natural_height_px=1600,
                     encoded_bytes=600 * KB, encoding_class="lossy")
    page = PageSnapshot(media=(m,))
    out = enforce(page, PolicySet.of(F.OVERSIZED_IMAGES), VP)
    p = out.media[0]
    assert p.placeholder and p.encoded_bytes == 0 and p.encoding_class.value == "unknown"
    assert (p.natural_width_px, p.natural_height_px) == (360, 240)
    assert out.diagnostic("enforced_placeholder") == 1
    assert report(page, PolicySet.of(F.OVERSIZED_IMAGES), VP, SLOW_4G).bytes_saved_estimate == 600 * KB


def test_undeclared_placeholder_keeps_natural_box():
    m = MediaElement(0, natural_width_px=4000, natural_height_px=100, encoded_bytes=5000, encoding_class="lossy")
    p = enforce(PageSnapshot(media=(m,)), PolicySet.of(F.OVERSIZED_IMAGES), VP).media[0]
    assert p.placeholder and (p.natural_width_px, p.natural_height_px) == (4000, 100)


def test_unsized_and_oversized_placeholder_gets_default_box():
    m = MediaElement(0, natural_width_px=4000, natural_height_px=100, encoded_bytes=5000, encoding_class="lossy")
    p = enforce(PageSnapshot(media=(m,)), PolicySet.of(F.OVERSIZED_IMAGES, F.UNSIZED_MEDIA), VP).media[0]
    assert p.placeholder and (p.natural_width_px, p.natural_height_px) == (300, 150)
    assert (p.declared_width_css_px, p.declared_height_css_px) == (300, 150)


def test_each_feature_transform():
    page = PageSnapshot(
        media=(MediaElement(0, media_kind="video"),),
        scripts=(ScriptElement(0, True, "a.js"),),
        fonts=(FontFaceRule("A"),),
        animations=(AnimationRule(".a", frozenset({"left", "opacity"})),),
    )
    out = enforce(page, default_policy_set(), VP)
    assert (out.media[0].declared_width_css_px, out.media[0].declared_height_css_px) == (300, 150)
    assert out.scripts[0].has_defer
    assert out.fonts[0].font_display.value == "optional"
    assert out.animations[0].animated_properties == NO_MOTION and out.animations[0].neutralized
    assert audit(out, default_policy_set(), VP) == []


def test_unsized_only_enforcement():
    page = PageSnapshot(html_bytes=20000, media=(
        MediaElement(0, natural_width_px=360, natural_height_px=300, encoded_bytes=30000, encoding_class="lossy"),))
    r = report(page, PolicySet.of(F.UNSIZED_MEDIA), VP, SLOW_4G)
    assert r.cls_estimate.pre == pytest.approx(0.292969, abs=1e-6)
    assert r.cls_estimate.post == 0
    assert r.first_render_estimate_s.pre == r.first_render_estimate_s.post
    assert r.lcp_estimate_s.pre == r.lcp_estimate_s.post
    assert r.bytes_saved_estimate == 0


@given(snapshots())
def test_violation_free_page_is_unchanged(snap):
    ps = default_policy_set()
    if audit(snap, ps, VP):
        return
    assert enforce(snap, ps, VP) == snap
    r = report(snap, ps, VP, SLOW_4G)
    for e in (r.first_render_estimate_s, r.lcp_estimate_s, r.cls_estimate):
        assert e.pre == e.post
    assert r.bytes_saved_estimate == 0


@given(snapshots(), policy_sets())
def test_closure(snap, ps):
    assert audit(enforce(snap, ps, VP), ps, VP) == []


@given(snapshots(), policy_sets())
def test_idempotent(snap, ps):
    once = enforce(snap, ps, VP)
    assert enforce(once, ps, VP) == once


@given(snapshots(), policy_sets())
def test_never_increases(snap, ps):
    out = enforce(snap, ps, VP)
    assert total_bytes(out) <= total_bytes(snap)
    assert sum(map(check_blocking_script, out.scripts)) <= sum(map(check_blocking_script, snap.scripts))
    assert sum(map(check_font_late_swap, out.fonts)) <= sum(map(check_font_late_swap, snap.fonts))
    assert estimate_cls(out, VP)[0] <= estimate_cls(snap, VP)[0] + 1e-12


@given(snapshots(), policy_sets())
def test_report_invariants(snap, ps):
    r = report(snap, ps, VP, SLOW_4G)
    assert sum(r.counts_per_feature.values()) == len(r.violations)
    for e in (r.first_render_estimate_s, r.lcp_estimate_s, r.cls_estimate):
        assert 0 <= e.post <= e.pre + 1e-12
        assert math.isfinite(e.pre) and math.isfinite(e.post)
    assert r.bytes_saved_estimate >= 0
    if F.UNSIZED_MEDIA in ps:
        assert r.cls_estimate.post == 0


@given(snapshots(), st.data())
def test_timeline_monotone(snap, data):
    fr, lcp = estimate_timeline(snap, SLOW_4G, VP)
    if snap.scripts:
        i = data.draw(st.integers(0, len(snap.scripts) - 1))
        fewer = PageSnapshot(html_bytes=snap.html_bytes, media=snap.media, fonts=snap.fonts,
                             scripts=snap.scripts[:i] + snap.scripts[i + 1:])
        fr2, lcp2 = estimate_timeline(fewer, SLOW_4G, VP, reference=snap)
        assert fr2 <= fr and lcp2 <= lcp
    smaller = PageSnapshot(html_bytes=snap.html_bytes // 2, media=snap.media,
                           scripts=snap.scripts, fonts=snap.fonts)
    fr3, lcp3 = estimate_timeline(smaller, SLOW_4G, VP)
    assert fr3 <= fr and lcp3 <= lcp


def test_unsized_placeholder_keeps_layout():
    m = MediaElement(0, natural_width_px=2, natural_height_px=1, encoded_bytes=10**5, encoding_class="lossy")
    page = PageSnapshot(media=(m, MediaElement(1, natural_width_px=360, natural_height_px=200)))
    out = enforce(page, PolicySet.of(F.LOSSY_IMAGES_MAX_BPP), VP)
    assert out.media[0].placeholder
    assert (out.media[0].natural_width_px, out.media[0].natural_height_px) == (2, 1)
    assert estimate_cls(out, VP) == estimate_cls(page, VP)
