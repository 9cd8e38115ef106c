import pytest
from hypothesis import given, strategies as st

from docpolicy.detect import (
    audit,
    bits_per_pixel,
    check_blocking_script,
    check_bpp,
    check_font_late_swap,
    check_layout_animation,
    check_oversized,
    check_unsized,
)
from docpolicy.model import (
    AnimationRule,
    FeatureKind as F,
    FontFaceRule,
    IMAGE_CHECK_ORDER,
    MediaElement,
    PageSnapshot,
    PolicyFeature,
    PolicySet,
    ScriptElement,
    ViewportConfig,
    default_policy_set,
)
from strategies import media_elements, policy_sets, snapshots

VP = ViewportConfig(360, 640, 3.0)


def img(i=0, **kw):
    return MediaElement(i, **kw)


# oversized

def test_oversized_over_threshold():
    m = img(natural_width_px=2000, natural_height_px=100)
    assert check_oversized(m, 2.0, 300, VP) == (2000, 1800)


def test_oversized_boundary_is_allowed():
    m = img(natural_width_px=1800, natural_height_px=100)
    assert check_oversized(m, 2.0, 300, VP) is None


def test_oversized_skips_video_and_unknown_size():
    assert check_oversized(img(media_kind="video", natural_width_px=9000, natural_height_px=10), 2.0, 300, VP) is None
    assert check_oversized(img(), 2.0, 300, VP) is None


def test_oversized_height_only_with_declared_height():
    tall = dict(natural_width_px=100, natural_height_px=5000)
    assert check_oversized(img(**tall), 2.0, 300, VP) is None
    assert check_oversized(img(declared_height_css_px=100, **tall), 2.0, 300, VP) == (5000, 600)


# bits per pixel

def test_lossy_bpp_violation():
    m = img(natural_width_px=500, natural_height_px=400, encoded_bytes=37500, encoding_class="lossy")
    assert check_bpp(m, F.LOSSY_IMAGES_MAX_BPP, 1.0) == (1.5, 1.0)


def test_lossless_allowance_boundary():
    m = img(natural_width_px=128, natural_height_px=128, encoded_bytes=12288, encoding_class="lossless")
    assert bits_per_pixel(m, 10240) == 1.0
    assert check_bpp(m, F.LOSSLESS_IMAGES_MAX_BPP, 1.0) is None
    # strict variant gets no allowance: 12288*8/16384 = 6.0
    assert check_bpp(m, F.LOSSLESS_IMAGES_STRICT_MAX_BPP, 1.0) == (6.0, 1.0)


def test_allowance_floors_at_zero():
    m = img(natural_width_px=10, natural_height_px=10, encoded_bytes=100, encoding_class="lossless")
    assert bits_per_pixel(m, 10240) == 0


@pytest.mark.parametrize("kind", [F.LOSSY_IMAGES_MAX_BPP, F.LOSSLESS_IMAGES_MAX_BPP, F.LOSSLESS_IMAGES_STRICT_MAX_BPP])
def test_bpp_needs_matching_encoding(kind):
    unknown = img(natural_width_px=10, natural_height_px=10, encoded_bytes=10**6)
    assert check_bpp(unknown, kind, 0.001) is None
    wrong = "lossless" if kind is F.LOSSY_IMAGES_MAX_BPP else "lossy"
    m = img(natural_width_px=10, natural_height_px=10, encoded_bytes=10**6, encoding_class=wrong)
    assert check_bpp(m, kind, 0.001) is None


# the boolean checks

def test_unsized():
    assert check_unsized(img(declared_width_css_px=100))
    assert not check_unsized(img(declared_width_css_px=100, declared_height_css_px=50))
    assert check_unsized(img(media_kind="video"))


def test_blocking_script():
    assert check_blocking_script(ScriptElement(0, external=True, source_url="a.js"))
    assert not check_blocking_script(ScriptElement(0, external=True, source_url="a.js", has_defer=True))
    assert not check_blocking_script(ScriptElement(0, external=True, source_url="a.js", has_async=True))
    assert not check_blocking_script(ScriptElement(0, external=True, source_url="a.js", is_module=True))
    assert not check_blocking_script(ScriptElement(0))
    assert check_blocking_script(ScriptElement(0), include_inline=True)


@pytest.mark.parametrize("display,late", [("auto", True), ("block", True), ("swap", True),
                                          ("fallback", False), ("optional", False)])
def test_font_late_swap(display, late):
    assert check_font_late_swap(FontFaceRule("F", font_display=display)) is late


@pytest.mark.parametrize("props,hit", [
    ({"left"}, True), ({"opacity"}, False), ({"transform", "width"}, True),
    ({"margin-left"}, True), ({"padding"}, True), ({"border-top-width"}, True),
    ({"transform", "color"}, False), ({"all"}, True),
])
def test_layout_animation(props, hit):
    assert check_layout_animation(AnimationRule(".a", frozenset(props))) is hit


# audit

def test_oversized_hides_unsized():
    m = img(natural_width_px=4000, natural_height_px=100)
    out = audit(PageSnapshot(media=(m,)), PolicySet.of(F.OVERSIZED_IMAGES, F.UNSIZED_MEDIA), VP)
    assert [v.feature_kind for v in out] == [F.OVERSIZED_IMAGES]


def test_empty_snapshot():
    assert audit(PageSnapshot(), default_policy_set(), VP) == []


def test_three_blocking_scripts():
    snap = PageSnapshot(scripts=tuple(ScriptElement(i, True, f"{i}.js") for i in range(3)))
    out = audit(snap, PolicySet.of(F.BLOCKING_SCRIPT), VP)
    assert [(v.feature_kind, v.element_id) for v in out] == [(F.BLOCKING_SCRIPT, i) for i in range(3)]


def test_above_fold_flag():
    media = (img(0, declared_width_css_px=360, declared_height_css_px=700),
             img(1, media_kind="video"))
    out = audit(PageSnapshot(media=media), PolicySet.of(F.UNSIZED_MEDIA), VP)
    assert [(v.element_id, v.above_fold) for v in out] == [(1, False)]
    out = audit(PageSnapshot(media=media[1:]), PolicySet.of(F.UNSIZED_MEDIA), VP)
    assert out[0].above_fold


def reference_media_kinds(snap, ps, vp):
    """Which image check fires per media id, re-derived from the rules."""
    out = {}
    for m in snap.media:
        box_w = m.declared_width_css_px if m.declared_width_css_px is not None else vp.width_css_px
        box_w = min(box_w, vp.width_css_px)
        fired = []
        if F.OVERSIZED_IMAGES in ps and m.media_kind.value == "image" and m.natural_width_px:
            r = ps.param(F.OVERSIZED_IMAGES) * vp.device_pixel_ratio
            if m.natural_width_px > box_w * r + 1e-9 or (
                    m.declared_height_css_px is not None
                    and m.natural_height_px > m.declared_height_css_px * r + 1e-9):
                fired.append(F.OVERSIZED_IMAGES)
        px = (m.natural_width_px or 0) * (m.natural_height_px or 0)
        if m.media_kind.value == "image" and px and m.encoded_bytes is not None:
            enc = m.encoding_class.value
            for kind, want, slack in ((F.LOSSY_IMAGES_MAX_BPP, "lossy", 0),
                                      (F.LOSSLESS_IMAGES_MAX_BPP, "lossless", 10240),
                                      (F.LOSSLESS_IMAGES_STRICT_MAX_BPP, "lossless", 0)):
                if kind in ps and enc == want:
                    if max(0, m.encoded_bytes - slack) * 8 / px > ps.param(kind) + 1e-9:
                        fired.append(kind)
        if F.UNSIZED_MEDIA in ps and (m.declared_width_css_px is None or m.declared_height_css_px is None):
            fired.append(F.UNSIZED_MEDIA)
        if fired:
            out[m.id] = fired[0]
    return out


@given(snapshots(), policy_sets())
def test_media_kinds_match_reference(snap, ps):
    got = {v.element_id: v.feature_kind for v in audit(snap, ps, VP) if v.element_class.value == "media"}
    assert got == reference_media_kinds(snap, ps, VP)


@given(snapshots(), policy_sets())
def test_per_media_cap_and_determinism(snap, ps):
    out = audit(snap, ps, VP)
    assert out == audit(snap, ps, VP)
    ids = [v.element_id for v in out if v.feature_kind in IMAGE_CHECK_ORDER]
    assert len(ids) == len(set(ids))


@given(snapshots(), policy_sets(), st.sampled_from(list(F)))
def test_monotone_in_policy(snap, ps, extra):
    if extra in ps:
        return
    bigger = ps.with_feature(PolicyFeature(extra))
    strict, loose = bigger.get(F.LOSSLESS_IMAGES_STRICT_MAX_BPP), bigger.get(F.LOSSLESS_IMAGES_MAX_BPP)
    if strict and loose and strict.parameter > loose.parameter:
        return
    assert len(audit(snap, bigger, VP)) >= len(audit(snap, ps, VP))


@given(snapshots(max_media=4), policy_sets(), st.data())
def test_monotone_in_snapshot(snap, ps, data):
    next_id = snap.media[-1].id + 1 if snap.media else 0
    grown = PageSnapshot(url=snap.url, html_bytes=snap.html_bytes,
                         media=snap.media + (data.draw(media_elements(next_id)),),
                         scripts=snap.scripts, fonts=snap.fonts, animations=snap.animations)
    assert len(audit(grown, ps, VP)) >= len(audit(snap, ps, VP))


@given(snapshots(), policy_sets())
def test_oversized_always_wins_over_unsized(snap, ps):
    kinds = {v.element_id: v.feature_kind for v in audit(snap, ps, VP) if v.element_class.value == "media"}
    for m in snap.media:
        if F.OVERSIZED_IMAGES in ps and check_unsized(m) and check_oversized(
                m, ps.param(F.OVERSIZED_IMAGES), min(m.declared_width_css_px or 360, 360), VP):
            assert kinds[m.id] is F.OVERSIZED_IMAGES


@given(snapshots())
def test_empty_policy_finds_nothing(snap):
    assert audit(snap, PolicySet(), VP) == []
