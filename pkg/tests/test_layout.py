import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from docpolicy.layout import (
    TEXT_BLOCK_ID,
    SizingMode,
    container_width,
    estimate_cls,
    layout_pass,
    union_area,
)
from docpolicy.model import MediaElement, PageSnapshot, ViewportConfig
from strategies import snapshots

VP = ViewportConfig(360, 640, 3.0)


def unsized(i, w, h):
    return MediaElement(i, natural_width_px=w, natural_height_px=h)


def sized(i, w, h):
    return MediaElement(i, declared_width_css_px=w, declared_height_css_px=h)


def boxes(snap, mode):
    return [(b.element_id, b.x_css_px, b.y_css_px, b.w_css_px, b.h_css_px) for b in layout_pass(snap, VP, mode)]


def test_single_unsized_image_in_each_mode():
    snap = PageSnapshot(media=(unsized(0, 360, 300),))
    assert boxes(snap, SizingMode.INITIAL)[0] == (0, 0, 0, 0, 0)
    assert boxes(snap, SizingMode.FINAL)[0] == (0, 0, 0, 360, 300)
    assert boxes(snap, SizingMode.ENFORCED)[0] == (0, 0, 0, 300, 150)


def test_no_media_leaves_text_block_at_top():
    assert boxes(PageSnapshot(), SizingMode.FINAL) == [(TEXT_BLOCK_ID, 0, 0, 360, 100)]


@pytest.mark.parametrize("mode", list(SizingMode))
def test_sized_image_is_mode_independent(mode):
    assert boxes(PageSnapshot(media=(sized(0, 360, 200),)), mode)[0] == (0, 0, 0, 360, 200)


def test_wide_natural_scaled_to_viewport():
    (b, text) = layout_pass(PageSnapshot(media=(unsized(0, 1440, 600),)), VP, SizingMode.FINAL)
    assert (b.w_css_px, b.h_css_px) == (360, 150)
    assert text.y_css_px == 150


def test_container_width():
    snap = PageSnapshot(media=(sized(0, 300, 10), unsized(1, 5, 5), sized(2, 1000, 10)))
    assert container_width(snap, VP, 0) == 300
    assert container_width(snap, VP, 1) == 360
    assert container_width(snap, VP, 2) == 360
    with pytest.raises(KeyError):
        container_width(snap, VP, 9)


def test_cls_zero_when_all_sized():
    total, events = estimate_cls(PageSnapshot(media=(sized(0, 360, 200), sized(1, 100, 100))), VP)
    assert total == 0 and events == []


def test_cls_single_unsized_image():
    total, (ev,) = estimate_cls(PageSnapshot(media=(unsized(0, 360, 300),)), VP)
    assert ev.impact_fraction == pytest.approx(0.625, abs=1e-12)
    assert ev.distance_fraction == pytest.approx(0.46875, abs=1e-12)
    assert total == pytest.approx(0.292969, abs=1e-6)


def test_cls_two_unsized_images_exceed_one():
    one, _ = estimate_cls(PageSnapshot(media=(unsized(0, 360, 300),)), VP)
    two, events = estimate_cls(PageSnapshot(media=(unsized(0, 360, 300), unsized(1, 360, 200))), VP)
    assert len(events) == 2
    assert two == pytest.approx(sum(e.score for e in events))
    assert two > one and two > max(e.score for e in events)
    # second event: text 300->500, sweep [300, 600]
    assert events[1].score == pytest.approx((300 / 640) * (200 / 640))


def test_offscreen_shift_does_not_count():
    snap = PageSnapshot(media=(sized(0, 360, 700), unsized(1, 360, 300)))
    assert estimate_cls(snap, VP) == (0, [])


def test_union_area_overlaps():
    assert union_area([(0, 0, 10, 10), (5, 5, 15, 15)]) == 175
    assert union_area([(0, 0, 10, 10), (0, 0, 10, 10)]) == 100
    assert union_area([(0, 0, 0, 10)]) == 0


def raster_cls(media, vp_w=360, vp_h=640, text_h=100):
    """Brute force: restack by hand, paint swept regions on a pixel grid."""
    def stack(loaded):
        y, out = 0, []
        for i, (is_sized, w, h) in enumerate(media):
            bw, bh = (w, h) if (is_sized or i in loaded) else (0, 0)
            out.append((y, min(bw, vp_w), bh))
            y += bh
        out.append((y, vp_w, text_h))
        return out

    loaded, total = set(), 0.0
    before = stack(loaded)
    for i, (is_sized, w, h) in enumerate(media):
        if is_sized:
            continue
        loaded.add(i)
        after = stack(loaded)
        grid = np.zeros((vp_h, vp_w), dtype=bool)
        dist = 0
        for j, ((y0, w0, h0), (y1, w1, h1)) in enumerate(zip(before, after)):
            if j == i or y0 == y1 or (w0 * h0 == 0 and w1 * h1 == 0):
                continue
            top, bot, right = min(y0, y1), max(y0 + h0, y1 + h1), max(w0, w1)
            if top >= vp_h or right <= 0:
                continue
            grid[top:min(bot, vp_h), 0:right] = True
            dist = max(dist, abs(y1 - y0))
        if grid.any():
            total += grid.sum() / (vp_w * vp_h) * min(dist, vp_h) / vp_h
        before = after
    return total


media_spec = st.lists(
    st.tuples(st.booleans(), st.integers(0, 360), st.integers(0, 500)), max_size=5,
)


@settings(max_examples=150)
@given(media_spec)
def test_cls_matches_raster_oracle(spec):
    media = tuple(
        sized(i, w, h) if is_sized else unsized(i, max(w, 1), max(h, 1))
        for i, (is_sized, w, h) in enumerate(spec)
    )
    ref = [(s, w if s else max(w, 1), h if s else max(h, 1)) for s, w, h in spec]
    total, _ = estimate_cls(PageSnapshot(media=media), VP)
    assert total == pytest.approx(raster_cls(ref), abs=1e-9)


@given(snapshots())
def test_cls_properties(snap):
    total, events = estimate_cls(snap, VP)
    assert total >= 0
    assert (total == 0) == (not events)
    for e in events:
        assert 0 <= e.impact_fraction <= 1 and 0 <= e.distance_fraction <= 1
        assert e.score == e.impact_fraction * e.distance_fraction


@given(snapshots(), st.integers(1, 4000), st.integers(1, 4000))
def test_appending_unsized_medium_never_lowers_cls(snap, w, h):
    before, _ = estimate_cls(snap, VP)
    next_id = (snap.media[-1].id + 1) if snap.media else 0
    grown = PageSnapshot(media=snap.media + (unsized(next_id, w, h),))
    after, _ = estimate_cls(grown, VP)
    assert after >= before


@given(snapshots())
def test_layout_deterministic_and_stacked(snap):
    for mode in SizingMode:
        a = layout_pass(snap, VP, mode)
        assert a == layout_pass(snap, VP, mode)
        assert [b.element_id for b in a[:-1]] == [m.id for m in snap.media]
        for prev, nxt in zip(a, a[1:]):
            assert nxt.y_css_px == pytest.approx(prev.y_css_px + prev.h_css_px)
        assert all(b.w_css_px <= VP.width_css_px for b in a)
