"""Vertical-stack layout estimator and layout-shift (CLS) simulation.

Media are stacked top to bottom in document order at x=0, followed by a
synthetic text block standing in for the content below them. No floats,
flex or text measurement.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .model import MediaElement, PageSnapshot, ViewportConfig

# Enforced size for unsized media, the HTML default object size.
DEFAULT_MEDIA_SIZE = (300, 150)
TEXT_BLOCK_HEIGHT = 100.0
TEXT_BLOCK_ID = -1
# Smallest vertical move that counts as a layout shift, CSS px.
SHIFT_THRESHOLD_PX = 1.0


class SizingMode(str, enum.Enum):
    INITIAL = "initial"  # before any unsized medium has loaded
    FINAL = "final"      # every medium loaded at its natural size
    ENFORCED = "enforced"  # unsized media at the 300x150 default


@dataclass(frozen=True)
class ElementBox:
    element_id: int
    x_css_px: float
    y_css_px: float
    w_css_px: float
    h_css_px: float

    @property
    def bottom(self) -> float:
        return self.y_css_px + self.h_css_px

    @property
    def area(self) -> float:
        return self.w_css_px * self.h_css_px


@dataclass(frozen=True)
class ShiftEvent:
    trigger_media_id: int
    impact_fraction: float
    distance_fraction: float
    score: float


def loaded_size(m: MediaElement, vp: ViewportConfig) -> Tuple[float, float]:
    """Size an unsized medium takes once its content arrives: natural size,
    scaled down to the viewport width with aspect ratio kept."""
    if not m.has_natural_size:
        return 0.0, 0.0
    w, h = float(m.natural_width_px), float(m.natural_height_px)
    if w > vp.width_css_px:
        h = h * vp.width_css_px / w
        w = float(vp.width_css_px)
    return w, h


def media_size(m: MediaElement, vp: ViewportConfig, mode: SizingMode, loaded: bool = False) -> Tuple[float, float]:
    if m.is_sized:
        return float(m.declared_width_css_px), float(m.declared_height_css_px)
    if mode is SizingMode.ENFORCED:
        return tuple(map(float, DEFAULT_MEDIA_SIZE))
    if mode is SizingMode.FINAL or loaded:
        return loaded_size(m, vp)
    return 0.0, 0.0


def _stack(sizes: Sequence[Tuple[int, float, float]], vp: ViewportConfig, text_height: float) -> List[ElementBox]:
    boxes = []
    y = 0.0
    for element_id, w, h in sizes:
        boxes.append(ElementBox(element_id, 0.0, y, min(w, float(vp.width_css_px)), h))
        y += h
    boxes.append(ElementBox(TEXT_BLOCK_ID, 0.0, y, float(vp.width_css_px), float(text_height)))
    return boxes


def layout_pass(
    snapshot: PageSnapshot,
    vp: ViewportConfig,
    sizing_mode: SizingMode = SizingMode.FINAL,
    text_block_height: float = TEXT_BLOCK_HEIGHT,
) -> List[ElementBox]:
    """Boxes for every medium plus the trailing text block (id -1)."""
    mode = SizingMode(sizing_mode)
    sizes = [(m.id, *media_size(m, vp, mode)) for m in snapshot.media]
    return _stack(sizes, vp, text_block_height)


def container_width(snapshot: PageSnapshot, vp: ViewportConfig, media_id: int) -> float:
    return box_width(snapshot.media_by_id(media_id), vp)


def box_width(m: MediaElement, vp: ViewportConfig) -> float:
    """CSS width of the box ``m`` is laid out in."""
    if m.declared_width_css_px is not None:
        return float(min(m.declared_width_css_px, vp.width_css_px))
    return float(vp.width_css_px)


def above_fold_ids(snapshot: PageSnapshot, vp: ViewportConfig) -> Dict[int, bool]:
    return {b.element_id: b.y_css_px < vp.height_css_px for b in layout_pass(snapshot, vp, SizingMode.FINAL)}


def union_area(rects: Sequence[Tuple[float, float, float, float]]) -> float:
    """Exact area of a union of axis-aligned ``(x0, y0, x1, y1)`` rectangles."""
    rects = [r for r in rects if r[2] > r[0] and r[3] > r[1]]
    if not rects:
        return 0.0
    xs = sorted({r[0] for r in rects} | {r[2] for r in rects})
    area = 0.0
    for x0, x1 in zip(xs, xs[1:]):
        spans = sorted((r[1], r[3]) for r in rects if r[0] <= x0 and r[2] >= x1)
        covered = 0.0
        cur_lo: Optional[float] = None
        cur_hi = 0.0
        for lo, hi in spans:
            if cur_lo is None or lo > cur_hi:
                if cur_lo is not None:
                    covered += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
            else:
                cur_hi = max(cur_hi, hi)
        if cur_lo is not None:
            covered += cur_hi - cur_lo
        area += covered * (x1 - x0)
    return area


def _clip(rect, vp: ViewportConfig):
    x0, y0, x1, y1 = rect
    return (max(x0, 0.0), max(y0, 0.0), min(x1, float(vp.width_css_px)), min(y1, float(vp.height_css_px)))


def shift_event(trigger_id: int, before: Sequence[ElementBox], after: Sequence[ElementBox],
                vp: ViewportConfig) -> Optional[ShiftEvent]:
    """Score one relayout. An element moved if its top changed by at least
    the threshold; its impact region is the area it sweeps from the old box
    to the new one, clipped to the viewport. Off-screen moves do not count."""
    regions = []
    distance = 0.0
    for b, a in zip(before, after):
        if b.element_id == trigger_id:
            continue
        dy = abs(a.y_css_px - b.y_css_px)
        if dy < SHIFT_THRESHOLD_PX or (b.area <= 0 and a.area <= 0):
            continue
        x0 = min(b.x_css_px, a.x_css_px)
        x1 = max(b.x_css_px + b.w_css_px, a.x_css_px + a.w_css_px)
        y0 = min(b.y_css_px, a.y_css_px)
        y1 = max(b.bottom, a.bottom)
        region = _clip((x0, y0, x1, y1), vp)
        if region[2] <= region[0] or region[3] <= region[1]:
            continue  # entirely off-screen
        regions.append(region)
        distance = max(distance, dy)
    if not regions:
        return None
    impact = min(1.0, union_area(regions) / vp.area)
    dist = min(distance, float(vp.height_css_px)) / vp.height_css_px
    return ShiftEvent(trigger_id, impact, dist, impact * dist)


def estimate_cls(
    snapshot: PageSnapshot,
    vp: ViewportConfig,
    text_block_height: float = TEXT_BLOCK_HEIGHT,
) -> Tuple[float, List[ShiftEvent]]:
    """Load unsized media one at a time in document order and sum the
    resulting layout-shift scores."""
    loaded = set()

    def boxes():
        sizes = [(m.id, *media_size(m, vp, SizingMode.INITIAL, m.id in loaded)) for m in snapshot.media]
        return _stack(sizes, vp, text_block_height)

    events: List[ShiftEvent] = []
    current = boxes()
    for m in snapshot.media:
        if m.is_sized:
            continue
        loaded.add(m.id)
        nxt = boxes()
        ev = shift_event(m.id, current, nxt, vp)
        if ev is not None:
            events.append(ev)
        current = nxt
    return sum(e.score for e in events), events
