"""
Layout shift from unsized images
================================

Unsized images load at size zero and push the text below them down when
they arrive. Each arrival is one shift event.
"""
from docpolicy import MediaElement, PageSnapshot, ViewportConfig, estimate_cls
from docpolicy.layout import SizingMode, layout_pass

vp = ViewportConfig(360, 640, 3.0)

one = PageSnapshot(media=(MediaElement(0, natural_width_px=360, natural_height_px=300),))
total, events = estimate_cls(one, vp)
print(f"one unsized image:  CLS {total:.6f}")
for e in events:
    print(f"  impact {e.impact_fraction:.4f} x distance {e.distance_fraction:.4f}")

two = PageSnapshot(media=one.media + (MediaElement(1, natural_width_px=360, natural_height_px=200),))
total, events = estimate_cls(two, vp)
print(f"two unsized images: CLS {total:.6f} over {len(events)} events")

# Where everything ends up, and where it would sit with 300x150 defaults
for mode in (SizingMode.FINAL, SizingMode.ENFORCED):
    boxes = ", ".join(f"{b.element_id}@y={b.y_css_px:g}" for b in layout_pass(two, vp, mode))
    print(f"{mode.value:8s} {boxes}")

# Declaring sizes removes every shift
sized = PageSnapshot(media=(MediaElement(0, declared_width_css_px=360, declared_height_css_px=300),))
print("declared sizes:     CLS", estimate_cls(sized, vp)[0])
