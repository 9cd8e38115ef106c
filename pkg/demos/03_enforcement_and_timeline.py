"""
Simulated enforcement and the timeline model
============================================

Enforcing a policy rewrites the snapshot the way a browser would, and the
report compares estimates before and after.
"""
from docpolicy import (
    SLOW_4G,
    FeatureKind,
    NetworkProfile,
    PolicySet,
    ViewportConfig,
    enforce,
    estimate_timeline,
    fetch_time,
    generate_synthetic,
    report,
)

vp = ViewportConfig()

# Each fetch costs one round trip plus its transfer time
print(f"32 KiB on Slow 4G: {fetch_time(32 * 1024, SLOW_4G):.6f} s")
print(f"32 KiB on a fast link: {fetch_time(32 * 1024, NetworkProfile(20, 50_000, 20_000)):.6f} s")

page = generate_synthetic(FeatureKind.BLOCKING_SCRIPT, 2).snapshot()
first_render, lcp = estimate_timeline(page, SLOW_4G, vp)
print(f"two blocking scripts: first render {first_render:.3f} s")

r = report(page, PolicySet.of(FeatureKind.BLOCKING_SCRIPT), vp, SLOW_4G)
print(f"after deferring them: first render {r.first_render_estimate_s.post:.3f} s "
      f"(saves {r.first_render_estimate_s.delta:.3f} s)")

# An oversized hero image becomes a zero-byte placeholder in the same box
hero = generate_synthetic(FeatureKind.OVERSIZED_IMAGES).snapshot()
after = enforce(hero, PolicySet.of(FeatureKind.OVERSIZED_IMAGES), vp)
print("placeholder:", after.media[0].placeholder, "bytes", after.media[0].encoded_bytes)
r = report(hero, PolicySet.of(FeatureKind.OVERSIZED_IMAGES), vp, SLOW_4G)
print(f"bytes saved {r.bytes_saved_estimate}, LCP {r.lcp_estimate_s.pre:.2f} s -> {r.lcp_estimate_s.post:.2f} s")
print("diagnostics:", dict(after.diagnostics))
