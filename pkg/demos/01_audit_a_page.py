"""
Auditing a page for policy violations
=====================================

Build a small page on disk, fetch it, and list what a full policy set
would flag.
"""
import tempfile
from pathlib import Path

from docpolicy import audit, default_policy_set, extract_snapshot, fetch_page
from docpolicy.synth import make_jpeg, make_png

site = Path(tempfile.mkdtemp())
(site / "hero.jpg").write_bytes(make_jpeg(2400, 1600, 650_000))
(site / "logo.png").write_bytes(make_png(120, 40))
(site / "style.css").write_text(
    '@font-face { font-family: Brand; src: url(brand.woff2); font-display: swap; }\n'
    ".menu { transition: height .3s; }\n"
)
(site / "brand.woff2").write_bytes(b"wOF2" + bytes(30_000))
(site / "app.js").write_bytes(b"void 0;" * 2000)
(site / "index.html").write_text("""<!doctype html>
<html><head>
<link rel="stylesheet" href="style.css">
<script src="app.js"></script>
</head><body>
<img src="hero.jpg" width="360" height="240">
<img src="logo.png">
<p>Hello.</p>
</body></html>
""")

# fetch_page takes a URL, a file path or a directory holding index.html
url, html, resources = fetch_page(str(site))
snapshot = extract_snapshot(html, url, resources)
print(f"{len(snapshot.media)} media, {len(snapshot.scripts)} scripts, "
      f"{len(snapshot.fonts)} fonts, {len(snapshot.animations)} animations")

for v in audit(snapshot, default_policy_set()):
    where = "above the fold" if v.above_fold else ""
    extra = f"measured {v.measured:.1f} > {v.threshold:.1f}" if v.measured is not None else ""
    print(f"{v.feature_kind.value:28s} {v.element_class.value}#{v.element_id} {extra} {where}")
