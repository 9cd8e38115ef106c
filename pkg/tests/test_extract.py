import random

from hypothesis import given, settings, strategies as st

from docpolicy.extract import ResourceRecord, extract_snapshot
from docpolicy.model import EncodingClass, FontDisplay, MediaKind

BASE = "http://example.test/page/"


def test_image_joined_with_resource():
    res = {BASE + "a.jpg": ResourceRecord(BASE + "a.jpg", 60000, "image/jpeg", (400, 300), EncodingClass.LOSSY)}
    snap = extract_snapshot(b'<img src="a.jpg">', BASE, res)
    (m,) = snap.media
    assert (m.declared_width_css_px, m.declared_height_css_px) == (None, None)
    assert (m.natural_width_px, m.natural_height_px) == (400, 300)
    assert m.encoded_bytes == 60000 and m.encoding_class is EncodingClass.LOSSY
    assert m.source_url == "a.jpg"


def test_deferred_script():
    (s,) = extract_snapshot(b'<script src="b.js" defer></script>', BASE).scripts
    assert s.external and s.has_defer and not s.has_async and not s.is_module
    assert s.source_url == "b.js"


def test_font_face_without_display_is_auto():
    (f,) = extract_snapshot(b"<style>@font-face{font-family:F;src:url(f.woff2)}</style>", BASE).fonts
    assert f.family == "F" and f.font_display is FontDisplay.AUTO


def test_attribute_beats_style():
    html = b'<img src=a.png width="120" style="width: 300px; height: 40px">'
    (m,) = extract_snapshot(html, BASE).media
    assert (m.declared_width_css_px, m.declared_height_css_px) == (120, 40)


def test_relative_sizes_are_not_declared():
    html = b'<img src=a.png style="width: 50%; height: 10vh"><img src=b.png width="100%" height=80>'
    a, b = extract_snapshot(html, BASE).media
    assert (a.declared_width_css_px, a.declared_height_css_px) == (None, None)
    assert (b.declared_width_css_px, b.declared_height_css_px) == (None, 80)


def test_video_with_source_child_and_order():
    html = b"""<img src=1.png><video controls><source src="v.mp4" type="video/mp4"></video>
               <img src=2.png><script>inline()</script><script type=module src=m.js></script>
               <script type="application/ld+json">{}</script><script async src=x.js></script>"""
    snap = extract_snapshot(html, BASE)
    assert [m.media_kind for m in snap.media] == [MediaKind.IMAGE, MediaKind.VIDEO, MediaKind.IMAGE]
    assert [m.id for m in snap.media] == [0, 1, 2]
    assert snap.media[1].source_url == "v.mp4"
    assert [(s.external, s.is_module, s.has_async) for s in snap.scripts] == [
        (False, False, False), (True, True, False), (True, False, True)]
    assert snap.diagnostic("non_js_script_skipped") == 1


def test_picture_and_srcset_use_first_candidate():
    html = b"""<picture><source srcset="big.webp 2x, small.webp 1x"><img src="fallback.jpg"></picture>
               <img srcset="a.png 1x, b.png 2x">"""
    snap = extract_snapshot(html, BASE)
    assert [m.source_url for m in snap.media] == ["big.webp", "a.png"]
    assert snap.diagnostic("picture_first_candidate") == 1
    assert snap.diagnostic("srcset_first_candidate") == 1


def test_animations_from_style_and_inline():
    html = b"""<style>@keyframes k { to { left: 10px } } .x { transition: opacity 1s }</style>
               <div style="transition: width 1s"></div>"""
    snap = extract_snapshot(html, BASE)
    assert [(a.selector, sorted(a.animated_properties), a.mechanism.value) for a in snap.animations] == [
        ("@keyframes k", ["left"], "keyframes"),
        (".x", ["opacity"], "transition"),
        ("div[style]", ["width"], "transition"),
    ]


def test_external_stylesheet_fonts_resolve_against_sheet():
    sheet = BASE + "css/site.css"
    font = BASE + "fonts/f.woff2"
    res = {
        sheet: ResourceRecord(sheet, 100, "text/css", text="@font-face{font-family:G;src:url(../fonts/f.woff2);font-display:swap}"),
        font: ResourceRecord(font, 4242, "font/woff2"),
    }
    snap = extract_snapshot(b'<link rel="stylesheet" href="css/site.css">', BASE, res)
    (f,) = snap.fonts
    assert f.font_display is FontDisplay.SWAP and f.encoded_bytes == 4242


def test_html_bytes_and_url():
    html = b"<p>hello</p>"
    snap = extract_snapshot(html, BASE)
    assert snap.html_bytes == len(html) and snap.url == BASE


def test_deterministic():
    html = b'<img src=a.png><script src=s.js></script><style>@keyframes q{to{top:1px}}</style>'
    assert extract_snapshot(html, BASE) == extract_snapshot(html, BASE)


def test_malformed_markup_is_tolerated():
    snap = extract_snapshot(b"<img src='a.png' width=<<<><script src=x.js <style>@font-face{", BASE)
    assert snap.html_bytes > 0


@settings(max_examples=300)
@given(st.binary(max_size=2000))
def test_total_on_random_bytes(data):
    extract_snapshot(data, BASE)


@settings(max_examples=200)
@given(st.lists(st.sampled_from([
    b"<img", b" src=a.png", b">", b"<video>", b"</video>", b"<source src=v>", b"<script", b"</script>",
    b"<style>", b"</style>", b"@font-face{", b"}", b"width=3", b"<picture>", b"\xff\xfe", b"<!--", b"-->",
    b"<![CDATA[", b"&amp;", b"@keyframes a{", b"left:1px", b"transition:", b"'", b'"',
]), max_size=60))
def test_total_on_tag_soup(parts):
    snap = extract_snapshot(b"".join(parts), BASE)
    ids = [m.id for m in snap.media]
    assert ids == sorted(set(ids))


def test_document_order_preserved():
    rng = random.Random(7)
    tags = [rng.choice(["img", "video"]) for _ in range(30)]
    html = "".join(f'<{t} src="{i}.x"></{t}>' if t == "video" else f'<img src="{i}.x">' for i, t in enumerate(tags))
    snap = extract_snapshot(html.encode(), BASE)
    assert [m.source_url for m in snap.media] == [f"{i}.x" for i in range(30)]
    assert [m.media_kind.value for m in snap.media] == ["image" if t == "img" else t for t in tags]
