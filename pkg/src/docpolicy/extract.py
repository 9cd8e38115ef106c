"""Turn raw HTML plus fetched-resource metadata into a PageSnapshot."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from html.parser import HTMLParser
from typing import Dict, List, Mapping, Optional, Tuple
from urllib.parse import urljoin

from . import css
from .model import (
    AnimationRule,
    EncodingClass,
    FontDisplay,
    FontFaceRule,
    MediaElement,
    MediaKind,
    PageSnapshot,
    ScriptElement,
)

_JS_TYPES = {
    "", "text/javascript", "application/javascript", "application/x-javascript",
    "text/ecmascript", "application/ecmascript", "module",
}


@dataclass(frozen=True)
class ResourceRecord:
    url: str
    bytes: int
    content_type: str = ""
    image_dims: Optional[Tuple[int, int]] = None
    image_encoding: EncodingClass = EncodingClass.UNKNOWN
    # Decoded text, kept only for stylesheets.
    text: Optional[str] = None


def _style_map(style: Optional[str]) -> Dict[str, str]:
    if not style:
        return {}
    return dict(css.declarations(style))


def first_srcset_candidate(srcset: Optional[str]) -> Optional[str]:
    if not srcset:
        return None
    first = srcset.split(",")[0].strip()
    return first.split()[0] if first else None


class _Collector(HTMLParser):
    def __init__(self, diagnostics: Counter):
        super().__init__(convert_charrefs=True)
        self.diagnostics = diagnostics
        self.media: List[dict] = []
        self.scripts: List[dict] = []
        self.stylesheets: List[str] = []  # external hrefs, in order
        self.style_blocks: List[str] = []
        self.inline_transitions: List[Tuple[str, List[str]]] = []
        self._in_style = False
        self._style_buf: List[str] = []
        self._picture_src: Optional[str] = None
        self._in_picture = False
        self._open_video: Optional[dict] = None

    def handle_starttag(self, tag, attrs):
        a = {k.lower(): (v if v is not None else "") for k, v in attrs}
        if "style" in a:
            props = css.rule_transitions(a["style"])
            if props:
                self.inline_transitions.append((f"{tag}[style]", props))
        if tag == "img":
            self._media(MediaKind.IMAGE, a, self._image_src(a))
        elif tag == "video":
            entry = self._media(MediaKind.VIDEO, a, a.get("src") or None)
            self._open_video = entry
        elif tag == "source":
            if self._open_video is not None and not self._open_video["src"]:
                self._open_video["src"] = a.get("src") or None
            elif self._in_picture and self._picture_src is None:
                cand = first_srcset_candidate(a.get("srcset"))
                if cand:
                    self._picture_src = cand
        elif tag == "picture":
            self._in_picture = True
            self._picture_src = None
        elif tag == "script":
            kind = a.get("type", "").strip().lower()
            if kind not in _JS_TYPES:
                self.diagnostics["non_js_script_skipped"] += 1
                return
            src = a.get("src")
            self.scripts.append({
                "src": src if src else None,
                "async": "async" in a,
                "defer": "defer" in a,
                "module": kind == "module",
            })
        elif tag == "style":
            self._in_style = True
            self._style_buf = []
        elif tag == "link":
            rel = a.get("rel", "").lower().split()
            if "stylesheet" in rel and a.get("href"):
                self.stylesheets.append(a["href"])

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)
        if tag == "video":
            self._open_video = None

    def handle_endtag(self, tag):
        if tag == "style" and self._in_style:
            self.style_blocks.append("".join(self._style_buf))
            self._in_style = False
        elif tag == "video":
            self._open_video = None
        elif tag == "picture":
            self._in_picture = False
            self._picture_src = None

    def handle_data(self, data):
        if self._in_style:
            self._style_buf.append(data)

    def close(self):
        super().close()
        if self._in_style:
            self.diagnostics["unterminated_style"] += 1
            self.style_blocks.append("".join(self._style_buf))
            self._in_style = False

    def _image_src(self, a) -> Optional[str]:
        if self._in_picture and self._picture_src:
            self.diagnostics["picture_first_candidate"] += 1
            return self._picture_src
        if a.get("src"):
            return a["src"]
        cand = first_srcset_candidate(a.get("srcset"))
        if cand:
            self.diagnostics["srcset_first_candidate"] += 1
        return cand

    def _media(self, kind, a, src) -> dict:
        style = _style_map(a.get("style"))
        width = css.attr_length(a.get("width"))
        height = css.attr_length(a.get("height"))
        if width is None:
            width = css.px_length(style.get("width"))
        if height is None:
            height = css.px_length(style.get("height"))
        entry = {"kind": kind, "src": src, "width": width, "height": height}
        self.media.append(entry)
        return entry


def _decode(html: bytes) -> str:
    if isinstance(html, str):
        return html
    for enc in ("utf-8",):
        try:
            return html.decode(enc)
        except UnicodeDecodeError:
            pass
    return html.decode("latin-1")


def referenced_urls(html: bytes, base_url: str) -> Dict[str, List[str]]:
    """Absolute URLs of media, scripts and stylesheets in ``html``, grouped by
    role. Fonts are found later, inside the stylesheets."""
    diag: Counter = Counter()
    p = _parse(_decode(html), diag)
    join = lambda u: urljoin(base_url, u)  # noqa: E731
    fonts = []
    for block in p.style_blocks:
        found, _ = css.parse_stylesheet(block, diag)
        fonts.extend(join(f["src"]) for f in found)
    return {
        "media": [join(m["src"]) for m in p.media if m["src"]],
        "scripts": [join(s["src"]) for s in p.scripts if s["src"]],
        "stylesheets": [join(h) for h in p.stylesheets],
        "fonts": fonts,
    }


def stylesheet_font_urls(text: str, sheet_url: str) -> List[str]:
    found, _ = css.parse_stylesheet(text)
    return [urljoin(sheet_url, f["src"]) for f in found]


def _parse(text: str, diagnostics: Counter) -> _Collector:
    p = _Collector(diagnostics)
    try:
        p.feed(text)
        p.close()
    except Exception:  # html.parser is lenient, but stay total regardless
        diagnostics["html_parser_error"] += 1
    return p


def extract_snapshot(
    html: bytes,
    base_url: str,
    resources: Optional[Mapping[str, ResourceRecord]] = None,
) -> PageSnapshot:
    """Build a PageSnapshot from markup and resource metadata.

    Never raises on bad input: anything unparseable is skipped and tallied
    in the snapshot's diagnostics. Media ``source_url`` keeps the value as
    written in the markup; resolution against ``base_url`` is only used to
    join ``resources``.
    """
    resources = resources or {}
    diag: Counter = Counter()
    p = _parse(_decode(html), diag)

    def lookup(url: Optional[str], base: str = base_url) -> Optional[ResourceRecord]:
        if not url:
            return None
        try:
            rec = resources.get(urljoin(base, url))
        except ValueError:
            diag["bad_url"] += 1
            return None
        if rec is None:
            diag["resource_missing"] += 1
        return rec

    media = []
    for i, m in enumerate(p.media):
        rec = lookup(m["src"])
        dims = rec.image_dims if rec is not None and m["kind"] is MediaKind.IMAGE else None
        encoded = rec.bytes if rec is not None else None
        encoding = rec.image_encoding if rec is not None and m["kind"] is MediaKind.IMAGE else EncodingClass.UNKNOWN
        media.append(MediaElement(
            id=i,
            media_kind=m["kind"],
            declared_width_css_px=m["width"],
            declared_height_css_px=m["height"],
            natural_width_px=dims[0] if dims else None,
            natural_height_px=dims[1] if dims else None,
            encoded_bytes=encoded,
            encoding_class=encoding if encoded is not None else EncodingClass.UNKNOWN,
            source_url=m["src"] or "",
        ))

    scripts = []
    for i, s in enumerate(p.scripts):
        rec = lookup(s["src"])
        scripts.append(ScriptElement(
            id=i,
            external=s["src"] is not None,
            source_url=s["src"],
            has_async=s["async"],
            has_defer=s["defer"],
            is_module=s["module"],
            encoded_bytes=rec.bytes if rec is not None else None,
        ))

    fonts: List[FontFaceRule] = []
    animations: List[AnimationRule] = []
    sheets = [(block, base_url) for block in p.style_blocks]
    for href in p.stylesheets:
        rec = lookup(href)
        if rec is not None and rec.text is not None:
            sheets.append((rec.text, urljoin(base_url, href)))
    for text, sheet_base in sheets:
        found_fonts, found_anims = css.parse_stylesheet(text, diag)
        for f in found_fonts:
            try:
                display = FontDisplay(f["display"])
            except ValueError:
                diag["unknown_font_display"] += 1
                display = FontDisplay.AUTO
            rec = lookup(f["src"], sheet_base)
            fonts.append(FontFaceRule(
                family=f["family"],
                source_url=f["src"],
                font_display=display,
                encoded_bytes=rec.bytes if rec is not None else None,
            ))
        for selector, props, mechanism in found_anims:
            animations.append(AnimationRule(selector, frozenset(props), mechanism))
    for selector, props in p.inline_transitions:
        animations.append(AnimationRule(selector, frozenset(props), "transition"))

    return PageSnapshot(
        url=base_url,
        html_bytes=len(html),
        media=tuple(media),
        scripts=tuple(scripts),
        fonts=tuple(fonts),
        animations=tuple(animations),
        diagnostics=diag,
    )
