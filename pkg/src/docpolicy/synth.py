"""Synthetic pages that each violate exactly one feature, N times.

Image-class pages carry 600-700KB images, matching the unoptimized images
used in controlled policy experiments. Every page audits clean for every
other feature under the default policy set and viewport.
"""
from __future__ import annotations

import io
import struct
import zlib
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Dict, Optional

from .extract import ResourceRecord, extract_snapshot
from .fetch import record_for
from .model import FeatureKind, FontDisplay, PageSnapshot

SYNTHETIC_BASE_URL = "http://synthetic.test/"
DEFAULT_IMAGE_BYTES = 650_000

# (format, natural width, natural height, declared box or None). Chosen so
# that with the default viewport (360 css px @3x) and default parameters
# only the named check fires:
#   oversized: 2400 > 360*3*2.0 = 2160
#   lossy:     650000*8 / (1200*900) = 4.8 bpp > 0.5
#   lossless:  (650000-10240)*8 / (1200*900) = 4.7 bpp > 1.0
#   strict:    650000*8 / (2000*2580) = 1.008 > 1.0, while the allowance
#              brings the non-strict figure to 0.992
#   unsized:   (650000-10240)*8 / (1600*3400) = 0.94 and the strict
#              figure 0.956, both under 1.0
IMAGE_PLANS = {
    FeatureKind.OVERSIZED_IMAGES: ("jpeg", 2400, 1600, (360, 240)),
    FeatureKind.LOSSY_IMAGES_MAX_BPP: ("jpeg", 1200, 900, (360, 270)),
    FeatureKind.LOSSLESS_IMAGES_MAX_BPP: ("png", 1200, 900, (360, 270)),
    FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP: ("png", 2000, 2580, (360, 464)),
    FeatureKind.UNSIZED_MEDIA: ("png", 1600, 3400, None),
}

FONT_BYTES = 48_000
SCRIPT_BYTES = 16_384


def _png_chunk(tag: bytes, data: bytes) -> bytes:
    return struct.pack(">I", len(data)) + tag + data + struct.pack(">I", zlib.crc32(tag + data) & 0xFFFFFFFF)


def make_png(width: int, height: int, target_bytes: Optional[int] = None, shade: int = 200) -> bytes:
    """A valid solid grayscale PNG, padded with a private ancillary chunk
    to exactly ``target_bytes`` when given."""
    row = b"\x00" + bytes([shade]) * width
    raw = zlib.compress(row * height, 9)
    head = b"\x89PNG\r\n\x1a\n" + _png_chunk(b"IHDR", struct.pack(">IIBBBBB", width, height, 8, 0, 0, 0, 0))
    body = _png_chunk(b"IDAT", raw)
    tail = _png_chunk(b"IEND", b"")
    data = head + body + tail
    if target_bytes is not None:
        pad = target_bytes - len(data) - 12
        if pad < 0:
            raise ValueError(f"PNG {width}x{height} needs more than {target_bytes} bytes")
        data = head + body + _png_chunk(b"prVt", b"\x00" * pad) + tail
    return data


def make_jpeg(width: int, height: int, target_bytes: Optional[int] = None, shade: int = 128) -> bytes:
    """A valid solid JPEG, padded with comment segments to exactly
    ``target_bytes`` when given."""
    from PIL import Image

    buf = io.BytesIO()
    Image.new("L", (width, height), shade).save(buf, "JPEG", quality=75)
    data = buf.getvalue()
    if target_bytes is None:
        return data
    pad = target_bytes - len(data)
    if pad < 0:
        raise ValueError(f"JPEG {width}x{height} needs more than {target_bytes} bytes")
    segments = []
    while pad > 0:
        size = min(pad, 65537)  # 2 marker + 2 length + up to 65533 payload
        if 0 < pad - size < 4:
            size = pad - 4
        if size < 4:
            raise ValueError("cannot pad JPEG by fewer than 4 bytes")
        segments.append(b"\xff\xfe" + struct.pack(">H", size - 2) + b"\x00" * (size - 4))
        pad -= size
    return data[:2] + b"".join(segments) + data[2:]


@lru_cache(maxsize=16)
def _image(fmt: str, w: int, h: int, size: int) -> bytes:
    return make_png(w, h, size) if fmt == "png" else make_jpeg(w, h, size)


@dataclass
class SyntheticPage:
    feature: FeatureKind
    count: int
    html: bytes
    files: Dict[str, bytes] = field(default_factory=dict)

    def resources(self, base_url: str = SYNTHETIC_BASE_URL) -> Dict[str, ResourceRecord]:
        out = {}
        for path, body in self.files.items():
            url = base_url + path
            out[url] = record_for(url, body, keep_text=path.endswith(".css"))
        return out

    def snapshot(self, base_url: str = SYNTHETIC_BASE_URL) -> PageSnapshot:
        return extract_snapshot(self.html, base_url, self.resources(base_url))

    def write(self, out_dir) -> Path:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "index.html").write_bytes(self.html)
        for path, body in self.files.items():
            target = out / path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(body)
        return out / "index.html"


_PAGE = """<!doctype html>
<html>
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>{title}</title>
<style>
body {{ margin: 0; font-family: sans-serif; }}
{style}
</style>
{head}
</head>
<body>
{body}
<p>Synthetic test page: {title}.</p>
</body>
</html>
"""


def generate_synthetic(feature_kind, n: int = 1, *, font_display: Optional[str] = None,
                       image_bytes: int = DEFAULT_IMAGE_BYTES) -> SyntheticPage:
    """A page violating ``feature_kind`` exactly ``n`` times.

    ``font_display`` overrides the ``font-display`` of generated font faces
    (``optional`` gives a compliant control page).
    """
    kind = FeatureKind(feature_kind)
    if n < 0:
        raise ValueError("n must be non-negative")
    files: Dict[str, bytes] = {}
    style, head, body = [], [], []

    if kind in IMAGE_PLANS:
        fmt, w, h, box = IMAGE_PLANS[kind]
        data = _image(fmt, w, h, image_bytes)
        for i in range(n):
            path = f"img/{kind.value}-{i}.{'jpg' if fmt == 'jpeg' else 'png'}"
            files[path] = data
            size = f' width="{box[0]}" height="{box[1]}"' if box else ""
            body.append(f'<img src="{path}"{size} alt="test image {i}">')
    elif kind is FeatureKind.FONT_DISPLAY_LATE_SWAP:
        display = FontDisplay(font_display or "swap").value
        for i in range(n):
            path = f"fonts/heavy-{i}.woff2"
            files[path] = b"wOF2" + bytes(FONT_BYTES - 4)
            style.append(
                f'@font-face {{ font-family: "Heavy{i}"; src: url("{path}") format("woff2"); '
                f"font-display: {display}; }}\n.f{i} {{ font-family: \"Heavy{i}\", serif; }}"
            )
            body.append(f'<p class="f{i}">Text set in web font {i}.</p>')
    elif kind is FeatureKind.LAYOUT_ANIMATIONS:
        for i in range(n):
            style.append(
                f"@keyframes slide{i} {{ from {{ left: 0; }} to {{ left: 200px; }} }}\n"
                f".a{i} {{ position: relative; animation: slide{i} 2s infinite alternate; }}"
            )
            body.append(f'<div class="a{i}">Animated block {i}</div>')
    elif kind is FeatureKind.BLOCKING_SCRIPT:
        for i in range(n):
            path = f"js/block-{i}.js"
            stub = f"/* blocking script {i} */\nvar x{i} = {i};\n".encode()
            files[path] = stub + b" " * (SCRIPT_BYTES - len(stub) - 1) + b"\n"
            head.append(f'<script src="{path}"></script>')
    else:  # pragma: no cover - FeatureKind is closed
        raise ValueError(f"unknown feature {kind}")

    html = _PAGE.format(
        title=f"{kind.value} x{n}",
        style="\n".join(style),
        head="\n".join(head),
        body="\n".join(body),
    ).encode()
    return SyntheticPage(kind, n, html, files)


def generate_all(out_dir, n: int = 1) -> Dict[FeatureKind, Path]:
    return {k: generate_synthetic(k, n).write(Path(out_dir) / k.value) for k in FeatureKind}
