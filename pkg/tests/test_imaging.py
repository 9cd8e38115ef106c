"""Header sniffing checked against Pillow, which fully decodes the files."""
import io

import pytest
from hypothesis import given, strategies as st
from PIL import Image

from docpolicy.imaging import sniff_image
from docpolicy.model import EncodingClass
from docpolicy.synth import make_jpeg, make_png


def encode(fmt, size, **kw):
    buf = io.BytesIO()
    mode = "RGBA" if kw.pop("alpha", False) else "RGB"
    Image.new(mode, size, (10, 20, 30)).save(buf, fmt, **kw)
    return buf.getvalue()


@pytest.mark.parametrize("fmt,kw,expected", [
    ("JPEG", {}, EncodingClass.LOSSY),
    ("JPEG", {"progressive": True}, EncodingClass.LOSSY),
    ("PNG", {}, EncodingClass.LOSSLESS),
    ("GIF", {}, EncodingClass.LOSSLESS),
    ("WEBP", {"lossless": False}, EncodingClass.LOSSY),
    ("WEBP", {"lossless": True}, EncodingClass.LOSSLESS),
    ("WEBP", {"lossless": False, "alpha": True}, EncodingClass.LOSSY),
    ("WEBP", {"lossless": True, "alpha": True}, EncodingClass.LOSSLESS),
])
@pytest.mark.parametrize("size", [(1, 1), (37, 901), (1200, 33)])
def test_matches_pillow(fmt, kw, expected, size):
    data = encode(fmt, size, **kw)
    info = sniff_image(data)
    assert info.dims == Image.open(io.BytesIO(data)).size
    assert info.encoding is expected


def test_magic_bytes_beat_file_naming():
    assert sniff_image(encode("PNG", (5, 7))).format == "png"


def test_unknown_and_truncated():
    assert sniff_image(b"").encoding is EncodingClass.UNKNOWN
    assert sniff_image(b"<svg xmlns='http://www.w3.org/2000/svg'/>").dims is None
    head = encode("JPEG", (50, 60))[:20]
    info = sniff_image(head)
    assert info.format == "jpeg" and info.dims is None


def test_padded_generators_hit_exact_sizes():
    png = make_png(1600, 3400, 650_000)
    jpg = make_jpeg(1200, 900, 650_000)
    assert len(png) == len(jpg) == 650_000
    assert Image.open(io.BytesIO(png)).size == (1600, 3400)
    assert Image.open(io.BytesIO(jpg)).size == (1200, 900)
    Image.open(io.BytesIO(jpg)).load()  # padding keeps the stream decodable
    Image.open(io.BytesIO(png)).load()


@given(st.binary(max_size=256))
def test_never_raises(data):
    sniff_image(data)
    sniff_image(b"\xff\xd8\xff" + data)
    sniff_image(b"RIFF\x00\x00\x00\x00WEBP" + data)
