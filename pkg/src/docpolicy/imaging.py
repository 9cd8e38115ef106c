"""Read image dimensions and lossy/lossless class from container headers.

Only the leading bytes of the file are inspected; nothing is decoded.
"""
from __future__ import annotations

import struct
from typing import NamedTuple, Optional, Tuple

from .model import EncodingClass


class ImageInfo(NamedTuple):
    format: str
    dims: Optional[Tuple[int, int]]
    encoding: EncodingClass


UNKNOWN = ImageInfo("unknown", None, EncodingClass.UNKNOWN)

# SOFn markers carrying frame dimensions (excludes DHT/JPG/DAC at C4, C8, CC).
_JPEG_SOF = {0xC0, 0xC1, 0xC2, 0xC3, 0xC5, 0xC6, 0xC7, 0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF}


def _jpeg_dims(data: bytes) -> Optional[Tuple[int, int]]:
    i = 2
    n = len(data)
    while i + 4 <= n:
        if data[i] != 0xFF:
            return None
        marker = data[i + 1]
        if marker == 0xFF:  # fill byte
            i += 1
            continue
        if marker in (0x01,) or 0xD0 <= marker <= 0xD9:
            i += 2
            continue
        (length,) = struct.unpack(">H", data[i + 2:i + 4])
        if length < 2:
            return None
        if marker in _JPEG_SOF:
            if i + 9 > n:
                return None
            h, w = struct.unpack(">HH", data[i + 5:i + 9])
            return (w, h) if w and h else None
        i += 2 + length
    return None


def _png_dims(data: bytes) -> Optional[Tuple[int, int]]:
    if len(data) < 24 or data[12:16] != b"IHDR":
        return None
    w, h = struct.unpack(">II", data[16:24])
    return (w, h) if w and h else None


def _gif_dims(data: bytes) -> Optional[Tuple[int, int]]:
    if len(data) < 10:
        return None
    w, h = struct.unpack("<HH", data[6:10])
    return (w, h) if w and h else None


def _webp(data: bytes) -> ImageInfo:
    # RIFF container: walk chunks until the bitstream chunk is found.
    i = 12
    dims = None
    while i + 8 <= len(data):
        tag = data[i:i + 4]
        (size,) = struct.unpack("<I", data[i + 4:i + 8])
        body = data[i + 8:i + 8 + size]
        if tag == b"VP8X" and len(body) >= 10:
            w = 1 + int.from_bytes(body[4:7], "little")
            h = 1 + int.from_bytes(body[7:10], "little")
            dims = (w, h)
        elif tag == b"VP8 ":
            if dims is None and len(body) >= 10 and body[3:6] == b"\x9d\x01\x2a":
                w, h = struct.unpack("<HH", body[6:10])
                dims = (w & 0x3FFF, h & 0x3FFF)
            return ImageInfo("webp", dims, EncodingClass.LOSSY)
        elif tag == b"VP8L":
            if dims is None and len(body) >= 5 and body[0] == 0x2F:
                bits = int.from_bytes(body[1:5], "little")
                dims = ((bits & 0x3FFF) + 1, ((bits >> 14) & 0x3FFF) + 1)
            return ImageInfo("webp", dims, EncodingClass.LOSSLESS)
        i += 8 + size + (size & 1)
    return ImageInfo("webp", dims, EncodingClass.UNKNOWN)


def sniff_image(data: bytes) -> ImageInfo:
    """Identify an image by its magic bytes.

    JPEG is lossy; PNG and GIF are lossless; WebP follows its VP8/VP8L
    chunk. Anything else, or a truncated header, yields unknown fields.
    """
    data = bytes(data[:1 << 20])
    try:
        if data[:3] == b"\xff\xd8\xff":
            return ImageInfo("jpeg", _jpeg_dims(data), EncodingClass.LOSSY)
        if data[:8] == b"\x89PNG\r\n\x1a\n":
            return ImageInfo("png", _png_dims(data), EncodingClass.LOSSLESS)
        if data[:6] in (b"GIF87a", b"GIF89a"):
            return ImageInfo("gif", _gif_dims(data), EncodingClass.LOSSLESS)
        if data[:4] == b"RIFF" and data[8:12] == b"WEBP":
            return _webp(data)
    except struct.error:
        pass
    return UNKNOWN
