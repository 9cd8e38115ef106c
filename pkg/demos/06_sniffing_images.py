"""
Image sniffing and bits per pixel
=================================

Dimensions and encoding class come from the file header alone; bits per
pixel is the encoded size against the pixel count.
"""
import io

from PIL import Image

from docpolicy import MediaElement
from docpolicy.detect import bits_per_pixel
from docpolicy.imaging import sniff_image
from docpolicy.synth import make_jpeg, make_png

samples = {"jpeg": make_jpeg(800, 600, 90_000), "png": make_png(128, 128, 12_288)}
buf = io.BytesIO()
Image.new("RGB", (64, 48), "teal").save(buf, "WEBP", lossless=True)
samples["webp"] = buf.getvalue()
samples["junk"] = b"definitely not an image"

for name, data in samples.items():
    info = sniff_image(data)
    if info.dims is None:
        print(f"{name:5s} not recognised")
        continue
    m = MediaElement(0, natural_width_px=info.dims[0], natural_height_px=info.dims[1],
                     encoded_bytes=len(data), encoding_class=info.encoding)
    line = f"{name:5s} {info.format:5s} {info.dims} {info.encoding.value:8s} {bits_per_pixel(m):.3f} bpp"
    if info.encoding.value == "lossless":
        # lossless-images-max-bpp forgives the first 10 KiB
        line += f", {bits_per_pixel(m, 10240):.3f} after the allowance"
    print(line)
