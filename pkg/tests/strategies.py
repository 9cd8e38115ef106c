"""Hypothesis strategies for model values."""
from decimal import Decimal

from hypothesis import strategies as st

from docpolicy.model import (
    AnimationRule,
    FeatureKind,
    FontFaceRule,
    MediaElement,
    PageSnapshot,
    PolicyFeature,
    PolicySet,
    ScriptElement,
)

PROPERTY_POOL = ["left", "top", "width", "height", "opacity", "transform", "color",
                 "margin-top", "padding", "font-size", "background-color", "flex-basis"]

parameters = st.integers(min_value=1, max_value=20_000).map(lambda n: Decimal(n).scaleb(-3))


@st.composite
def media_elements(draw, media_id):
    kind = draw(st.sampled_from(["image", "video"]))
    dw = draw(st.none() | st.integers(0, 900))
    dh = draw(st.none() | st.integers(0, 900))
    natural = draw(st.none() | st.tuples(st.integers(1, 4000), st.integers(1, 4000)))
    nbytes = draw(st.none() | st.integers(0, 2_000_000))
    enc = "unknown" if nbytes is None else draw(st.sampled_from(["lossy", "lossless", "unknown"]))
    return MediaElement(
        id=media_id, media_kind=kind, declared_width_css_px=dw, declared_height_css_px=dh,
        natural_width_px=natural[0] if natural else None,
        natural_height_px=natural[1] if natural else None,
        encoded_bytes=nbytes, encoding_class=enc, source_url=f"m{media_id}",
    )


@st.composite
def scripts(draw, script_id):
    external = draw(st.booleans())
    return ScriptElement(
        id=script_id, external=external, source_url=f"s{script_id}.js" if external else None,
        has_async=draw(st.booleans()), has_defer=draw(st.booleans()), is_module=draw(st.booleans()),
        encoded_bytes=draw(st.none() | st.integers(0, 500_000)),
    )


fonts = st.builds(
    FontFaceRule,
    family=st.sampled_from(["A", "B", "C"]),
    source_url=st.just("f.woff2"),
    font_display=st.sampled_from(["auto", "block", "swap", "fallback", "optional"]),
    encoded_bytes=st.none() | st.integers(0, 200_000),
)

animations = st.builds(
    AnimationRule,
    selector=st.sampled_from([".a", "@keyframes k", "div"]),
    animated_properties=st.frozensets(st.sampled_from(PROPERTY_POOL), min_size=1, max_size=3),
    mechanism=st.sampled_from(["keyframes", "transition"]),
)


@st.composite
def snapshots(draw, max_media=6):
    n_media = draw(st.integers(0, max_media))
    n_scripts = draw(st.integers(0, 4))
    return PageSnapshot(
        url="http://example.test/",
        html_bytes=draw(st.integers(0, 200_000)),
        media=tuple(draw(media_elements(i)) for i in range(n_media)),
        scripts=tuple(draw(scripts(i)) for i in range(n_scripts)),
        fonts=tuple(draw(st.lists(fonts, max_size=3))),
        animations=tuple(draw(st.lists(animations, max_size=3))),
    )


@st.composite
def policy_sets(draw):
    kinds = draw(st.sets(st.sampled_from(list(FeatureKind))))
    feats = {}
    for k in kinds:
        feats[k] = PolicyFeature(k, draw(parameters) if k.parameterized else None)
    strict = feats.get(FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP)
    loose = feats.get(FeatureKind.LOSSLESS_IMAGES_MAX_BPP)
    if strict and loose and strict.parameter > loose.parameter:
        feats[FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP] = PolicyFeature(strict.kind, loose.parameter)
    return PolicySet(tuple(feats.values()))
