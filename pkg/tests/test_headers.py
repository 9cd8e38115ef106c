from decimal import Decimal

import http_sfv
import pytest
from hypothesis import given, settings, strategies as st

from docpolicy.headers import (
    HeaderParseError,
    format_decimal,
    merge_values,
    parse_headers,
    parse_permissions_policy,
    serialize_headers,
    serialize_permissions_policy,
    serialize_value,
)
from docpolicy.model import FeatureKind as F, PolicyError, PolicySet, default_policy_set
from strategies import policy_sets


def test_golden_unsized_media():
    assert serialize_headers(PolicySet.of(F.UNSIZED_MEDIA)) == [("Document-Policy", "unsized-media=?0")]


def test_golden_sorted_pair():
    ps = PolicySet.of((F.OVERSIZED_IMAGES, "2.0"), F.BLOCKING_SCRIPT)
    assert serialize_headers(ps) == [("Document-Policy", "blocking-script=?0, oversized-images=2.0")]


def test_golden_all_defaults():
    assert serialize_value(default_policy_set()) == (
        "blocking-script=?0, font-display-late-swap=?0, layout-animations=?0, "
        "lossless-images-max-bpp=1.0, lossless-images-strict-max-bpp=1.0, "
        "lossy-images-max-bpp=0.5, oversized-images=2.0, unsized-media=?0"
    )


def test_empty_policy_emits_nothing():
    assert serialize_headers(PolicySet()) == []


def test_report_only_name():
    assert serialize_headers(PolicySet.of(F.UNSIZED_MEDIA), report_only=True) == [
        ("Document-Policy-Report-Only", "unsized-media=?0")]


@pytest.mark.parametrize("value,text", [
    ("2", "2.0"), ("2.000", "2.0"), ("0.50", "0.5"), ("0.125", "0.125"), ("10", "10.0"), ("1E+1", "10.0"),
])
def test_format_decimal(value, text):
    assert format_decimal(Decimal(value)) == text


@pytest.mark.parametrize("value", ["0.0001", "1234567890123", "NaN"])
def test_format_decimal_rejects(value):
    with pytest.raises(PolicyError):
        format_decimal(Decimal(value))


def test_parse_golden():
    assert parse_headers("unsized-media=?0") == PolicySet.of(F.UNSIZED_MEDIA)
    assert parse_headers("oversized-images=2.0, blocking-script=?0") == \
        PolicySet.of(F.BLOCKING_SCRIPT, (F.OVERSIZED_IMAGES, 2))


def test_unknown_feature_passes_through():
    ps = parse_headers("bogus-feature=?0")
    assert ps.features == () and ps.unknown == (("bogus-feature", "?0"),)
    assert serialize_value(ps) == "bogus-feature=?0"


def test_unrestricted_boolean_is_not_a_feature():
    ps = parse_headers("unsized-media=?1, blocking-script")
    assert ps.features == ()
    assert serialize_value(ps) == "blocking-script, unsized-media=?1"


@pytest.mark.parametrize("bad", [
    "unsized-media=", "Oversized=1", "oversized-images=abc", "unsized-media=2.0",
    "a=?0,,b=?0", 'x="open', "a=?0 b", "a=?0;",
])
def test_malformed_syntax_raises(bad):
    with pytest.raises(HeaderParseError):
        parse_headers(bad)


@pytest.mark.parametrize("bad", [
    "oversized-images=0", "oversized-images=-1.0",
    "lossless-images-max-bpp=0.5, lossless-images-strict-max-bpp=0.9",
])
def test_invalid_policy_raises(bad):
    with pytest.raises(PolicyError):
        parse_headers(bad)


def test_parameters_are_tolerated():
    assert parse_headers("oversized-images=2.0;report-to=ep") == PolicySet.of(F.OVERSIZED_IMAGES)


def test_merge_ours_wins():
    out = merge_values(["oversized-images=3.0, other=?0"], PolicySet.of(F.OVERSIZED_IMAGES))
    assert out == "other=?0, oversized-images=2.0"
    assert merge_values([], PolicySet.of(F.UNSIZED_MEDIA)) == "unsized-media=?0"


def test_permissions_round_trip():
    lists = {"camera": [], "geolocation": ["self", "https://a.example"], "fullscreen": ["*"]}
    text = serialize_permissions_policy(lists)
    assert text == 'camera=(), fullscreen=(*), geolocation=(self "https://a.example")'
    assert parse_permissions_policy(text) == lists


def sfv_oracle(ps):
    d = http_sfv.Dictionary()
    for f in sorted(ps.features, key=lambda f: f.kind.value):
        item = http_sfv.Item()
        item.value = False if f.parameter is None else f.parameter
        d[f.kind.value] = item
    return str(d) if len(d) else ""


@settings(max_examples=1000)
@given(policy_sets())
def test_round_trip_and_oracle(ps):
    value = serialize_value(ps)
    assert parse_headers(value) == ps
    assert value == sfv_oracle(ps)
    if not value:
        return
    parsed = http_sfv.Dictionary()
    parsed.parse(value.encode())
    assert {k: v.value for k, v in parsed.items()} == {
        f.kind.value: (False if f.parameter is None else f.parameter) for f in ps.features}


@given(policy_sets(), st.lists(st.sampled_from(["x-a=?0", "x-b=1.5", "x-c"]), unique=True))
def test_round_trip_with_unknown_items(ps, extra):
    value = ", ".join(filter(None, [serialize_value(ps)] + extra))
    again = parse_headers(value)
    assert again.features == ps.features
    assert parse_headers(serialize_value(again)) == again
