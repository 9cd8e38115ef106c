from decimal import Decimal

import pytest
from hypothesis import given, strategies as st

from docpolicy.model import (
    FeatureKind,
    MediaElement,
    NetworkProfile,
    PageSnapshot,
    PolicyError,
    PolicyFeature,
    PolicySet,
    ScriptElement,
    ViewportConfig,
    Violation,
    default_policy_set,
    validate_policy_set,
)
from strategies import policy_sets


def test_oversized_two_is_valid():
    ps = PolicySet.of((FeatureKind.OVERSIZED_IMAGES, "2.0"))
    assert validate_policy_set(ps) is ps


def test_empty_set_is_valid():
    assert validate_policy_set(PolicySet()) == PolicySet()


def test_strict_above_non_strict_rejected():
    ps = PolicySet.of(("lossless-images-max-bpp", 1.0), ("lossless-images-strict-max-bpp", 2.0))
    with pytest.raises(PolicyError, match="exceeds"):
        validate_policy_set(ps)


def test_duplicate_kind_rejected():
    ps = PolicySet.of(("oversized-images", 2), ("oversized-images", 3))
    with pytest.raises(PolicyError, match="duplicate"):
        validate_policy_set(ps)


@pytest.mark.parametrize("value", [0, -1, "-0.5"])
def test_non_positive_parameter_rejected(value):
    with pytest.raises(PolicyError):
        validate_policy_set(PolicySet.of(("lossy-images-max-bpp", value)))


def test_boolean_feature_takes_no_parameter():
    with pytest.raises(PolicyError):
        PolicyFeature(FeatureKind.UNSIZED_MEDIA, Decimal(1))


def test_parameter_defaults():
    ps = default_policy_set()
    assert len(ps) == 8
    assert ps.param(FeatureKind.OVERSIZED_IMAGES) == 2.0
    assert ps.param(FeatureKind.LOSSY_IMAGES_MAX_BPP) == 0.5
    assert ps.param(FeatureKind.LOSSLESS_IMAGES_MAX_BPP) == 1.0
    assert ps.param(FeatureKind.LOSSLESS_IMAGES_STRICT_MAX_BPP) == 1.0
    assert ps.param(FeatureKind.UNSIZED_MEDIA) is None


@given(policy_sets(), st.randoms())
def test_policy_set_equality_ignores_order(ps, rnd):
    feats = list(ps.features)
    rnd.shuffle(feats)
    assert PolicySet(tuple(feats)) == ps
    assert hash(PolicySet(tuple(feats))) == hash(ps)
    validate_policy_set(ps)


@given(policy_sets())
def test_parameter_present_iff_parameterized(ps):
    for f in ps:
        assert (f.parameter is not None) == f.kind.parameterized
        if f.parameter is not None:
            assert f.parameter > 0


def test_decimal_parameters_compare_numerically():
    assert PolicySet.of(("oversized-images", "2.0")) == PolicySet.of(("oversized-images", 2))


def test_viewport_and_network_defaults():
    assert ViewportConfig() == ViewportConfig(360, 640, 3.0)
    assert NetworkProfile() == NetworkProfile(150, 1600, 750)
    with pytest.raises(ValueError):
        ViewportConfig(0, 640, 3)
    with pytest.raises(ValueError):
        NetworkProfile(150, 0, 750)


def test_media_invariants():
    with pytest.raises(ValueError):
        MediaElement(0, natural_width_px=10)
    with pytest.raises(ValueError):
        MediaElement(0, encoding_class="lossy")


def test_script_source_iff_external():
    with pytest.raises(ValueError):
        ScriptElement(0, external=True)
    with pytest.raises(ValueError):
        ScriptElement(0, external=False, source_url="a.js")


def test_snapshot_ids_strictly_increasing():
    with pytest.raises(ValueError):
        PageSnapshot(media=(MediaElement(1), MediaElement(1)))


def test_violation_measurement_pairing():
    Violation("oversized-images", 0, "media", 2000.0, 1800.0)
    Violation("unsized-media", 0, "media")
    with pytest.raises(ValueError):
        Violation("oversized-images", 0, "media")
    with pytest.raises(ValueError):
        Violation("unsized-media", 0, "media", 1.0, 2.0)
