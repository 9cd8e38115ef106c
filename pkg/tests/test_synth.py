import io

import pytest
from PIL import Image

from docpolicy.detect import audit
from docpolicy.extract import extract_snapshot
from docpolicy.fetch import fetch_page
from docpolicy.model import FeatureKind, ViewportConfig, default_policy_set
from docpolicy.synth import IMAGE_PLANS, generate_all, generate_synthetic, make_jpeg, make_png

VP = ViewportConfig()


@pytest.mark.parametrize("n", [0, 1, 2, 5])
@pytest.mark.parametrize("kind", list(FeatureKind))
def test_round_trip(kind, n):
    found = audit(generate_synthetic(kind, n).snapshot(), default_policy_set(), VP)
    assert [v.feature_kind for v in found] == [kind] * n


@pytest.mark.parametrize("kind", list(IMAGE_PLANS))
def test_images_are_real_and_heavy(kind):
    page = generate_synthetic(kind)
    fmt, w, h, _ = IMAGE_PLANS[kind]
    (data,) = page.files.values()
    assert 600_000 <= len(data) <= 700_000
    with Image.open(io.BytesIO(data)) as im:
        assert im.format.lower() == fmt and im.size == (w, h)
        im.load()


@pytest.mark.parametrize("kind", list(FeatureKind))
def test_single_violation_is_above_fold(kind):
    (v,) = audit(generate_synthetic(kind).snapshot(), default_policy_set(), VP)
    if kind in IMAGE_PLANS:
        assert v.above_fold


def test_optional_font_control_page():
    page = generate_synthetic(FeatureKind.FONT_DISPLAY_LATE_SWAP, 3, font_display="optional")
    assert audit(page.snapshot(), default_policy_set(), VP) == []


def test_unknown_feature():
    with pytest.raises(ValueError):
        generate_synthetic("sync-xhr")


def test_generator_is_deterministic():
    a = generate_synthetic(FeatureKind.LOSSY_IMAGES_MAX_BPP, 2)
    b = generate_synthetic(FeatureKind.LOSSY_IMAGES_MAX_BPP, 2)
    assert a == b


def test_written_page_audits_the_same(tmp_path, serve_dir):
    page = generate_synthetic(FeatureKind.BLOCKING_SCRIPT, 3)
    index = page.write(tmp_path)
    url, html, res = fetch_page(str(index))
    from_disk = audit(extract_snapshot(html, url, res), default_policy_set(), VP)
    url, html, res = fetch_page(serve_dir(tmp_path))
    over_http = audit(extract_snapshot(html, url, res), default_policy_set(), VP)
    assert from_disk == over_http == audit(page.snapshot(), default_policy_set(), VP)
    assert len(from_disk) == 3


def test_generate_all(tmp_path):
    paths = generate_all(tmp_path)
    assert set(paths) == set(FeatureKind)
    assert all(p.is_file() for p in paths.values())


def test_padding_hits_exact_size():
    assert len(make_png(10, 10, 5000)) == 5000
    assert len(make_jpeg(10, 10, 5000)) == 5000
    with pytest.raises(ValueError):
        make_png(100, 100, 10)
