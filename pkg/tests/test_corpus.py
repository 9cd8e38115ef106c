import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

import docpolicy
from docpolicy.corpus import (
    CorpusError,
    CorpusSpec,
    aggregate,
    bin_label,
    draw_order,
    improvement_ratio,
    load_spec,
    nearest_rank,
    offline_auditor,
    parse_bin,
    run_corpus,
    sample_bins,
    study,
)
from docpolicy.enforce import report
from docpolicy.fetch import Unreachable
from docpolicy.model import (
    SLOW_4G,
    AuditReport,
    Estimate,
    FeatureKind,
    PageSnapshot,
    ScriptElement,
    ViewportConfig,
    Violation,
    count_by_kind,
    default_policy_set,
)

GOLDEN = Path(__file__).parent / "golden"
FIXTURES = Path(docpolicy.__file__).parent / "data" / "fixture_corpus"


def ranked(tmp_path, n, name="list.csv"):
    path = tmp_path / name
    path.write_text("rank,domain\n" + "".join(f"{i},d{i}.test\n" for i in range(1, n + 1)))
    return str(path)


def fake_report(counts, pre=1.0, post=1.0):
    kinds = [k for k, c in counts.items() for _ in range(c)]
    viol = tuple(Violation(k, i, "script" if k is FeatureKind.BLOCKING_SCRIPT else "font")
                 for i, k in enumerate(kinds))
    return AuditReport("u", viol, count_by_kind(viol), 0, Estimate(pre, post), Estimate(pre, post), Estimate(0, 0))


# sampling

def test_sampling_is_deterministic(tmp_path):
    spec = CorpusSpec(ranked(tmp_path, 300), ((1, 100), (101, 300)), 10, rng_seed=7)
    assert sample_bins(spec) == sample_bins(spec)
    assert all(len(v) == 10 for v in sample_bins(spec).values())


def test_full_bin_is_a_shuffle(tmp_path):
    spec = CorpusSpec(ranked(tmp_path, 100), ((1, 100),), 100, rng_seed=1)
    got = sample_bins(spec)[(1, 100)]
    assert sorted(got) == sorted(f"d{i}.test" for i in range(1, 101))
    assert got != [f"d{i}.test" for i in range(1, 101)]


def test_seeds_differ_on_large_bin(tmp_path):
    path = ranked(tmp_path, 100_000)
    a = sample_bins(CorpusSpec(path, ((1, 100_000),), 100, rng_seed=1))
    b = sample_bins(CorpusSpec(path, ((1, 100_000),), 100, rng_seed=2))
    assert a != b
    assert len(set(a[(1, 100_000)]) & set(b[(1, 100_000)])) < 10


def test_samples_stay_in_their_bin(tmp_path):
    spec = CorpusSpec(ranked(tmp_path, 50), ((1, 10), (11, 50)), 5, rng_seed=3)
    s = sample_bins(spec)
    assert all(1 <= int(d[1:-5]) <= 10 for d in s[(1, 10)])
    assert all(11 <= int(d[1:-5]) <= 50 for d in s[(11, 50)])


def test_bin_too_small(tmp_path):
    with pytest.raises(CorpusError):
        sample_bins(CorpusSpec(ranked(tmp_path, 5), ((1, 10),), 6))


@pytest.mark.parametrize("bins,n", [(((1, 10), (5, 20)), 1), (((10, 20), (1, 5)), 1), (((1, 10),), 0)])
def test_spec_validation(tmp_path, bins, n):
    with pytest.raises(CorpusError):
        CorpusSpec("x.csv", bins, n)


def test_unreachable_replaced_in_draw_order(tmp_path):
    spec = CorpusSpec(ranked(tmp_path, 20), ((1, 20),), 5, rng_seed=11)
    dead = set(sample_bins(spec)[(1, 20)][:2])

    def audit_fn(domain):
        if domain in dead:
            raise Unreachable(domain)
        return fake_report({})

    got = [d for d, _ in run_corpus(spec, audit_fn)[(1, 20)]]
    order = draw_order(spec)[(1, 20)]
    assert got == [d for d in order if d not in dead][:5]
    assert got == [d for d, _ in run_corpus(spec, audit_fn, max_workers=4)[(1, 20)]]


def test_exhausted_bin_returns_what_it_has(tmp_path):
    spec = CorpusSpec(ranked(tmp_path, 6), ((1, 6),), 5)

    def audit_fn(domain):
        if domain in ("d1.test", "d2.test", "d3.test"):
            raise Unreachable(domain)
        return fake_report({})

    assert len(run_corpus(spec, audit_fn)[(1, 6)]) == 3


def test_parse_bin():
    assert parse_bin("1-100") == (1, 100)
    assert parse_bin("1e3-1e4") == (1000, 10000)
    assert bin_label((101, 1000)) == "101-1000"
    with pytest.raises(CorpusError):
        parse_bin("100")


# aggregation

def test_nearest_rank_0_to_99():
    assert nearest_rank(list(range(100))) == 89
    assert nearest_rank([5]) == 5
    with pytest.raises(CorpusError):
        nearest_rank([])


@given(st.lists(st.integers(0, 50), min_size=1, max_size=200))
def test_nearest_rank_matches_numpy(values):
    assert nearest_rank(values) == np.percentile(values, 90, method="inverted_cdf")
    assert nearest_rank(values, Fraction(1, 2)) == np.percentile(values, 50, method="inverted_cdf")


counts_lists = st.lists(st.dictionaries(st.sampled_from([FeatureKind.BLOCKING_SCRIPT,
                                                         FeatureKind.FONT_DISPLAY_LATE_SWAP]),
                                        st.integers(0, 6)), min_size=1, max_size=25)


@given(counts_lists, st.randoms())
def test_aggregate_permutation_invariant(counts, rnd):
    reports = [fake_report(c) for c in counts]
    shuffled = list(reports)
    rnd.shuffle(shuffled)
    a, b = aggregate(reports, (1, 5)), aggregate(shuffled, (1, 5))
    assert a.per_feature_p90 == b.per_feature_p90
    assert a.per_feature_cdf == b.per_feature_cdf
    assert a.per_feature_mean == pytest.approx(b.per_feature_mean)


@given(counts_lists)
def test_aggregate_order_statistics(counts):
    agg = aggregate([fake_report(c) for c in counts], (1, 5))
    for k in FeatureKind:
        values = [c.get(k, 0) for c in counts]
        assert agg.per_feature_p90[k] >= agg.per_feature_median[k] >= min(values)
        fracs = [f for _, f in agg.per_feature_cdf[k]]
        assert fracs == sorted(fracs) and fracs[-1] == 1.0
        assert agg.per_feature_mean[k] == pytest.approx(np.mean(values))
    assert agg.mean_violations_per_page == pytest.approx(np.mean([sum(c.values()) for c in counts]))


def test_identical_pages():
    agg = aggregate([fake_report({FeatureKind.BLOCKING_SCRIPT: 3})] * 7, (1, 5))
    assert agg.per_feature_p90[FeatureKind.BLOCKING_SCRIPT] == 3
    assert agg.per_feature_mean[FeatureKind.BLOCKING_SCRIPT] == 3


def test_aggregate_empty():
    with pytest.raises(CorpusError):
        aggregate([], (1, 5))


def test_ratios():
    clean = report(PageSnapshot(html_bytes=1000), default_policy_set(), ViewportConfig(), SLOW_4G)
    one_script = report(PageSnapshot(html_bytes=1000, scripts=(ScriptElement(0, True, "a.js", encoded_bytes=5000),)),
                        default_policy_set(), ViewportConfig(), SLOW_4G)
    got = improvement_ratio({(1, 5): [clean], (6, 10): [one_script]})
    assert got[(1, 5)] == 1.0
    assert got[(6, 10)] < 1.0


@given(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=30))
def test_ratio_is_geometric_mean(ratios):
    reports = [fake_report({}, 1.0, r) for r in ratios]
    assert improvement_ratio({(1, 5): reports})[(1, 5)] == pytest.approx(stats.gmean(ratios), rel=1e-12)


# the bundled fixture corpus

@pytest.fixture(scope="module")
def fixture_study():
    spec = load_spec(FIXTURES / "corpus.json")
    return spec, study(spec, offline_auditor(FIXTURES / "sites"), max_workers=4)


def test_fixture_counts_match_planted(fixture_study):
    _, result = fixture_study
    planted = json.loads((GOLDEN / "planted.json").read_text())
    pages = [(d, r) for rows in result.results.values() for d, r in rows]
    assert len(pages) == 20
    for domain, rep in pages:
        got = {k.value: c for k, c in rep.counts_per_feature.items() if c}
        assert got == planted[domain]["counts"], domain


def planted_fetch(n):
    return 0.150 + n * 8 / 1_600_000


def test_fixture_aggregates_match_independent_computation(fixture_study):
    spec, result = fixture_study
    planted = json.loads((GOLDEN / "planted.json").read_text())
    for agg in result.aggregates:
        domains = [d for d, _ in result.results[agg.bin]]
        for kind in FeatureKind:
            values = [planted[d]["counts"].get(kind.value, 0) for d in domains]
            assert agg.per_feature_p90[kind] == np.percentile(values, 90, method="inverted_cdf")
            assert agg.per_feature_mean[kind] == pytest.approx(np.mean(values))
        ratios = []
        for d in domains:
            html = planted_fetch(planted[d]["html_bytes"])
            ratios.append(html / (html + sum(planted_fetch(b) for b in planted[d]["blocking_script_bytes"])))
        assert result.ratios[agg.bin] == pytest.approx(stats.gmean(ratios), rel=1e-12)
        assert 0 < result.ratios[agg.bin] <= 1


def test_fixture_outputs_match_goldens(fixture_study, tmp_path):
    _, result = fixture_study
    paths = result.write(tmp_path)
    for name in ("report.json", "heatmap.csv", "cdf.csv"):
        assert paths[name].read_bytes() == (GOLDEN / name).read_bytes(), name


def test_fixture_run_repeatable(fixture_study, tmp_path):
    spec, result = fixture_study
    again = study(spec, offline_auditor(FIXTURES / "sites"), max_workers=1)
    assert again.report_json() == result.report_json()


def test_bin_filter(fixture_study):
    spec, result = fixture_study
    only = study(spec, offline_auditor(FIXTURES / "sites"), bins=[(11, 15)])
    assert list(only.results) == [(11, 15)]
    assert only.results[(11, 15)] == result.results[(11, 15)]
    with pytest.raises(CorpusError):
        study(spec, offline_auditor(FIXTURES / "sites"), bins=[(2, 3)])
