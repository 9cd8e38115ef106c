"""Rank-binned corpus studies: sampling, batch auditing and aggregation."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import random
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .enforce import report as build_report
from .extract import extract_snapshot
from .fetch import FetchConfig, FetchLimiter, Unreachable, fetch_page
from .model import (
    FeatureKind,
    NetworkProfile,
    PolicySet,
    SLOW_4G,
    AuditReport,
    ViewportConfig,
    default_policy_set,
)
from .serialize import FLOAT_DIGITS, dumps

log = logging.getLogger(__name__)

Bin = Tuple[int, int]  # inclusive rank interval

DEFAULT_BINS: Tuple[Bin, ...] = (
    (1, 100),
    (101, 1_000),
    (1_001, 10_000),
    (10_001, 100_000),
    (100_001, 1_000_000),
)


class CorpusError(ValueError):
    pass


def bin_label(b: Bin) -> str:
    return f"{b[0]}-{b[1]}"


def parse_bin(text: str) -> Bin:
    lo, sep, hi = text.strip().partition("-")
    if not sep:
        raise CorpusError(f"bin must look like LO-HI, got {text!r}")
    return int(float(lo)), int(float(hi))


@dataclass(frozen=True)
class CorpusSpec:
    ranked_list_path: str
    bins: Tuple[Bin, ...] = DEFAULT_BINS
    samples_per_bin: int = 100
    rng_seed: int = 0

    def __post_init__(self):
        bins = tuple((int(lo), int(hi)) for lo, hi in self.bins)
        object.__setattr__(self, "bins", bins)
        if self.samples_per_bin < 1:
            raise CorpusError("samples_per_bin must be >= 1")
        for lo, hi in bins:
            if lo < 1 or hi < lo:
                raise CorpusError(f"bad bin {lo}-{hi}")
        for (_, a_hi), (b_lo, _) in zip(bins, bins[1:]):
            if b_lo <= a_hi:
                raise CorpusError("bins must be ascending and disjoint")


def load_spec(path) -> CorpusSpec:
    """Read a JSON corpus spec; a relative ``ranked_list`` is resolved
    against the directory of the corpus spec file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
        ranked = Path(raw["ranked_list"])
        if not ranked.is_absolute():
            ranked = path.parent / ranked
        return CorpusSpec(
            ranked_list_path=str(ranked),
            bins=tuple(tuple(b) for b in raw.get("bins", DEFAULT_BINS)),
            samples_per_bin=int(raw.get("samples_per_bin", 100)),
            rng_seed=int(raw.get("seed", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(f"malformed corpus spec {path}: {exc}") from exc


def load_ranked_list(path) -> List[Tuple[int, str]]:
    """``rank,domain`` rows; a non-numeric header row is skipped."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if len(row) < 2:
                continue
            try:
                rank = int(row[0])
            except ValueError:
                continue
            rows.append((rank, row[1].strip()))
    return rows


def bin_members(spec: CorpusSpec) -> Dict[Bin, List[str]]:
    members: Dict[Bin, List[str]] = {b: [] for b in spec.bins}
    for rank, domain in sorted(load_ranked_list(spec.ranked_list_path)):
        for b in spec.bins:
            if b[0] <= rank <= b[1]:
                members[b].append(domain)
                break
    return members


def draw_order(spec: CorpusSpec) -> Dict[Bin, List[str]]:
    """A seeded random permutation of each bin. Its prefix is the sample;
    the rest supplies replacements for unreachable pages.

    Each bin has its own generator, so restricting a run to some bins does
    not change the others' draws.
    """
    out = {}
    for b, domains in bin_members(spec).items():
        if len(domains) < spec.samples_per_bin:
            raise CorpusError(
                f"bin {bin_label(b)} has {len(domains)} entries, fewer than {spec.samples_per_bin}"
            )
        rng = random.Random(f"{spec.rng_seed}:{b[0]}:{b[1]}")
        out[b] = rng.sample(domains, len(domains))
    return out


def sample_bins(spec: CorpusSpec) -> Dict[Bin, List[str]]:
    return {b: order[:spec.samples_per_bin] for b, order in draw_order(spec).items()}


AuditFn = Callable[[str], AuditReport]


def run_corpus(spec: CorpusSpec, audit_fn: AuditFn, bins: Optional[Sequence[Bin]] = None,
               max_workers: int = 1) -> Dict[Bin, List[Tuple[str, AuditReport]]]:
    """Audit ``samples_per_bin`` reachable domains per bin.

    ``audit_fn`` raises :class:`Unreachable` for dead domains, which are
    replaced by the next domain in the bin's draw order. The selection is
    the first reachable domains in draw order whatever ``max_workers``.
    """
    orders = draw_order(spec)
    wanted = list(spec.bins if bins is None else bins)
    for b in wanted:
        if b not in orders:
            raise CorpusError(f"bin {bin_label(b)} is not in the corpus spec")
    results: Dict[Bin, List[Tuple[str, AuditReport]]] = {}

    def attempt(domain):
        try:
            return audit_fn(domain)
        except Unreachable as exc:
            log.info("skipping %s: %s", domain, exc)
            return None

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        for b in wanted:
            order = orders[b]
            got: List[Tuple[str, AuditReport]] = []
            pos = 0
            while len(got) < spec.samples_per_bin and pos < len(order):
                batch = order[pos:pos + spec.samples_per_bin - len(got)]
                pos += len(batch)
                for domain, rep in zip(batch, pool.map(attempt, batch)):
                    if rep is not None:
                        got.append((domain, rep))
            if len(got) < spec.samples_per_bin:
                log.warning("bin %s exhausted with %d reachable pages", bin_label(b), len(got))
            results[b] = got
    return results


def nearest_rank(values: Sequence[float], p: Fraction = Fraction(9, 10)):
    """The ceil(p*N)-th smallest value (1-based), no interpolation."""
    if not values:
        raise CorpusError("percentile of empty data")
    ordered = sorted(values)
    k = math.ceil(Fraction(p) * len(ordered))
    return ordered[max(k, 1) - 1]


def distribution(values: Sequence[int]) -> List[Tuple[int, float]]:
    """Empirical CDF points ``(v, fraction of values <= v)``."""
    n = len(values)
    points = []
    running = 0
    for v in sorted(set(values)):
        running += sum(1 for x in values if x == v)
        points.append((v, running / n))
    return points


@dataclass(frozen=True)
class BinAggregate:
    bin: Bin
    pages_audited: int
    per_feature_p90: Dict[FeatureKind, int]
    per_feature_mean: Dict[FeatureKind, float]
    per_feature_cdf: Dict[FeatureKind, List[Tuple[int, float]]]
    mean_violations_per_page: float
    per_feature_median: Dict[FeatureKind, float] = field(default_factory=dict)


def aggregate(reports: Sequence[AuditReport], bin: Bin) -> BinAggregate:
    if not reports:
        raise CorpusError(f"no reports for bin {bin_label(bin)}")
    p90, mean, cdf, median = {}, {}, {}, {}
    for kind in FeatureKind:
        counts = [r.counts_per_feature.get(kind, 0) for r in reports]
        p90[kind] = nearest_rank(counts)
        mean[kind] = statistics.fmean(counts)
        cdf[kind] = distribution(counts)
        median[kind] = statistics.median(counts)
    totals = [r.total_violations for r in reports]
    return BinAggregate(bin, len(reports), p90, mean, cdf, statistics.fmean(totals), median)


def page_ratio(r: AuditReport) -> float:
    """Post- over pre-enforcement first-render estimate (1.0 if pre is 0)."""
    pre, post = r.first_render_estimate_s.pre, r.first_render_estimate_s.post
    return 1.0 if pre <= 0 else post / pre


def improvement_ratio(reports: Mapping[Bin, Sequence[AuditReport]]) -> Dict[Bin, float]:
    """Geometric mean of per-page ratios, per bin."""
    return {b: statistics.geometric_mean([page_ratio(r) for r in rs]) for b, rs in reports.items() if rs}


# -- audit callables -------------------------------------------------------

def live_auditor(ps: Optional[PolicySet] = None, vp: Optional[ViewportConfig] = None,
                 np: NetworkProfile = SLOW_4G, config: Optional[FetchConfig] = None) -> AuditFn:
    ps = ps or default_policy_set()
    config = config or FetchConfig.from_env()
    limiter = FetchLimiter.from_config(config)  # shared by every page of the run

    def run(domain: str) -> AuditReport:
        target = domain if "://" in domain else f"http://{domain}/"
        url, html, resources = fetch_page(target, config, limiter)
        return build_report(extract_snapshot(html, url, resources), ps, vp, np)
    return run


def offline_auditor(root, ps: Optional[PolicySet] = None, vp: Optional[ViewportConfig] = None,
                    np: NetworkProfile = SLOW_4G) -> AuditFn:
    """Audit ``<root>/<domain>/index.html`` from disk; a missing directory
    counts as unreachable. Reports carry ``http://<domain>/`` as their URL
    so outputs do not depend on where the fixtures live."""
    root = Path(root)
    ps = ps or default_policy_set()

    def run(domain: str) -> AuditReport:
        page = root / domain / "index.html"
        if not page.is_file():
            raise Unreachable(f"no fixture for {domain}")
        url, html, resources = fetch_page(str(page))
        snap = replace(extract_snapshot(html, url, resources), url=f"http://{domain}/")
        return build_report(snap, ps, vp, np)
    return run


# -- outputs ---------------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(round(x, FLOAT_DIGITS))


def heatmap_csv(aggregates: Sequence[BinAggregate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin", "feature", "p90"])
    for agg in aggregates:
        for kind in FeatureKind:
            w.writerow([bin_label(agg.bin), kind.value, agg.per_feature_p90[kind]])
    return buf.getvalue()


def cdf_csv(aggregates: Sequence[BinAggregate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["bin", "feature", "violations", "fraction"])
    for agg in aggregates:
        for kind in FeatureKind:
            for v, frac in agg.per_feature_cdf[kind]:
                w.writerow([bin_label(agg.bin), kind.value, v, _fmt(frac)])
    return buf.getvalue()


def aggregate_dict(agg: BinAggregate, ratio: Optional[float]) -> dict:
    return {
        "bin": bin_label(agg.bin),
        "pages_audited": agg.pages_audited,
        "per_feature_p90": {k.value: v for k, v in agg.per_feature_p90.items()},
        "per_feature_mean": {k.value: v for k, v in agg.per_feature_mean.items()},
        "per_feature_median": {k.value: v for k, v in agg.per_feature_median.items()},
        "per_feature_cdf": {k.value: [list(p) for p in pts] for k, pts in agg.per_feature_cdf.items()},
        "mean_violations_per_page": agg.mean_violations_per_page,
        "improvement_ratio": ratio,
    }


@dataclass
class CorpusResult:
    results: Dict[Bin, List[Tuple[str, AuditReport]]]
    aggregates: List[BinAggregate]
    ratios: Dict[Bin, float]

    def report_json(self) -> str:
        reports = []
        for b, rows in self.results.items():
            for domain, rep in rows:
                reports.append({"bin": bin_label(b), "domain": domain, "report": rep})
        bins = [aggregate_dict(a, self.ratios.get(a.bin)) for a in self.aggregates]
        return dumps({"reports": reports, "bins": bins})

    def write(self, out_dir) -> Dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        files = {
            "report.json": self.report_json(),
            "heatmap.csv": heatmap_csv(self.aggregates),
            "cdf.csv": cdf_csv(self.aggregates),
        }
        paths = {}
        for name, text in files.items():
            paths[name] = out / name
            paths[name].write_text(text)
        return paths


def study(spec: CorpusSpec, audit_fn: AuditFn, bins: Optional[Sequence[Bin]] = None,
          max_workers: int = 1) -> CorpusResult:
    """Sample, audit and aggregate. Bins with no reachable pages are left
    out of the aggregates."""
    results = run_corpus(spec, audit_fn, bins, max_workers)
    by_bin = {b: [r for _, r in rows] for b, rows in results.items()}
    aggregates = [aggregate(rs, b) for b, rs in by_bin.items() if rs]
    return CorpusResult(results, aggregates, improvement_ratio(by_bin))
