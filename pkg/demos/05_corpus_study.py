"""
A rank-binned corpus study
==========================

Sample domains per rank bin, audit them, and aggregate. The bundled
fixture corpus stands in for the live web: 25 ranked domains, 5 of which
have no page and get replaced by the next domain drawn.
"""
import tempfile
from pathlib import Path

import docpolicy
from docpolicy.corpus import bin_label, load_spec, offline_auditor, sample_bins, study

fixtures = Path(docpolicy.__file__).parent / "data" / "fixture_corpus"
spec = load_spec(fixtures / "corpus.json")

for b, domains in sample_bins(spec).items():
    print(bin_label(b), domains)

result = study(spec, offline_auditor(fixtures / "sites"), max_workers=4)
print()
print("bin      pages  mean/page  ratio  p90 unsized  p90 blocking")
for agg in result.aggregates:
    print(f"{bin_label(agg.bin):8s} {agg.pages_audited:5d} {agg.mean_violations_per_page:9.2f} "
          f"{result.ratios[agg.bin]:6.3f} {agg.per_feature_p90[docpolicy.FeatureKind.UNSIZED_MEDIA]:12d} "
          f"{agg.per_feature_p90[docpolicy.FeatureKind.BLOCKING_SCRIPT]:13d}")

out = Path(tempfile.mkdtemp())
for name, path in result.write(out).items():
    print(name, path.stat().st_size, "bytes")
