import json
import subprocess
import sys
from pathlib import Path

import pytest

import docpolicy
from docpolicy.cli import main, parse_network, parse_viewport
from docpolicy.model import FeatureKind, NetworkProfile, ViewportConfig
from docpolicy.synth import generate_synthetic

FIXTURES = Path(docpolicy.__file__).parent / "data" / "fixture_corpus"
GOLDEN = Path(__file__).parent / "golden"

CLEAN = b"""<!doctype html><html><head><script src="a.js" defer></script></head>
<body><img src="x.png" width="10" height="10"><p>ok</p></body></html>"""


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_audit_clean_page(tmp_path, capsys):
    (tmp_path / "index.html").write_bytes(CLEAN)
    code, out, _ = run(capsys, "audit", str(tmp_path))
    assert code == 0
    rep = json.loads(out)
    assert rep["violations"] == [] and rep["total_violations"] == 0
    assert list(rep) == sorted(rep)


def test_audit_dirty_page(tmp_path, capsys):
    generate_synthetic(FeatureKind.UNSIZED_MEDIA, 2).write(tmp_path)
    code, out, _ = run(capsys, "audit", str(tmp_path / "index.html"))
    assert code == 2
    rep = json.loads(out)
    assert rep["counts_per_feature"]["unsized-media"] == 2
    assert rep["cls_estimate"]["post"] == 0


def test_audit_respects_policy(tmp_path, capsys):
    generate_synthetic(FeatureKind.UNSIZED_MEDIA, 2).write(tmp_path)
    code, out, _ = run(capsys, "audit", str(tmp_path), "--policy", "blocking-script=?0")
    assert code == 0 and json.loads(out)["policy"] == "blocking-script=?0"
    code, _, _ = run(capsys, "audit", str(tmp_path), "--policy", "")
    assert code == 0


def test_audit_unreachable(capsys, silent_port):
    code, out, err = run(capsys, "audit", "http://127.0.0.1:1/", "--timeout", "2")
    assert code == 1 and out == "" and "error" in err


def test_audit_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "audit", str(tmp_path / "nope.html"))
    assert code == 1 and err


def test_viewport_and_network_flags(tmp_path, capsys):
    (tmp_path / "index.html").write_bytes(b"x" * 32768)
    _, out, _ = run(capsys, "audit", str(tmp_path), "--network", "150,1600,750")
    assert json.loads(out)["first_render_estimate_s"]["pre"] == pytest.approx(0.31384)
    _, out, _ = run(capsys, "audit", str(tmp_path), "--network", "100,800,400")
    assert json.loads(out)["first_render_estimate_s"]["pre"] == pytest.approx(0.1 + 32768 * 8 / 800_000)
    generate_synthetic(FeatureKind.OVERSIZED_IMAGES).write(tmp_path / "o")
    only = ("--policy", "oversized-images=2.0")
    code, _, _ = run(capsys, "audit", str(tmp_path / "o"), "--viewport", "360x640@3", *only)
    assert code == 2
    code, _, _ = run(capsys, "audit", str(tmp_path / "o"), "--viewport", "360x640@4", *only)
    assert code == 0  # 2400 <= 360*4*2


def test_flag_parsers():
    assert parse_viewport("412x915@2.625") == ViewportConfig(412, 915, 2.625)
    assert parse_network("1,2,3") == NetworkProfile(1, 2, 3)


@pytest.mark.parametrize("argv", [
    ["audit", "x", "--viewport", "big"],
    ["audit", "x", "--network", "1,2"],
    ["audit", "x", "--policy", "oversized-images=abc"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 1


def test_enforce_prints_snapshot(tmp_path, capsys):
    generate_synthetic(FeatureKind.BLOCKING_SCRIPT, 2).write(tmp_path)
    code, out, _ = run(capsys, "enforce", str(tmp_path))
    snap = json.loads(out)
    assert code == 0
    assert all(s["has_defer"] for s in snap["scripts"]) and len(snap["scripts"]) == 2


def test_corpus_offline_matches_goldens(tmp_path, capsys):
    code, out, _ = run(capsys, "corpus", str(FIXTURES / "corpus.json"),
                       "--offline", str(FIXTURES / "sites"), "--out", str(tmp_path))
    assert code == 0 and len(out.splitlines()) == 3
    for name in ("report.json", "heatmap.csv", "cdf.csv"):
        assert (tmp_path / name).read_bytes() == (GOLDEN / name).read_bytes()


def test_corpus_bins_filter(tmp_path, capsys):
    code, _, _ = run(capsys, "corpus", str(FIXTURES / "corpus.json"), "--offline", str(FIXTURES / "sites"),
                     "--out", str(tmp_path), "--bins", "6-10")
    assert code == 0
    bins = {row["bin"] for row in json.loads((tmp_path / "report.json").read_text())["reports"]}
    assert bins == {"6-10"}
    assert (tmp_path / "heatmap.csv").read_text().count("6-10,") == 8


def test_corpus_seed_override(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"ranked_list": str(FIXTURES / "ranked.csv"),
                                "bins": [[1, 5], [6, 10]], "samples_per_bin": 1, "seed": 1}))
    picks = set()
    for seed in range(6):
        run(capsys, "corpus", str(spec), "--offline", str(FIXTURES / "sites"),
            "--out", str(tmp_path / "o"), "--seed", str(seed))
        rows = json.loads((tmp_path / "o" / "report.json").read_text())["reports"]
        picks.add(tuple(r["domain"] for r in rows))
    assert len(picks) > 1


def test_corpus_missing_list(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"ranked_list": "missing.csv"}))
    code, _, err = run(capsys, "corpus", str(spec), "--out", str(tmp_path / "o"))
    assert code == 1 and "error" in err


def test_corpus_malformed_spec(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text("{not json")
    assert run(capsys, "corpus", str(spec))[0] == 1


def test_synth_one_and_all(tmp_path, capsys):
    code, out, _ = run(capsys, "synth", "unsized-media", str(tmp_path / "one"))
    assert code == 0 and (tmp_path / "one" / "index.html").is_file()
    assert out.strip().endswith("1 violation(s)")
    code, out, _ = run(capsys, "synth", "all", str(tmp_path / "all"), "-n", "2")
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "all").iterdir()) == sorted(k.value for k in FeatureKind)
    assert all(line.endswith("2 violation(s)") for line in out.splitlines())
    assert run(capsys, "synth", "bogus", str(tmp_path))[0] == 1


def test_console_script_entry_point(tmp_path):
    (tmp_path / "index.html").write_bytes(CLEAN)
    proc = subprocess.run([sys.executable, "-m", "docpolicy.cli", "audit", str(tmp_path)],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0 and json.loads(proc.stdout)["violations"] == []
