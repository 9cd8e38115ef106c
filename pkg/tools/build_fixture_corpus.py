"""Regenerate the bundled offline fixture corpus.

25 ranked domains in 5 bins of 5; in every bin one domain has no page on
disk (it plays an unreachable site), so a run with samples_per_bin=4
audits exactly 20 pages. Lower-ranked bins get more violations.

Every bad practice is planted on purpose, so the builder also writes what
it planted (violation counts per feature, HTML size, blocking script
sizes) to a manifest the tests use as ground truth.

    python tools/build_fixture_corpus.py src/docpolicy/data/fixture_corpus tests/golden/planted.json
"""
import io
import json
import random
import shutil
import sys
from collections import Counter
from pathlib import Path

from PIL import Image

from docpolicy.synth import make_jpeg, make_png

SEED = 2021
BINS = [[1, 5], [6, 10], [11, 15], [16, 20], [21, 25]]
DEAD = {3, 9, 12, 20, 24}  # ranks without a fixture page


def noise_jpeg(rng, w, h):
    img = Image.frombytes("L", (w, h), bytes(rng.randrange(256) for _ in range(w * h)))
    buf = io.BytesIO()
    img.save(buf, "JPEG", quality=95)
    return buf.getvalue()


def noise_png(rng, w, h):
    img = Image.frombytes("L", (w, h), bytes(rng.randrange(256) for _ in range(w * h)))
    buf = io.BytesIO()
    img.save(buf, "PNG", optimize=False, compress_level=9)
    return buf.getvalue()


def build_page(rng, level):
    """One page; ``level`` 0..4 scales how many bad practices it has."""
    files, head, style, body = {}, [], [], []
    planted = Counter()
    blocking = []
    pick = lambda lo, hi: rng.randint(lo, hi + level)  # noqa: E731

    for i in range(pick(0, 1)):
        files[f"img/hero{i}.png"] = make_png(360, 120 + 40 * i, shade=180 + i)
        body.append(f'<img src="img/hero{i}.png" alt="">')
        planted["unsized-media"] += 1
    for i in range(pick(0, 0)):
        files[f"img/big{i}.jpg"] = make_jpeg(2400, 400, shade=100 + i)
        body.append(f'<img src="img/big{i}.jpg" width="360" height="60" alt="">')
        planted["oversized-images"] += 1
    for i in range(pick(0, 1)):
        files[f"img/photo{i}.jpg"] = noise_jpeg(rng, 48, 48)
        body.append(f'<img src="img/photo{i}.jpg" width="240" height="240" alt="">')
        planted["lossy-images-max-bpp"] += 1
    for i in range(rng.randint(0, 1)):
        files[f"img/icon{i}.png"] = noise_png(rng, 40, 40)
        body.append(f'<img src="img/icon{i}.png" style="width:40px;height:40px" alt="">')
        planted["lossless-images-strict-max-bpp"] += 1  # under the 10 KiB allowance
    for i in range(rng.randint(0, 2)):
        files[f"img/ok{i}.png"] = make_png(300, 100, shade=60 + i)
        body.append(f'<img src="img/ok{i}.png" width="300" height="100" alt="">')
    if rng.random() < 0.3:
        body.append('<video src="media/clip.mp4" controls></video>')
        planted["unsized-media"] += 1

    for i in range(pick(0, 1)):
        files[f"js/lib{i}.js"] = (f"/* lib {i} */\n" + "var a=1;\n" * rng.randint(200, 3000)).encode()
        head.append(f'<script src="js/lib{i}.js"></script>')
        planted["blocking-script"] += 1
        blocking.append(len(files[f"js/lib{i}.js"]))
    for i in range(rng.randint(0, 2)):
        files[f"js/defer{i}.js"] = b"void 0;\n" * 500
        head.append(f'<script src="js/defer{i}.js" {rng.choice(["defer", "async"])}></script>')
    head.append("<script>window.dataLayer = [];</script>")

    for i in range(pick(0, 0)):
        display = rng.choice(["swap", "block", None])
        files[f"fonts/f{i}.woff2"] = b"wOF2" + bytes(rng.randint(8_000, 30_000))
        decl = f" font-display: {display};" if display else ""
        style.append(f'@font-face {{ font-family: "F{i}"; src: url("../fonts/f{i}.woff2");{decl} }}')
        planted["font-display-late-swap"] += 1
    if rng.random() < 0.5:
        files["fonts/ok.woff2"] = b"wOF2" + bytes(12_000)
        style.append('@font-face { font-family: "Ok"; src: url("../fonts/ok.woff2"); font-display: optional; }')

    for i in range(pick(0, 0)):
        prop = rng.choice(["left", "width", "margin-top", "height"])
        style.append(f"@keyframes k{i} {{ from {{ {prop}: 0; }} to {{ {prop}: 40px; }} }}")
        planted["layout-animations"] += 1
    if rng.random() < 0.5:
        style.append(".fade { transition: opacity .3s ease; }")
    if level >= 2 and rng.random() < 0.5:
        style.append(".menu { transition: height .2s, opacity .2s; }")
        planted["layout-animations"] += 1

    files["css/site.css"] = ("\n".join(style) + "\n").encode()
    html = (
        "<!doctype html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n"
        '<link rel="stylesheet" href="css/site.css">\n'
        + "\n".join(head)
        + "\n</head>\n<body>\n"
        + "\n".join(body)
        + "\n<p>Fixture page.</p>\n</body>\n</html>\n"
    )
    html = html.encode()
    return html, files, {"counts": dict(sorted(planted.items())), "html_bytes": len(html),
                         "blocking_script_bytes": blocking}


def main(out, manifest=None):
    out = Path(out)
    if out.exists():
        shutil.rmtree(out)
    (out / "sites").mkdir(parents=True)
    rng = random.Random(SEED)
    rows = ["rank,domain"]
    truth = {}
    for rank in range(1, 26):
        domain = f"site{rank:02d}.test"
        rows.append(f"{rank},{domain}")
        if rank in DEAD:
            continue
        html, files, truth[domain] = build_page(rng, (rank - 1) // 5)
        site = out / "sites" / domain
        site.mkdir()
        (site / "index.html").write_bytes(html)
        for path, data in files.items():
            (site / path).parent.mkdir(parents=True, exist_ok=True)
            (site / path).write_bytes(data)
    (out / "ranked.csv").write_text("\n".join(rows) + "\n")
    spec = {"ranked_list": "ranked.csv", "bins": BINS, "samples_per_bin": 4, "seed": SEED}
    (out / "corpus.json").write_text(json.dumps(spec, indent=2) + "\n")
    if manifest:
        Path(manifest).write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main(*(sys.argv[1:] or ["src/docpolicy/data/fixture_corpus", "tests/golden/planted.json"]))
