"""Command line entry point: ``docpolicy {audit,enforce,proxy,corpus,synth}``."""
from __future__ import annotations

import argparse
import logging
import re
import sys
from typing import List, Optional

from . import corpus as corpus_mod
from .detect import audit
from .enforce import enforce, report
from .extract import extract_snapshot
from .fetch import FetchConfig, Unreachable, fetch_page
from .model import FeatureKind, FontDisplay, NetworkProfile, PolicyError, SLOW_4G, ViewportConfig, default_policy_set
from .proxy import load_policy, run_proxy
from .serialize import dumps
from .synth import generate_synthetic

EXIT_OK, EXIT_ERROR, EXIT_VIOLATIONS = 0, 1, 2


def parse_viewport(text: str) -> ViewportConfig:
    m = re.fullmatch(r"(\d+)x(\d+)(?:@([\d.]+))?", text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"viewport must look like 360x640@3, got {text!r}")
    return ViewportConfig(int(m.group(1)), int(m.group(2)), float(m.group(3) or 1.0))


def parse_network(text: str) -> NetworkProfile:
    try:
        rtt, down, up = (float(x) for x in text.split(","))
        return NetworkProfile(rtt, down, up)
    except ValueError:
        raise argparse.ArgumentTypeError(f"network must look like 150,1600,750, got {text!r}") from None


def _policy(text: Optional[str]):
    if text is None:
        return default_policy_set()
    try:
        return load_policy(text)
    except PolicyError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--viewport", type=parse_viewport, default=ViewportConfig(),
                   help="WxH@DPR, default 360x640@3")
    p.add_argument("--network", type=parse_network, default=SLOW_4G,
                   help="rtt_ms,down_kbps,up_kbps, default 150,1600,750 (Slow 4G)")
    p.add_argument("--policy", type=_policy, default=None,
                   help="policy file or inline header value; default enables every feature")


def _ps(args):
    return default_policy_set() if args.policy is None else args.policy


class _Parser(argparse.ArgumentParser):
    # Usage errors exit 1: argparse's default of 2 would read as "violations".
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="docpolicy", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("audit", help="audit one page and print a JSON report")
    p.add_argument("target", help="http(s) URL, file path or fixture directory")
    p.add_argument("--timeout", type=float, default=15.0)
    _common(p)

    p = sub.add_parser("enforce", help="print the snapshot as enforcement would leave it")
    p.add_argument("target")
    p.add_argument("--timeout", type=float, default=15.0)
    _common(p)

    p = sub.add_parser("proxy", help="run the header-injecting proxy")
    p.add_argument("--listen", default="127.0.0.1:8888")
    p.add_argument("--report-only", action="store_true")
    _common(p)

    p = sub.add_parser("corpus", help="rank-binned corpus study")
    p.add_argument("spec", help="corpus spec JSON")
    p.add_argument("--out", default="corpus-out")
    p.add_argument("--seed", type=int)
    p.add_argument("--offline", metavar="DIR", help="audit <DIR>/<domain>/index.html instead of the network")
    p.add_argument("--bins", help="comma-separated LO-HI bins to run, e.g. 1-100")
    p.add_argument("--workers", type=int, default=4)
    _common(p)

    p = sub.add_parser("synth", help="write synthetic violation pages")
    p.add_argument("feature", help="feature name or 'all'")
    p.add_argument("out_dir")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--font-display", choices=[d.value for d in FontDisplay])
    _common(p)
    return parser


def _snapshot(args):
    url, html, resources = fetch_page(args.target, FetchConfig.from_env(timeout_s=args.timeout))
    return extract_snapshot(html, url, resources)


def cmd_audit(args) -> int:
    try:
        snap = _snapshot(args)
    except Unreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    rep = report(snap, _ps(args), args.viewport, args.network)
    sys.stdout.write(dumps(rep))
    return EXIT_VIOLATIONS if rep.violations else EXIT_OK


def cmd_enforce(args) -> int:
    try:
        snap = _snapshot(args)
    except Unreachable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(dumps(enforce(snap, _ps(args), args.viewport)))
    return EXIT_OK


def cmd_proxy(args) -> int:
    mode = "report-only" if args.report_only else "enforce"
    run_proxy(args.listen, _ps(args), mode)
    return EXIT_OK


def cmd_corpus(args) -> int:
    try:
        spec = corpus_mod.load_spec(args.spec)
        if args.seed is not None:
            spec = corpus_mod.CorpusSpec(spec.ranked_list_path, spec.bins, spec.samples_per_bin, args.seed)
        bins = [corpus_mod.parse_bin(b) for b in args.bins.split(",")] if args.bins else None
        ps = _ps(args)
        if args.offline:
            auditor = corpus_mod.offline_auditor(args.offline, ps, args.viewport, args.network)
        else:
            auditor = corpus_mod.live_auditor(ps, args.viewport, args.network)
        result = corpus_mod.study(spec, auditor, bins, max_workers=args.workers)
    except (corpus_mod.CorpusError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    for path in result.write(args.out).values():
        print(path)
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.feature == "all":
        kinds = list(FeatureKind)
    else:
        try:
            kinds = [FeatureKind(args.feature)]
        except ValueError:
            print(f"error: unknown feature {args.feature!r}", file=sys.stderr)
            return EXIT_ERROR
    for kind in kinds:
        page = generate_synthetic(kind, args.n, font_display=args.font_display)
        out = args.out_dir if len(kinds) == 1 else f"{args.out_dir}/{kind.value}"
        found = audit(page.snapshot(), _ps(args), args.viewport)
        print(f"{page.write(out)}\t{len(found)} violation(s)")
    return EXIT_OK


COMMANDS = {
    "audit": cmd_audit,
    "enforce": cmd_enforce,
    "proxy": cmd_proxy,
    "corpus": cmd_corpus,
    "synth": cmd_synth,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
