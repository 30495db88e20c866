"""Command-line front end: ``wqs <verb> --market FILE ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import battery, corpus
from .errors import AxiomViolation, MarketError
from .lattice import enumerate_wqs, export_hasse, join, meet
from .market import DEFAULT_BUDGET, Market, is_substitutable, satisfies_lad
from .marketfile import load_market
from .matchings import (
    blocking_pairs,
    format_matching,
    format_pair,
    is_individually_rational,
    is_stable,
    is_worker_quasi_stable,
    parse_matching,
)
from .tarski import fixed_points, format_trace, stabilize, trace_to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    with_market = argparse.ArgumentParser(add_help=False, parents=[common])
    with_market.add_argument("--market", "-m", required=True, type=Path)

    parser = _Parser(prog="wqs", description="Worker-quasi-stable matchings and re-stabilization.")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    verbs.add_parser("axioms", parents=[with_market], help="substitutability and LAD per firm")
    p = verbs.add_parser("check", parents=[with_market], help="IR / WQS / stability of a matching")
    p.add_argument("matching")
    verbs.add_parser("enumerate", parents=[with_market], help="list the worker-quasi-stable set")
    for verb in ("join", "meet"):
        p = verbs.add_parser(verb, parents=[with_market], help=f"{verb} of two WQS matchings")
        p.add_argument("first")
        p.add_argument("second")
    p = verbs.add_parser("stabilize", parents=[with_market], help="iterate the operator to a fixed point")
    p.add_argument("matching")
    p.add_argument("--max-rounds", type=int)
    verbs.add_parser("fixed-points", parents=[with_market], help="the stable matchings")
    p = verbs.add_parser("hasse", parents=[with_market], help="DOT diagram of the lattice")
    p.add_argument("--out", "-o", type=Path)
    p = verbs.add_parser("verify", parents=[common], help="run the invariant battery")
    p.add_argument("--market", "-m", type=Path, help="verify one file instead of the shipped corpus")
    p.add_argument("--seed", type=int, help="also verify seeded random markets")
    p.add_argument("--count", type=int, default=10, help="how many seeded markets (default 10)")
    return parser


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write(text)


def cmd_axioms(args, market: Market) -> int:
    rows, lines, ok = [], [], True
    for f, name in enumerate(market.firms):
        sub, lad = is_substitutable(market, f), satisfies_lad(market, f)
        ok &= sub.holds
        rows.append(
            {
                "firm": name,
                "substitutable": sub.holds,
                "substitutable_witness": None if sub else market.describe_witness(sub.witness),
                "lad": lad.holds,
                "lad_witness": None if lad else market.describe_witness(lad.witness),
            }
        )
        line = f"{name}: substitutable {'yes' if sub else 'no ' + market.describe_witness(sub.witness)}"
        line += f"; LAD {'yes' if lad else 'no ' + market.describe_witness(lad.witness)}"
        lines.append(line)
    _emit(args, "\n".join(lines) + "\n", rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check(args, market: Market) -> int:
    mu = parse_matching(market, args.matching)
    pairs = [format_pair(market, p) for p in blocking_pairs(market, mu)]
    report = {
        "matching": format_matching(market, mu),
        "individually_rational": is_individually_rational(market, mu),
        "worker_quasi_stable": is_worker_quasi_stable(market, mu),
        "stable": is_stable(market, mu),
        "blocking_pairs": pairs,
    }
    yn = lambda b: "yes" if b else "no"  # noqa: E731
    text = (
        f"matching: {report['matching']}\n"
        f"individually rational: {yn(report['individually_rational'])}\n"
        f"worker-quasi-stable: {yn(report['worker_quasi_stable'])}\n"
        f"stable: {yn(report['stable'])}\n"
        f"blocking pairs: {' '.join(pairs) if pairs else 'none'}\n"
    )
    _emit(args, text, report)
    return EXIT_OK if report["stable"] else EXIT_FAIL


def cmd_enumerate(args, market: Market) -> int:
    lat = enumerate_wqs(market)
    rows = [(format_matching(market, mu), is_stable(market, mu)) for mu in lat.elements]
    text = "".join(f"{m}{'  stable' if s else ''}\n" for m, s in rows)
    _emit(args, text, [{"matching": m, "stable": s} for m, s in rows])
    return EXIT_OK


def cmd_join(args, market: Market) -> int:
    a, b = parse_matching(market, args.first), parse_matching(market, args.second)
    out = format_matching(market, join(market, a, b))
    _emit(args, out + "\n", {"join": out})
    return EXIT_OK


def cmd_meet(args, market: Market) -> int:
    lat = enumerate_wqs(market)
    a, b = parse_matching(market, args.first), parse_matching(market, args.second)
    out = format_matching(market, meet(lat, a, b))
    _emit(args, out + "\n", {"meet": out})
    return EXIT_OK


def cmd_stabilize(args, market: Market) -> int:
    mu = parse_matching(market, args.matching)
    trace = stabilize(market, mu, max_rounds=args.max_rounds)
    _emit(args, format_trace(market, trace), trace_to_json(market, trace))
    return EXIT_OK


def cmd_fixed_points(args, market: Market) -> int:
    lat = enumerate_wqs(market)
    out = [format_matching(market, mu) for mu in fixed_points(market, lat)]
    _emit(args, "".join(m + "\n" for m in out), out)
    return EXIT_OK


def cmd_hasse(args, market: Market) -> int:
    lat = enumerate_wqs(market)
    dot = export_hasse(lat, [mu for mu in lat.elements if is_stable(market, mu)])
    if args.out is None:
        sys.stdout.write(dot)
    else:
        args.out.write_text(dot, encoding="utf-8")
        summary = {"out": str(args.out), "nodes": len(lat), "edges": len(lat.covers)}
        _emit(args, f"wrote {args.out}: {len(lat)} nodes, {len(lat.covers)} edges\n", summary)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.market is not None:
        markets = [(args.market.stem, load_market(args.market, args.budget))]
    else:
        markets = [(name, m.with_budget(args.budget)) for name, m in corpus.corpus_files()]
    if args.seed is not None:
        markets += corpus.seeded_markets(args.seed, args.count)
    findings = []
    for name, market in markets:
        findings.extend(battery.run_battery(market, name))
    bad = battery.failures(findings)
    checked = sum(f.status in (battery.PASS, battery.FAIL) for f in findings)
    summary = f"{len(markets)} markets, {checked} checks, {len(bad)} failures"
    if args.format == "json":
        payload = {
            "findings": [vars(f) for f in findings],
            "markets": len(markets),
            "checks": checked,
            "failures": len(bad),
        }
        print(json.dumps(payload, indent=2))
    else:
        sys.stdout.write("".join(f.line() + "\n" for f in findings) + summary + "\n")
    return EXIT_FAIL if bad else EXIT_OK


_COMMANDS = {
    "axioms": cmd_axioms,
    "check": cmd_check,
    "enumerate": cmd_enumerate,
    "join": cmd_join,
    "meet": cmd_meet,
    "stabilize": cmd_stabilize,
    "fixed-points": cmd_fixed_points,
    "hasse": cmd_hasse,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.verb == "verify":
            return cmd_verify(args)
        market = load_market(args.market, args.budget)
        return _COMMANDS[args.verb](args, market)
    except AxiomViolation as exc:
        print(f"wqs: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (MarketError, OSError) as exc:
        print(f"wqs: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
