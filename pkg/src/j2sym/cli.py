"""Command-line front end.

Commands: ``verify`` (full pipeline and report), ``graph`` (DOT emission),
``enumerate`` (coset enumeration only), ``relations`` (identity catalog),
``subgroups`` (maximal-subgroup table).  Reports are deterministic: the
same configuration produces byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import j2data, pipeline
from .presentation import Presentation
from .toddcox import LimitExceeded, enumerate_cosets
from .words import Word

log = logging.getLogger("j2sym")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--spec", type=Path, default=None,
                   help="progenitor spec file (default: the shipped data)")
    p.add_argument("--limit", type=int, default=1_000_000,
                   help="coset definition limit (default 1000000)")
    p.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt",
                   help="enumeration strategy (default hlt)")
    p.add_argument("--out", type=Path, default=None, help="output file")
    p.add_argument("--strict", action="store_true",
                   help="published-claim findings also fail the run")
    p.add_argument("--json", action="store_true", dest="as_json",
                   help="print the report as JSON")
    p.add_argument("-v", "--verbose", action="store_true",
                   help="log stage progress")


def _load_data(args) -> j2data.ConstructionData:
    if args.spec is None:
        return j2data.load_builtin()
    return j2data.load_spec_data(args.spec)


def _dump(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out is not None:
        args.out.write_text(text)
    if args.as_json or args.out is None:
        sys.stdout.write(text if args.as_json else "")


def cmd_verify(args) -> int:
    if args.limit <= 0:
        print("error: --limit must be positive", file=sys.stderr)
        return 2
    data = _load_data(args)
    report, ok = pipeline.run_verify(
        data, limit=args.limit, strategy=args.strategy, strict=args.strict
    )
    if args.as_json or args.out is not None:
        text = json.dumps(report, indent=2, sort_keys=True) + "\n"
        if args.out is not None:
            args.out.write_text(text)
        if args.as_json:
            sys.stdout.write(text)
    if not args.as_json:
        _print_verify_summary(report)
    if "failure" in report:
        print(f"FAILED at stage {report['failure']['stage']}: "
              f"{report['failure']['message']}", file=sys.stderr)
    return 0 if ok else 1


def _print_verify_summary(report: dict) -> None:
    if "failure" in report:
        return
    enum = report["enumeration"]
    orders = report["orders"]
    print(f"cosets:            {enum['cosets']} "
          f"(definitions {enum['definitions']}, max live {enum['max_live']})")
    print(f"control order:     {orders['control']}")
    print(f"image order:       {orders['image']} "
          f"(faithfulness certificate: {orders['faithfulness_certificate']})")
    gr = report["graph"]
    counts = sorted(n["count"] for n in gr["nodes"])
    print(f"double cosets:     {len(gr['nodes'])} nodes, counts {counts}")
    ids = report["identities"]
    npass = sum(1 for e in ids["entries"] if e["pass"])
    print(f"identity catalog:  {npass}/{len(ids['entries'])} pass")
    for label in ids["failures"]:
        print(f"  FAIL {label}")
    for entry in report["coset_stabilizers"]:
        print(f"coset stabilizer {entry['name']}: "
              f"{'pass' if entry['pass'] else 'FAIL'}")
    simp = report["simplicity"]
    print(f"simplicity:        {'simple' if simp['simple'] else 'NOT ESTABLISHED'}")
    cent = report["involution_centralizer"]
    print(f"centralizer:       order {cent['centralizer_order']} "
          f"(class size {cent['class_size']})")
    rows = report["maximal_subgroups"]
    nok = sum(1 for r in rows if r["status"] == "ok")
    print(f"subgroup rows:     {nok}/{len(rows)} match")
    for r in rows:
        if r["status"] != "ok":
            detail = r.get("order", r.get("reason"))
            print(f"  {r['status'].upper()} {r['name']}: {detail} "
                  f"(expected {r['expected_order']})")
    if report["findings"]:
        print(f"findings ({len(report['findings'])}):")
        for f in report["findings"]:
            print(f"  - {f}")
    print(f"verdict:           {'PASS' if report['pass'] else 'FAIL'}")


def cmd_graph(args) -> int:
    data = _load_data(args)
    try:
        result = pipeline.construct_image(
            data, limit=args.limit, strategy=args.strategy
        )
    except (pipeline.StageError, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    graph = pipeline.build_graph(result)
    dot = pipeline.graph_to_dot(graph)
    if args.out is not None:
        args.out.write_text(dot)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_enumerate(args) -> int:
    if args.presentation is not None:
        relators = [Word.parse(line) for line in _word_lines(args.presentation)]
        subgroup = (
            [Word.parse(line) for line in _word_lines(args.subgroup)]
            if args.subgroup
            else []
        )
        symbols = sorted(
            {s for w in relators for s in w.symbols()}
            | {s for w in subgroup for s in w.symbols()}
        )
        pres = Presentation(tuple(symbols), tuple(relators))
    else:
        data = _load_data(args)
        try:
            result = pipeline.construct_image(
                data, limit=args.limit, strategy=args.strategy
            )
        except (pipeline.StageError, LimitExceeded) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        stats = result.table.stats
        _print_stats(stats)
        return 0
    try:
        table = enumerate_cosets(
            pres, subgroup, strategy=args.strategy, limit=args.limit
        )
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return 1
    _print_stats(table.stats)
    return 0


def _print_stats(stats) -> None:
    print(f"{stats.cosets} cosets")
    print(f"definitions:  {stats.definitions}")
    print(f"max live:     {stats.max_live}")
    print(f"coincidences: {stats.coincidences}")


def _word_lines(path: Path) -> list[str]:
    out = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def cmd_relations(args) -> int:
    data = _load_data(args)
    if not data.catalog:
        print("no identity catalog for this spec", file=sys.stderr)
        return 1
    try:
        result = pipeline.construct_image(
            data, limit=args.limit, strategy=args.strategy
        )
    except (pipeline.StageError, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    entries = pipeline.identity_report(result)
    if args.as_json or args.out is not None:
        _dump({"identities": entries}, args)
    if not args.as_json:
        for e in entries:
            print(f"{'PASS' if e['pass'] else 'FAIL'}  {e['label']:14s} ({e['kind']})")
    failures = [e for e in entries if not e["pass"]]
    return 1 if (args.strict and failures) else 0


def cmd_subgroups(args) -> int:
    data = _load_data(args)
    if not data.subgroup_rows:
        print("no subgroup table for this spec", file=sys.stderr)
        return 1
    try:
        result = pipeline.construct_image(
            data, limit=args.limit, strategy=args.strategy
        )
    except (pipeline.StageError, LimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rows = pipeline.maximal_subgroup_report(result)
    if args.as_json or args.out is not None:
        _dump({"maximal_subgroups": rows}, args)
    if not args.as_json:
        for r in rows:
            got = r.get("order", f"skipped: {r.get('reason')}")
            print(f"{r['status']:8s} {r['name']:16s} order {got} "
                  f"(expected {r['expected_order']})")
    bad = [r for r in rows if r["status"] == "mismatch"]
    return 1 if (args.strict and bad) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="j2sym",
        description="Construct the Hall-Janko group from its 32-letter "
        "symmetric presentation and verify the published claims.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the full verification pipeline")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("graph", help="emit the double coset graph as DOT")
    _add_common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("enumerate", help="run the coset enumeration only")
    _add_common(p)
    p.add_argument("--presentation", type=Path, default=None,
                   help="relator file (one word per line) instead of a spec")
    p.add_argument("--subgroup", type=Path, default=None,
                   help="subgroup word file for --presentation")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("relations", help="evaluate the identity catalog")
    _add_common(p)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("subgroups", help="evaluate the maximal-subgroup table")
    _add_common(p)
    p.set_defaults(func=cmd_subgroups)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
