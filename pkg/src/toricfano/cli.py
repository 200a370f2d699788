"""Command line front end.

Verbs: list, show, ch2, classify, paper-table, validate. Output is TSV
(header row, LF endings) or JSON (stable key order) and is byte-identical
across runs: fixed ordering, exact lowest-term fractions, no timestamps.
Exit codes: 0 success, 1 validation failure / unknown variety / value
mismatch, 2 parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .atlas import (
    REFERENCE_TABLE,
    AtlasParseError,
    parse,
    record_fan,
    shipped_database,
    validate_record,
)
from .chern import ch2_dot_surface, classify
from .fan import FanError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2


def _load_db(args):
    if args.db is None:
        return shipped_database()
    with open(args.db, encoding="utf-8") as handle:
        return parse(handle.read())


def _surface_str(cone) -> str:
    return "V(" + ",".join(str(i) for i in cone) + ")"


def _print_rows(args, columns, rows) -> None:
    if args.format == "json":
        payload = [{c: row[c] for c in columns} for row in rows]
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print("\t".join(columns))
        for row in rows:
            print("\t".join(row[c] for c in columns))


def _pool_map(jobs, func, items):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def cmd_list(args) -> int:
    db = _load_db(args)
    rows = [
        {
            "variety": rec.name,
            "rays": str(len(rec.rays)),
            "collections": "-" if rec.collections is None else str(len(rec.collections)),
        }
        for rec in db
    ]
    _print_rows(args, ["variety", "rays", "collections"], rows)
    return EXIT_OK


def cmd_show(args) -> int:
    db = _load_db(args)
    try:
        rec = db.lookup(args.name)
    except KeyError:
        print(f"unknown variety: {args.name}", file=sys.stderr)
        return EXIT_FAIL
    print(f"variety {rec.name}")
    for i, ray in enumerate(rec.rays, 1):
        print(f"  v{i} = ({', '.join(str(x) for x in ray)})")
    if rec.collections is None:
        print("  collections: derived from rays on load")
        return EXIT_OK
    tag = " (derived)" if rec.collections_derived else ""
    print(f"  collections{tag}:")
    try:
        fan = record_fan(rec)
        from .fan import primitive_relation

        for coll in rec.collections:
            rel = primitive_relation(fan, coll)
            if rel.sigma:
                rhs = " + ".join(
                    (f"{c}*v{j}" if c != 1 else f"v{j}") for j, c in sorted(rel.coeffs.items())
                )
            else:
                rhs = "0"
            lhs = " + ".join(f"v{i}" for i in coll)
            print(f"    {{{', '.join(str(i) for i in coll)}}}: {lhs} = {rhs}  degree {rel.degree}")
    except FanError as exc:
        print(f"  (relations unavailable: {exc})")
        for coll in rec.collections:
            print(f"    {{{', '.join(str(i) for i in coll)}}}")
    return EXIT_OK


def _parse_surface(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("surface must be two indices: i,j")
    try:
        i, j = (int(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError("surface indices must be integers") from exc
    return (i, j)


def cmd_ch2(args) -> int:
    db = _load_db(args)
    try:
        rec = db.lookup(args.name)
    except KeyError:
        print(f"unknown variety: {args.name}", file=sys.stderr)
        return EXIT_FAIL
    try:
        fan = record_fan(rec)
    except FanError as exc:
        print(f"{rec.name}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    if args.surface is not None:
        sigma = tuple(sorted(args.surface))
        if sigma not in fan.cones2:
            print(f"not a cone of {rec.name}: {_surface_str(args.surface)}", file=sys.stderr)
            return EXIT_FAIL
        value = ch2_dot_surface(fan, sigma)
        if args.format == "json":
            row = {"variety": rec.name, "surface": _surface_str(sigma), "value": str(value)}
            print(json.dumps(row, ensure_ascii=False, indent=2))
        else:
            print(value)
        return EXIT_OK

    report = classify(fan)
    rows = [
        {
            "variety": rec.name,
            "surface": _surface_str(sigma),
            "value": str(report.values[sigma]),
            "classification": "",
        }
        for sigma in fan.cones2
    ]
    rows.append(
        {
            "variety": rec.name,
            "surface": _surface_str(report.witness),
            "value": str(report.min_value),
            "classification": report.classification,
        }
    )
    _print_rows(args, ["variety", "surface", "value", "classification"], rows)
    return EXIT_OK


def _classify_worker(rec):
    report = validate_record(rec)
    if not report.ok:
        return rec.name, report, None
    return rec.name, report, classify(record_fan(rec))


def cmd_classify(args) -> int:
    db = _load_db(args)
    if args.all:
        targets = list(db)
    else:
        if not args.names:
            print("classify: give variety names or --all", file=sys.stderr)
            return EXIT_FAIL
        targets = []
        for name in args.names:
            try:
                targets.append(db.lookup(name))
            except KeyError:
                print(f"unknown variety: {name}", file=sys.stderr)
                return EXIT_FAIL

    results = _pool_map(args.jobs, _classify_worker, targets)
    failed = [(name, rep) for name, rep, out in results if out is None]
    if failed:
        for name, rep in failed:
            for problem in rep.problems:
                print(f"{name}: {problem}", file=sys.stderr)
            print(f"{name}: validation failed", file=sys.stderr)
        return EXIT_FAIL

    rows = []
    two_fano = []
    for name, _, report in results:
        rows.append(
            {
                "variety": name,
                "surface": _surface_str(report.witness),
                "value": str(report.min_value),
                "classification": report.classification,
            }
        )
        if report.classification == "two_fano":
            two_fano.append(name)
    columns = ["variety", "surface", "value", "classification"]
    if args.format == "json":
        payload = {
            "rows": [{c: row[c] for c in columns} for row in rows],
            "two_fano_count": len(two_fano),
            "two_fano": two_fano,
        }
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        _print_rows(args, columns, rows)
        names = (": " + " ".join(two_fano)) if two_fano else ""
        print(f"# two_fano {len(two_fano)} of {len(rows)}{names}")
    return EXIT_OK


def cmd_paper_table(args) -> int:
    db = _load_db(args)
    fans = {}
    rows = []
    mismatches = []
    for name, surface, expected in REFERENCE_TABLE:
        try:
            rec = db.lookup(name)
        except KeyError:
            print(f"missing variety: {name}", file=sys.stderr)
            return EXIT_FAIL
        if name not in fans:
            try:
                fans[name] = record_fan(rec)
            except FanError as exc:
                print(f"{name}: {exc}", file=sys.stderr)
                return EXIT_FAIL
        fan = fans[name]
        sigma = tuple(sorted(surface))
        if sigma not in fan.cones2:
            mismatches.append(f"{name} {_surface_str(surface)}: surface is not a cone")
            value = "n/a"
        else:
            computed = ch2_dot_surface(fan, sigma)
            value = str(computed)
            if computed != expected:
                mismatches.append(
                    f"{name} {_surface_str(surface)}: computed {computed}, reference {expected}"
                )
        rows.append({"variety": name, "surface": _surface_str(surface), "value": value})
    _print_rows(args, ["variety", "surface", "value"], rows)
    for line in mismatches:
        print(f"mismatch: {line}", file=sys.stderr)
    return EXIT_FAIL if mismatches else EXIT_OK


def cmd_validate(args) -> int:
    if args.file is None:
        db = shipped_database()
    else:
        with open(args.file, encoding="utf-8") as handle:
            db = parse(handle.read())
    reports = _pool_map(args.jobs, validate_record, list(db))
    rows = []
    all_ok = True
    for rep in reports:
        rows.append(
            {
                "variety": rep.name,
                "smooth": str(rep.smooth).lower(),
                "complete": str(rep.complete).lower(),
                "round_trip": str(rep.round_trip).lower(),
                "fano": str(rep.fano).lower(),
                "ok": str(rep.ok).lower(),
            }
        )
        if not rep.ok:
            all_ok = False
            for problem in rep.problems:
                print(f"{rep.name}: {problem}", file=sys.stderr)
    _print_rows(args, ["variety", "smooth", "complete", "round_trip", "fano", "ok"], rows)
    return EXIT_OK if all_ok else EXIT_FAIL


def _add_common_options(parser, suppress: bool) -> None:
    # the same options hang off the main parser (with real defaults) and off
    # every subcommand (defaulting to SUPPRESS, so a flag given before the
    # verb is not clobbered and a flag given after the verb wins)
    kwargs = {"default": argparse.SUPPRESS} if suppress else {}
    parser.add_argument(
        "--db",
        metavar="PATH",
        help="atlas file (default: bundled database)",
        **({"default": None} if not suppress else kwargs),
    )
    parser.add_argument(
        "--format",
        choices=("tsv", "json"),
        help="output format (default tsv)",
        **({"default": "tsv"} if not suppress else kwargs),
    )
    parser.add_argument(
        "--jobs",
        type=int,
        metavar="N",
        help="worker threads for per-variety computations",
        **({"default": os.cpu_count() or 1} if not suppress else kwargs),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricfano",
        description="Smooth toric Fano 4-folds: exact second Chern character "
        "intersection numbers on invariant surfaces.",
    )
    _add_common_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def subparser(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_common_options(p, suppress=True)
        p.set_defaults(func=func)
        return p

    subparser("list", cmd_list, "list varieties with ray/collection counts")

    p = subparser("show", cmd_show, "print one variety's rays, collections and relations")
    p.add_argument("name")

    p = subparser("ch2", cmd_ch2, "second Chern character values on invariant surfaces")
    p.add_argument("name")
    p.add_argument(
        "--surface",
        type=_parse_surface,
        metavar="I,J",
        help="single 2-cone as two 1-based ray indices",
    )

    p = subparser("classify", cmd_classify, "minimum ch2 value and class per variety")
    p.add_argument("names", nargs="*", metavar="NAME")
    p.add_argument("--all", action="store_true", help="classify the whole database")

    subparser(
        "paper-table",
        cmd_paper_table,
        "recompute the bundled reference table and flag any deviation",
    )

    p = subparser("validate", cmd_validate, "run structural checks on an atlas file")
    p.add_argument("file", nargs="?", help="atlas file (default: bundled database)")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AtlasParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as exc:
        print(f"cannot read file: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
