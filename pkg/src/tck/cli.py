"""Command-line interface: ``tck <command> ...``.

Exit codes: 0 success, 1 usage, 2 parse or validation failure, 3 scale
exceeded, 4 census violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import census
from .canon import network_canonical_code
from .display import DEFAULT_CAP, displayed_trees, non_essential_arcs
from .edit import delete_reticulation_arc
from .errors import NotReticulationArc, ScaleExceeded, TckError, TooManyReticulations
from .formats import dump_network, load_network, resolve_vertex, serialize_enewick
from .network import has_3cycle, is_tree_child
from .octopus import build_octopus, build_tight_ladder, octopus_report, parse_octopus_spec, t_bound

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_SCALE = 3
EXIT_VIOLATION = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _arc_names(net, arc) -> list[str]:
    return [net.name(arc[0]), net.name(arc[1])]


# --- commands ---------------------------------------------------------------------------


def cmd_validate(args) -> int:
    net = load_network(args.file)
    tc = is_tree_child(net)
    payload = {
        "valid": True,
        "tree_child": tc,
        "n": net.n,
        "k": net.k,
        "vertices": len(net.vertices),
        "arcs": len(net.arcs),
        "three_cycles": has_3cycle(net) if tc else None,
        "code": network_canonical_code(net),
    }
    kind = "tree-child network" if tc else "network (not tree-child)"
    _emit(args, payload, f"valid {kind}: n={net.n}, k={net.k}")
    return EXIT_OK


def cmd_count(args) -> int:
    net = load_network(args.file)
    result = displayed_trees(net, cap=args.cap)
    payload = {"count": len(result), "embeddings": 1 << net.k}
    lines = [str(len(result))]
    if args.multiplicities:
        payload["multiplicities"] = dict(sorted(result.multiplicities.items()))
        lines += [f"{c}\t{t}" for t, c in sorted(result.multiplicities.items())]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    net = load_network(args.file)
    trees = sorted(displayed_trees(net, cap=args.cap).canonical_set)
    if args.out:
        Path(args.out).write_text("".join(t + "\n" for t in trees), encoding="utf-8")
    _emit(args, {"count": len(trees), "trees": trees}, "\n".join(trees))
    return EXIT_OK


def _parse_arc(net, text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--arc expects tail,head, got {text!r}")
    try:
        return resolve_vertex(net, parts[0].strip()), resolve_vertex(net, parts[1].strip())
    except KeyError as exc:
        raise UsageError(f"no vertex named {exc.args[0]!r}") from None


def cmd_delete_arc(args) -> int:
    net = load_network(args.file)
    arc = _parse_arc(net, args.arc)
    if arc not in net.reticulation_arcs:
        tail, head = _arc_names(net, arc)
        raise NotReticulationArc(f"({tail}, {head}) is not a reticulation arc")
    result, trace = delete_reticulation_arc(net, arc)
    if args.out:
        dump_network(result, args.out)
    text = serialize_enewick(result)
    payload = {
        "network": text,
        "n": result.n,
        "k": result.k,
        "deleted_arc": _arc_names(net, arc),
        "suppressed": [net.name(v) for v in trace.suppressed_vertices],
        "root_deleted": trace.root_deleted,
    }
    _emit(args, payload, text)
    return EXIT_OK


def cmd_nonessential(args) -> int:
    net = load_network(args.file)
    arcs = sorted(_arc_names(net, a) for a in non_essential_arcs(net, cap=args.cap))
    _emit(args, {"arcs": arcs}, "\n".join(f"{t},{h}" for t, h in arcs) or "(none)")
    return EXIT_OK


def cmd_octopus_build(args) -> int:
    spec = parse_octopus_spec(Path(args.spec).read_text(encoding="utf-8"))
    net = build_octopus(spec)
    if args.out:
        dump_network(net, args.out)
    text = serialize_enewick(net)
    _emit(args, {"network": text, "n": net.n, "k": net.k}, text)
    return EXIT_OK


def cmd_octopus_check(args) -> int:
    net = load_network(args.file)
    report = octopus_report(net)
    ladders = [
        {
            "order": m.order,
            "first_rung": _arc_names(net, m.first_rung),
            "last_rung": _arc_names(net, m.last_rung),
        }
        for m in report.ladders
    ]
    payload = {"is_octopus": report.is_octopus, "vacuous": report.vacuous, "ladders": ladders}
    _emit(args, payload, "true" if report.is_octopus else "false")
    return EXIT_OK


def cmd_bound(args) -> int:
    t = t_bound(args.n, args.k)
    _emit(args, {"n": args.n, "k": args.k, "t": t}, str(t))
    return EXIT_OK


CSV_FIELDS = [
    "n",
    "k",
    "generated",
    "min_T",
    "max_T",
    "bound",
    "equality_count",
    "octopus_count",
    "all_equality_octopus",
    "violations",
]


def write_csv(report: census.CensusReport, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for cell in report.cells:
            row = cell.to_dict()
            row["violations"] = len(row["violations"])
            writer.writerow(row)


def _dump_violations(report: census.CensusReport, where: Path) -> Path:
    where.mkdir(parents=True, exist_ok=True)
    for i, v in enumerate(report.violations):
        (where / f"violation_{i:04d}.enwk").write_text(v["enewick"] + "\n", encoding="utf-8")
    (where / "violations.json").write_text(json.dumps(report.violations, indent=2), encoding="utf-8")
    return where


def _census_text(report: census.CensusReport) -> str:
    head = f"{'n':>2} {'k':>2} {'networks':>8} {'min|T|':>6} {'max|T|':>6} {'t(n,k)':>6} {'eq':>4} {'octo':>4}"
    lines = [head]
    for c in report.cells:
        lines.append(
            f"{c.n:>2} {c.k:>2} {c.generated:>8} {str(c.min_T):>6} {str(c.max_T):>6} "
            f"{c.bound:>6} {c.equality_count:>4} {c.octopus_count:>4}"
        )
    n_bad = len(report.violations)
    lines.append("no violations" if not n_bad else f"{n_bad} VIOLATIONS")
    return "\n".join(lines)


def cmd_census(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    report = census.run_census(
        args.max_leaves,
        forbid_3cycles=args.forbid_3cycles,
        jobs=args.jobs,
        extended=args.extended,
    )
    payload = report.to_dict()
    if args.report:
        Path(args.report).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if args.csv:
        write_csv(report, args.csv)
    _emit(args, payload, _census_text(report))
    if report.violations:
        base = Path(args.report).with_suffix("") if args.report else Path("tck-census")
        where = _dump_violations(report, Path(f"{base}.violations"))
        print(f"offending networks written to {where}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_ladder(args) -> int:
    ladder = build_tight_ladder(args.order)
    net = ladder.network
    if args.out:
        dump_network(net, args.out, keep_names=True)
    text = serialize_enewick(net)
    payload = {
        "order": args.order,
        "network": text,
        "rungs": [_arc_names(net, r) for r in ladder.rungs],
    }
    _emit(args, payload, text)
    return EXIT_OK


# --- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a flag given before the subcommand from being reset after it
    common.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output on stdout"
    )
    common.add_argument(
        "-v", "--verbose", action="store_true", default=argparse.SUPPRESS, help="log progress to stderr"
    )

    parser = _Parser(
        prog="tck",
        description="Displayed trees, octopuses and lower-bound checks for tree-child networks.",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.set_defaults(func=fn)
        return p

    p = add("validate", cmd_validate, "parse and validate a network file")
    p.add_argument("file")

    p = add("count", cmd_count, "number of distinct displayed trees")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="maximum reticulations (default %(default)s)")
    p.add_argument("--multiplicities", action="store_true", help="also list embeddings per tree")

    p = add("enumerate", cmd_enumerate, "list the displayed trees in canonical Newick")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", help="write one tree per line to this file")

    p = add("delete-arc", cmd_delete_arc, "delete a reticulation arc and suppress")
    p.add_argument("file")
    p.add_argument("--arc", required=True, help="tail,head by vertex name or leaf label")
    p.add_argument("--out")

    p = add("nonessential", cmd_nonessential, "list non-essential reticulation arcs")
    p.add_argument("file")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    p = add("octopus", None, "build or recognise octopuses")
    osub = p.add_subparsers(dest="octopus_command", required=True, parser_class=_Parser)
    b = osub.add_parser("build", help="realise an octopus spec", parents=[common])
    b.add_argument("--spec", required=True, help="file holding an octopus spec")
    b.add_argument("--out")
    b.set_defaults(func=cmd_octopus_build)
    c = osub.add_parser("check", help="is the network an octopus?", parents=[common])
    c.add_argument("file")
    c.set_defaults(func=cmd_octopus_check)

    p = add("bound", cmd_bound, "print t(n, k)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)

    p = add("census", cmd_census, "exhaustively check the lower bound on small networks")
    p.add_argument("--max-leaves", type=int, required=True)
    p.add_argument("--forbid-3cycles", action="store_true", help="only enumerate 3-cycle-free networks")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--csv", help="write one CSV row per (n, k) cell here")
    p.add_argument("--extended", action="store_true", help="allow --max-leaves 5")

    p = add("ladder", cmd_ladder, "emit a tight caterpillar ladder")
    p.add_argument("--order", type=int, choices=(2, 3), required=True)
    p.add_argument("--out", help=".edl keeps the u/v vertex names")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = getattr(args, "json", False)
    args.verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tck: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ScaleExceeded, TooManyReticulations) as exc:
        print(f"tck: scale exceeded: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except TckError as exc:
        print(f"tck: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"tck: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
