"""Command-line front end.

    incicolor analyze --family cycle:5
    incicolor analyze --input graph.g6 --planar --dot out.dot
    incicolor compose cartesian cycle:3 cycle:3
    incicolor scan spec.json --format csv --out table.csv
    incicolor verify --family cycle:4 --coloring col.json

Exit codes: 0 success, 1 internal/integrity failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from incicolor import bounds, graphs
from incicolor.decomp import (
    chromatic_index_exact,
    domination_number_exact,
    star_arboricity_exact,
)
from incicolor.graphs import Graph, GraphError, GraphFamily
from incicolor.incidence import (
    DEFAULT_ARC_GUARD,
    ColoringError,
    IncidenceColoring,
    InstanceTooLarge,
    coloring_from_json,
    exact_chi_i,
    greedy_coloring,
    verify,
)

SCAN_COLUMNS = (
    "id", "family", "n", "m", "max_degree", "gamma", "st", "chi_prime",
    "domination_lower", "thm1_upper", "chi_i", "sandwich_violation", "error", "runtime_s",
)


class InputError(Exception):
    """Bad user input; maps to exit code 2."""


# --- graph loading -------------------------------------------------------------


def load_graph(family: str | None, path: str | None, seed: int) -> tuple[Graph, list[int] | None, str]:
    if (family is None) == (path is None):
        raise InputError("give exactly one of --family or --input")
    if family is not None:
        spec = graphs.parse_family(family, seed=seed)
        G, ordering = graphs.generate_with_ordering(spec)
        return G, ordering, spec.instance_id()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return graphs.parse_graph_text(text), None, str(path)


def load_ordering(path: str) -> list[int]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read ordering {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = text.split()
    try:
        return [int(x) for x in data]
    except (TypeError, ValueError):
        raise InputError(f"ordering file {path} must list vertex labels") from None


def write_text(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def coloring_dot(c: IncidenceColoring, name: str = "G") -> str:
    d = c.as_dict()
    labels = {(u, v): f"{d[(u, v)]}/{d[(v, u)]}" for u, v in c.graph.edges()}
    return c.graph.to_dot(labels, name=name)


# --- analyze ---------------------------------------------------------------------


def cmd_analyze(args: argparse.Namespace) -> int:
    G, ordering, label = load_graph(args.family, args.input, args.seed)
    if args.ordering:
        ordering = load_ordering(args.ordering)
    exact: bool | None = None
    if args.exact is False:
        exact = False
    elif args.exact or args.force:
        exact = True
    elif 2 * G.edge_count > args.guard:
        print(
            f"warning: {2 * G.edge_count} arcs exceed the guard of {args.guard}; "
            "reporting bounds only (use --exact to force)",
            file=sys.stderr,
        )
    try:
        report = bounds.bound_report(G, planar=args.planar, ordering=ordering, exact=exact, guard=args.guard)
    except GraphError as exc:
        raise InputError(str(exc)) from None
    if report.exact is not None and not verify(G, report.exact[1]):
        raise bounds.IntegrityError("exact solver returned an invalid witness")
    out = report.to_json()
    out["input"] = label
    write_text(json.dumps(out, indent=2) + "\n", args.out)
    if args.dot:
        if report.exact is not None:
            Path(args.dot).write_text(coloring_dot(report.exact[1]))
        else:
            Path(args.dot).write_text(G.to_dot())
    return 0


# --- compose -----------------------------------------------------------------------


def _operand_coloring(G: Graph, how: str, guard: int) -> IncidenceColoring:
    if how == "greedy":
        return greedy_coloring(G)
    return exact_chi_i(G, guard=guard)[1]


def cmd_compose(args: argparse.Namespace) -> int:
    G1, _, id1 = load_graph(args.first, None, args.seed)
    G2, _, id2 = load_graph(args.second, None, args.seed)
    c1 = _operand_coloring(G1, args.coloring, args.guard)
    c2 = _operand_coloring(G2, args.coloring, args.guard)
    if args.op == "union":
        colored = bounds.compose_union_coloring(G1, c1, G2, c2)
        budget = c1.palette_size + c2.palette_size
    elif args.op == "cartesian":
        colored = bounds.compose_cartesian_coloring(G1, c1, G2, c2)
        budget = c1.palette_size + c2.palette_size
    else:
        colored = bounds.compose_join_coloring(G1, c1, G2, c2)
        budget = bounds.join_upper_bound(G1.n, G2.n, c1.palette_size, c2.palette_size)
    verdict = verify(colored.graph, colored)
    if not verdict or colored.palette_size > budget:
        raise bounds.IntegrityError(f"composed {args.op} coloring failed verification")
    out = {
        "schema": bounds.SCHEMA_VERSION,
        "op": args.op,
        "operands": [
            {"id": id1, "n": G1.n, "m": G1.edge_count, "palette_size": c1.palette_size},
            {"id": id2, "n": G2.n, "m": G2.edge_count, "palette_size": c2.palette_size},
        ],
        "graph6": colored.graph.to_graph6(),
        "n": colored.graph.n,
        "m": colored.graph.edge_count,
        "palette_size": colored.palette_size,
        "budget": budget,
        "valid": verdict.valid,
        "coloring": colored.to_json(),
    }
    if args.op == "join":
        out["join_branch"] = bounds.join_branch(G1.n, G2.n, c1.palette_size, c2.palette_size)
    write_text(json.dumps(out, indent=2) + "\n", args.out)
    if args.dot:
        Path(args.dot).write_text(coloring_dot(colored))
    return 0


# --- verify ------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace) -> int:
    G, _, _ = load_graph(args.family, args.input, args.seed)
    try:
        c = coloring_from_json(G, Path(args.coloring).read_text())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot load coloring: {exc}") from None
    verdict = verify(G, c)
    out = {
        "valid": verdict.valid,
        "palette_size": c.palette_size,
        "violations": [
            {"first": list(v.first), "second": list(v.second), "color": v.color}
            for v in verdict.violations
        ],
    }
    write_text(json.dumps(out, indent=2) + "\n", args.out)
    return 0 if verdict.valid else 2


# --- scan --------------------------------------------------------------------------


@dataclass
class ScanSpec:
    """Expanded scan request. ``instances`` is in emission order."""

    instances: list[GraphFamily]
    guard: int = DEFAULT_ARC_GUARD
    exact: bool = True
    timing: bool = True
    fmt: str = "json"
    out: str | None = None
    extra: dict = field(default_factory=dict)


def _expand(value: Any) -> list:
    if isinstance(value, dict):
        if set(value) != {"range"}:
            raise InputError(f"unsupported value spec {value!r}; use {{'range': [lo, hi]}}")
        lo, hi = value["range"]
        return list(range(int(lo), int(hi) + 1))
    if isinstance(value, list):
        return list(value)
    return [value]


def parse_scan_spec(data: dict) -> ScanSpec:
    """Scan spec JSON::

        {"schema": 1,
         "families": [
            {"family": "cycle", "args": [{"range": [3, 12]}]},
            {"family": "random_gnp", "args": [8, 0.5],
             "seeds": {"range": [0, 199]}, "connected": true}],
         "guard": 120, "exact": true, "timing": true,
         "format": "csv", "out": "table.csv"}

    Each ``args`` position is a scalar, a list, or an inclusive range; the
    instance list is their Cartesian product (times seeds), in order.
    """
    if not isinstance(data, dict):
        raise InputError("scan spec must be a JSON object")
    if data.get("schema", 1) != 1:
        raise InputError(f"unsupported scan spec schema {data.get('schema')!r}")
    instances: list[GraphFamily] = []
    for entry in data.get("families", []):
        try:
            tag = entry["family"]
        except (KeyError, TypeError):
            raise InputError(f"family entry without a 'family' name: {entry!r}") from None
        if tag not in graphs.FAMILIES:
            raise InputError(f"unknown graph family {tag!r}")
        positions = [_expand(v) for v in entry.get("args", [])]
        seeds = _expand(entry["seeds"]) if "seeds" in entry else [None]
        connected = bool(entry.get("connected", False))
        for combo in itertools.product(*positions):
            for seed in seeds:
                instances.append(GraphFamily(tag, tuple(combo), seed, connected))
    fmt = data.get("format", "json")
    if fmt not in ("json", "csv"):
        raise InputError(f"unsupported format {fmt!r}")
    return ScanSpec(
        instances=instances,
        guard=int(data.get("guard", DEFAULT_ARC_GUARD)),
        exact=bool(data.get("exact", True)),
        timing=bool(data.get("timing", True)),
        fmt=fmt,
        out=data.get("out"),
    )


def scan_instance(spec: GraphFamily, guard: int, exact: bool, timing: bool) -> dict:
    """One table row. Failures are recorded in the row instead of raised."""
    row: dict[str, Any] = {c: None for c in SCAN_COLUMNS}
    row["id"] = spec.instance_id()
    row["family"] = spec.tag
    row["sandwich_violation"] = False
    start = time.perf_counter()
    try:
        G = graphs.generate(spec)
        row.update(n=G.n, m=G.edge_count, max_degree=G.max_degree)
        gamma, _ = domination_number_exact(G, guard=guard)
        st, sfd = star_arboricity_exact(G, gamma=gamma, guard=guard)
        chi_p, ec = chromatic_index_exact(G, guard=guard)
        thm = bounds.construct_thm1_coloring(G, sfd, ec)
        if not verify(G, thm):
            raise bounds.IntegrityError("upper-bound construction failed verification")
        lower = bounds.lower_bound_domination(G, gamma)
        row.update(gamma=gamma, st=st, chi_prime=chi_p, domination_lower=lower, thm1_upper=thm.palette_size)
        violation = thm.palette_size > chi_p + st or lower > thm.palette_size
        if exact:
            chi, witness = exact_chi_i(G, guard=guard)
            if not verify(G, witness):
                raise bounds.IntegrityError("exact witness failed verification")
            row["chi_i"] = chi
            violation = violation or not lower <= chi <= thm.palette_size
        row["sandwich_violation"] = violation
    except (InstanceTooLarge, GraphError, bounds.BoundError, bounds.IntegrityError, ColoringError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    if timing:
        row["runtime_s"] = round(time.perf_counter() - start, 6)
    return row


def _scan_row(job: tuple[GraphFamily, int, bool, bool]) -> dict:
    return scan_instance(*job)


def run_scan(spec: ScanSpec, jobs: int = 1) -> list[dict]:
    work = [(inst, spec.guard, spec.exact, spec.timing) for inst in spec.instances]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map() yields in submission order, whatever order workers finish in
            return list(pool.map(_scan_row, work, chunksize=4))
    return [_scan_row(w) for w in work]


def format_rows(rows: Sequence[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SCAN_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: "" if row[k] is None else row[k] for k in SCAN_COLUMNS})
        return buf.getvalue()
    payload = {"schema": bounds.SCHEMA_VERSION, "columns": list(SCAN_COLUMNS), "rows": list(rows)}
    return json.dumps(payload, indent=2) + "\n"


def cmd_scan(args: argparse.Namespace) -> int:
    try:
        data = json.loads(Path(args.spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot load scan spec {args.spec}: {exc}") from None
    spec = parse_scan_spec(data)
    if args.format:
        spec.fmt = args.format
    if args.out:
        spec.out = args.out
    if args.guard is not None:
        spec.guard = args.guard
    if args.no_exact:
        spec.exact = False
    if args.no_timing:
        spec.timing = False
    rows = run_scan(spec, jobs=args.jobs)
    write_text(format_rows(rows, spec.fmt), spec.out)
    return 0


# --- entry point -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incicolor", description="Incidence coloring bounds and solvers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_source(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", help="family spec NAME:ARGS, e.g. cycle:5, wheel:8, complete_bipartite:3,2")
        p.add_argument("--input", help="graph file (graph6 word or 'n m' edge list)")
        p.add_argument("--seed", type=int, default=0, help="seed for random families")

    p = sub.add_parser("analyze", help="bounds report for one graph")
    graph_source(p)
    p.add_argument("--planar", action="store_true", help="declare the graph planar (not tested)")
    p.add_argument("--ordering", help="vertex ordering file for restricted degeneracy")
    p.add_argument("--exact", dest="exact", action="store_true", default=None, help="force exact solve")
    p.add_argument("--no-exact", dest="exact", action="store_false")
    p.add_argument("--force", action="store_true", help="same as --exact")
    p.add_argument("--guard", type=int, default=DEFAULT_ARC_GUARD, help="arc cap for exact search")
    p.add_argument("--format", choices=["json"], default="json")
    p.add_argument("--out")
    p.add_argument("--dot", help="write a DOT rendering here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("compose", help="compose colorings across union, cartesian product or join")
    p.add_argument("op", choices=["union", "cartesian", "join"])
    p.add_argument("first", help="family spec of the first operand")
    p.add_argument("second", help="family spec of the second operand")
    p.add_argument("--coloring", choices=["exact", "greedy"], default="exact")
    p.add_argument("--guard", type=int, default=DEFAULT_ARC_GUARD)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("scan", help="batch table over a family spec file")
    p.add_argument("spec", help="scan spec JSON file")
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--out")
    p.add_argument("--guard", type=int)
    p.add_argument("--no-exact", action="store_true")
    p.add_argument("--no-timing", action="store_true", help="leave runtime_s empty (byte-stable output)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="check an incidence coloring JSON against a graph")
    graph_source(p)
    p.add_argument("--coloring", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GraphError, InstanceTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (bounds.BoundError, ColoringError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (bounds.IntegrityError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
