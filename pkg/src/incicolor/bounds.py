"""Bounds on the incidence chromatic number and colorings that realize them.

The upper-bound coloring spends one color per star forest (on the arcs
entering star centers) and then colors the remaining arcs, one per edge,
by a proper edge coloring shifted past those part colors.
"""

from __future__ import annotations

import threading
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from incicolor import graphs
from incicolor.decomp import (
    DominatingSet,
    EdgeColoring,
    StarForestDecomposition,
    chromatic_index_exact,
    domination_number_exact,
    edge_coloring_vizing,
    greedy_star_forests,
    star_arboricity_exact,
)
from incicolor.graphs import Graph
from incicolor.incidence import (
    DEFAULT_ARC_GUARD,
    Arc,
    ColoringError,
    IncidenceColoring,
    InstanceTooLarge,
    arcs,
    exact_chi_i,
    verify,
)

SCHEMA_VERSION = 1


class BoundError(ValueError):
    """Inputs violate an operation's preconditions."""


class IntegrityError(RuntimeError):
    """A construction that must succeed did not (a bug, not a data condition)."""


# --- upper bound from star forests and an edge coloring -----------------------


def construct_thm1_coloring(
    G: Graph, sfd: StarForestDecomposition, ec: EdgeColoring
) -> IncidenceColoring:
    """Part i colors arcs into its star centers with color i; every other arc
    takes ``len(sfd) + ec.color(edge)``."""
    if not sfd.is_valid_for(G):
        raise BoundError("star forest decomposition does not partition E(G) into star forests")
    if not ec.is_proper_for(G):
        raise BoundError("edge coloring is not proper for G")
    st = len(sfd)
    mapping: dict[tuple[int, int], int] = {}
    for i, part in enumerate(sfd.parts):
        for u, v in part:
            center = sfd.center_of(i, (u, v))
            leaf = v if center == u else u
            mapping[(leaf, center)] = i
            mapping[(center, leaf)] = st + ec.color(u, v)
    return IncidenceColoring.from_mapping(G, mapping, st + ec.palette_size)


@dataclass
class UpperConstruction:
    coloring: IncidenceColoring
    sfd: StarForestDecomposition
    edge_coloring: EdgeColoring
    star_arboricity: int
    star_source: str  # "exact" or "greedy"
    chromatic_index: int
    chromatic_index_source: str  # "exact" or "vizing"

    @property
    def palette_size(self) -> int:
        return self.coloring.palette_size


def upper_construction(G: Graph, gamma: int | None = None, guard: int | None = DEFAULT_ARC_GUARD) -> UpperConstruction:
    """Run the construction with exact sub-solvers inside the guard, falling
    back to first-fit star forests and Vizing's Δ+1 coloring beyond it."""
    try:
        st, sfd = star_arboricity_exact(G, gamma=gamma, guard=guard)
        st_src = "exact"
    except InstanceTooLarge:
        sfd = greedy_star_forests(G)
        st, st_src = len(sfd), "greedy"
    try:
        chi, ec = chromatic_index_exact(G, guard=guard)
        chi_src = "exact"
    except InstanceTooLarge:
        ec = edge_coloring_vizing(G)
        chi, chi_src = ec.palette_size, "vizing"
    coloring = construct_thm1_coloring(G, sfd, ec)
    if not verify(G, coloring):
        raise IntegrityError("upper-bound construction produced an invalid coloring")
    return UpperConstruction(coloring, sfd, ec, st, st_src, chi, chi_src)


# --- lower bounds --------------------------------------------------------------


def lower_bound_domination(G: Graph, gamma: int) -> int:
    """ceil(2|E| / (|V| - gamma)); 0 for edgeless graphs."""
    if G.edge_count == 0:
        return 0
    if not 0 < gamma < G.n:
        raise BoundError(f"domination number {gamma} impossible for a graph with edges on {G.n} vertices")
    return -(-2 * G.edge_count // (G.n - gamma))


def regular_lower_bound(G: Graph, gamma: int) -> tuple[Fraction, int]:
    degs = G.degrees()
    if not degs or any(d != degs[0] for d in degs):
        raise BoundError("graph is not regular")
    r = degs[0]
    if r == 0:
        return Fraction(0), 0
    value = Fraction(r * G.n, G.n - gamma)
    return value, -(-value.numerator // value.denominator)


def trivial_lower_bound(G: Graph) -> int:
    """Arcs out of a vertex plus one arc into it pairwise conflict."""
    return G.max_degree + 1 if G.edge_count else 0


@dataclass
class NecessaryConditions:
    r: int
    n: int
    divisible: bool
    chromatic_index: int | None
    class_one: bool | None  # None when r is even or chi' was not computed
    conclusion: str

    @property
    def lower_bound(self) -> int | None:
        return self.r + 2 if self.conclusion != "inconclusive" else None

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "n": self.n,
            "divisible_by_r_plus_1": self.divisible,
            "chromatic_index": self.chromatic_index,
            "odd_r_class_one": self.class_one,
            "conclusion": self.conclusion,
        }


def necessary_conditions_regular(
    G: Graph, chromatic_index: int | None = None, guard: int | None = DEFAULT_ARC_GUARD
) -> NecessaryConditions:
    """Test the two necessary conditions for an r-regular graph to have
    incidence chromatic number r+1. Failing either proves >= r+2."""
    degs = G.degrees()
    if not degs or any(d != degs[0] for d in degs):
        raise BoundError("graph is not regular")
    r = degs[0]
    divisible = G.n % (r + 1) == 0
    chi = chromatic_index
    class_one = None
    if r % 2 == 1:
        if chi is None:
            try:
                chi = chromatic_index_exact(G, guard=guard)[0]
            except InstanceTooLarge:
                chi = None
        if chi is not None:
            class_one = chi == r
    failed = not divisible or class_one is False
    conclusion = f"chi_i >= {r + 2}" if failed and r > 0 else "inconclusive"
    return NecessaryConditions(r, G.n, divisible, chi, class_one, conclusion)


# --- corollary upper bounds -----------------------------------------------------


@dataclass
class NamedBound:
    name: str
    value: int
    hypothesis: str = ""
    witness: Any = None

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "value": self.value}
        if self.hypothesis:
            out["hypothesis"] = self.hypothesis
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def corollary_bounds(
    G: Graph,
    planar: bool = False,
    ordering: Sequence[int] | None = None,
    flags: graphs.StructureReport | None = None,
) -> list[NamedBound]:
    """Class-specific upper bounds whose hypotheses hold, plus 2Δ.

    ``planar`` is taken on trust. Restricted degeneracy is checked against
    ``ordering`` (or a maximum cardinality search order when omitted).
    """
    if flags is None:
        flags = graphs.structure_report(G, ordering)
    delta = G.max_degree
    out = [NamedBound("two_delta", 2 * delta, "any graph")]
    if planar:
        if delta == 6:
            out.append(NamedBound("planar", 12, "declared planar, max degree 6"))
        else:
            out.append(NamedBound("planar", delta + 5, f"declared planar, max degree {delta} != 6"))
    k = flags.restricted_k
    if k is not None and G.edge_count:
        out.append(
            NamedBound(
                "restricted_k_degenerate",
                delta + k + 2,
                f"restricted {k}-degenerate under ordering {list(flags.ordering or [])}",
            )
        )
    if flags.bipartite_at_most_one_cycle and G.edge_count:
        out.append(NamedBound("bipartite_at_most_one_cycle", delta + 2, "bipartite, cycle rank <= 1"))
    return out


# --- composers -------------------------------------------------------------------


def _require_valid(G: Graph, c: IncidenceColoring, label: str) -> None:
    if c.graph != G:
        raise BoundError(f"{label} coloring belongs to a different graph")
    if not verify(G, c):
        raise BoundError(f"{label} coloring is not a valid incidence coloring")


def compose_union_coloring(
    G1: Graph, c1: IncidenceColoring, G2: Graph, c2: IncidenceColoring
) -> IncidenceColoring:
    """Coloring of ``union(G1, G2)``: G1's arcs keep c1, G2-only arcs take c2
    shifted by c1's palette."""
    _require_valid(G1, c1, "first")
    _require_valid(G2, c2, "second")
    U = graphs.union(G1, G2)
    d1, d2 = c1.as_dict(), c2.as_dict()
    p1 = c1.palette_size
    mapping = {a: d1[a] if a in d1 else p1 + d2[a] for a in arcs(U)}
    return IncidenceColoring.from_mapping(U, mapping, p1 + c2.palette_size)


def compose_cartesian_coloring(
    G1: Graph, c1: IncidenceColoring, G2: Graph, c2: IncidenceColoring
) -> IncidenceColoring:
    """Coloring of ``cartesian_product(G1, G2)``: copies of G1 reuse c1,
    copies of G2 use c2 shifted by c1's palette."""
    _require_valid(G1, c1, "first")
    _require_valid(G2, c2, "second")
    P = graphs.cartesian_product(G1, G2)
    n2 = G2.n
    d1, d2 = c1.as_dict(), c2.as_dict()
    p1 = c1.palette_size
    mapping = {}
    for x, y in arcs(P):
        (a, b), (a2, b2) = divmod(x, n2), divmod(y, n2)
        mapping[(x, y)] = d1[Arc(a, a2)] if b == b2 else p1 + d2[Arc(b, b2)]
    return IncidenceColoring.from_mapping(P, mapping, p1 + c2.palette_size)


def bipartite_arc_coloring(m: int, n: int) -> IncidenceColoring:
    """An (m+2)-coloring of the arcs of K_{m,n} (m >= n >= 2), sides as in
    ``graphs.complete_bipartite``.

    Side-A vertex a sends color j to b_j, except a == j sends m+1. b_j
    sends color a to a < n (a != j); a_j gets n and a >= n gets a+1.
    Every vertex then has distinct out-colors disjoint from its in-colors.
    """
    if not m >= n >= 2:
        raise BoundError(f"need m >= n >= 2, got ({m}, {n})")
    mapping = {}
    for a in range(m):
        for j in range(n):
            b = m + j
            mapping[(a, b)] = m + 1 if a == j else j
            if a == j:
                mapping[(b, a)] = n
            else:
                mapping[(b, a)] = a if a < n else a + 1
    return IncidenceColoring.from_mapping(graphs.complete_bipartite(m, n), mapping, m + 2)


class _BipartiteArcTable:
    """Checker-certified (big+2)-colorings of K_{big,small}, built once each.

    Reads are lock-free once a key is published; a lock serializes writers.
    """

    def __init__(self) -> None:
        self._table: dict[tuple[int, int], IncidenceColoring] = {}
        self._lock = threading.Lock()

    def get(self, big: int, small: int) -> IncidenceColoring:
        key = (big, small)
        hit = self._table.get(key)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._table.get(key)
            if hit is None:
                hit = bipartite_arc_coloring(big, small)
                if not verify(hit.graph, hit):
                    raise IntegrityError(f"{big + 2}-coloring of K_{{{big},{small}}} failed the checker")
                self._table[key] = hit
            return hit


BIPARTITE_ARC_TABLE = _BipartiteArcTable()


def join_branch(m: int, n: int, p1: int, p2: int) -> str:
    """'shared' when the shared-palette construction is available and no worse
    than m + n colors, else 'head'."""
    if min(m, n) >= 2 and max(p1, p2) + max(m, n) + 2 <= m + n:
        return "shared"
    return "head"


def compose_join_coloring(
    G1: Graph,
    c1: IncidenceColoring,
    G2: Graph,
    c2: IncidenceColoring,
) -> IncidenceColoring:
    """Coloring of ``join(G1, G2)`` within min{m+n, max(p1, p2) + max(m, n) + 2}.

    The 'head' branch colors every arc by its head's label, which is valid
    on any graph with m+n vertices. The 'shared' branch colors G1 and G2
    from one palette (they are vertex-disjoint) and the cross arcs, a copy
    of K_{m,n}, with max(m, n)+2 fresh colors.
    """
    _require_valid(G1, c1, "first")
    _require_valid(G2, c2, "second")
    J = graphs.join(G1, G2)
    m, n = G1.n, G2.n
    if join_branch(m, n, c1.palette_size, c2.palette_size) == "head":
        return IncidenceColoring.from_mapping(J, {a: a.head for a in arcs(J)}, m + n)
    base = max(c1.palette_size, c2.palette_size)
    big, small = max(m, n), min(m, n)
    table = BIPARTITE_ARC_TABLE.get(big, small).as_dict()
    if m >= n:
        to_join = list(range(m + n))
    else:
        # K_{n,m}'s big side 0..n-1 is G2 (labels m..), its small side is G1
        to_join = [m + a for a in range(n)] + list(range(m))
    mapping: dict[tuple[int, int], int] = {}
    for (x, y), c in table.items():
        mapping[(to_join[x], to_join[y])] = base + c
    for (u, v), c in c1.as_dict().items():
        mapping[(u, v)] = c
    for (u, v), c in c2.as_dict().items():
        mapping[(u + m, v + m)] = c
    return IncidenceColoring.from_mapping(J, mapping, base + big + 2)


def join_upper_bound(m: int, n: int, chi1: int, chi2: int) -> int:
    big, small = max(m, n), min(m, n)
    if small < 2:
        return m + n
    return min(m + n, max(chi1, chi2) + big + 2)


# --- reports -----------------------------------------------------------------------


@dataclass
class BoundReport:
    n: int
    edge_count: int
    max_degree: int
    regular_degree: int | None
    lower: list[NamedBound] = field(default_factory=list)
    upper: list[NamedBound] = field(default_factory=list)
    exact: tuple[int, IncidenceColoring] | None = None
    nec: NecessaryConditions | None = None
    notes: list[str] = field(default_factory=list)

    def best_lower(self) -> int:
        return max((b.value for b in self.lower), default=0)

    def best_upper(self) -> int | None:
        return min((b.value for b in self.upper), default=None)

    def consistent(self) -> bool:
        lo, hi = self.best_lower(), self.best_upper()
        if hi is not None and lo > hi:
            return False
        if self.exact is not None:
            chi = self.exact[0]
            return lo <= chi and (hi is None or chi <= hi)
        return True

    def bound(self, name: str) -> NamedBound | None:
        for b in self.lower + self.upper:
            if b.name == name:
                return b
        return None

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "graph": {
                "n": self.n,
                "m": self.edge_count,
                "max_degree": self.max_degree,
                "regular_degree": self.regular_degree,
            },
            "lower": [b.to_json() for b in self.lower],
            "upper": [b.to_json() for b in self.upper],
        }
        if self.exact is not None:
            out["exact"] = {"chi_i": self.exact[0], "coloring": self.exact[1].to_json()}
        if self.nec is not None:
            out["nec"] = self.nec.to_json()
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def bound_report(
    G: Graph,
    planar: bool = False,
    ordering: Sequence[int] | None = None,
    exact: bool | None = None,
    guard: int | None = DEFAULT_ARC_GUARD,
) -> BoundReport:
    """Collect every applicable bound for G.

    ``exact=None`` solves exactly only within the guard; ``True`` forces it
    regardless of size; ``False`` skips it.
    """
    flags = graphs.structure_report(G, ordering)
    report = BoundReport(G.n, G.edge_count, G.max_degree, flags.regular_degree)

    gamma: int | None = None
    dom: DominatingSet | None = None
    try:
        gamma, dom = domination_number_exact(G, guard=guard)
    except InstanceTooLarge as exc:
        report.notes.append(f"domination number skipped: {exc}")

    report.lower.append(NamedBound("max_degree_plus_one", trivial_lower_bound(G), "any graph with an edge"))
    if gamma is not None and dom is not None:
        report.lower.append(
            NamedBound("domination", lower_bound_domination(G, gamma), f"gamma = {gamma}", list(dom.vertices))
        )
        if flags.regular_degree is not None:
            frac, ceil = regular_lower_bound(G, gamma)
            report.lower.append(NamedBound("regular_form", ceil, f"{flags.regular_degree}-regular, exact value {frac}"))

    if flags.regular_degree is not None and flags.regular_degree > 0:
        report.nec = necessary_conditions_regular(G, guard=guard)
        if report.nec.lower_bound is not None:
            report.lower.append(NamedBound("necessary_conditions", report.nec.lower_bound, report.nec.conclusion))

    thm = upper_construction(G, gamma=gamma, guard=guard)
    report.upper.append(
        NamedBound(
            "star_forest_construction",
            thm.palette_size,
            f"st={thm.star_arboricity} ({thm.star_source}), chi'={thm.chromatic_index} ({thm.chromatic_index_source})",
            thm.coloring.to_json(),
        )
    )
    report.upper.append(
        NamedBound("chi_prime_plus_st", thm.chromatic_index + thm.star_arboricity, "sum of the two invariants")
    )
    report.upper.extend(corollary_bounds(G, planar=planar, flags=flags))

    run_exact = exact if exact is not None else 2 * G.edge_count <= (guard if guard is not None else 10**9)
    if run_exact:
        # only proven bounds narrow the search; a declared-planar bound is not one
        lo = max(b.value for b in report.lower)
        report.exact = exact_chi_i(G, lower_hint=lo, upper_hint=thm.palette_size, guard=None)

    report.lower.sort(key=lambda b: (-b.value, b.name))
    report.upper.sort(key=lambda b: (b.value, b.name))
    return report


def check_coloring(G: Graph, coloring: IncidenceColoring) -> None:
    """Raise ColoringError listing the first violation, if any."""
    verdict = verify(G, coloring)
    if not verdict:
        v = verdict.violations[0]
        raise ColoringError(f"arcs {tuple(v.first)} and {tuple(v.second)} share color {v.color}")
