"""Exact star arboricity, chromatic index and domination number, with witnesses."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from incicolor.graphs import Graph
from incicolor.incidence import DEFAULT_ARC_GUARD, _KColorSearch, check_guard

Edge = tuple[int, int]


def _e(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


# --- star forests ------------------------------------------------------------


def is_star_forest(G: Graph, part: Iterable[Edge]) -> bool:
    """True iff every component of the edge set has at most one vertex of
    degree >= 2 and no cycle."""
    edges = [_e(*e) for e in part]
    if len(set(edges)) != len(edges):
        return False
    if any(not G.has_edge(u, v) for u, v in edges):
        raise ValueError("part is not a subset of the graph's edges")
    deg: dict[int, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    # each edge must touch a degree-1 vertex; this rules out P4 and cycles
    return all(deg[u] == 1 or deg[v] == 1 for u, v in edges)


def star_centers(part: Iterable[Edge]) -> list[int]:
    """One center per star component. A lone edge is centered at its larger endpoint."""
    edges = [_e(*e) for e in part]
    deg: dict[int, int] = {}
    for u, v in edges:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    centers = set()
    for u, v in edges:
        if deg[u] >= 2:
            centers.add(u)
        elif deg[v] >= 2:
            centers.add(v)
        else:
            centers.add(max(u, v))
    return sorted(centers)


@dataclass(frozen=True)
class StarForestDecomposition:
    parts: tuple[tuple[Edge, ...], ...]
    centers: tuple[tuple[int, ...], ...]

    @classmethod
    def from_parts(cls, parts: Iterable[Iterable[Edge]]) -> StarForestDecomposition:
        clean = tuple(tuple(sorted(_e(*e) for e in p)) for p in parts)
        return cls(clean, tuple(tuple(star_centers(p)) for p in clean))

    def __len__(self) -> int:
        return len(self.parts)

    def center_of(self, part_index: int, edge: Edge) -> int:
        u, v = _e(*edge)
        return u if u in self.centers[part_index] else v

    def is_valid_for(self, G: Graph) -> bool:
        flat = [e for p in self.parts for e in p]
        if sorted(flat) != list(G.edges()):
            return False
        return all(is_star_forest(G, p) for p in self.parts)

    def to_json(self) -> list[dict]:
        return [
            {"part": i, "u": u, "v": v, "center": self.center_of(i, (u, v))}
            for i, p in enumerate(self.parts)
            for u, v in p
        ]


def _edge_order(G: Graph) -> list[Edge]:
    deg = G.degrees()
    return sorted(
        G.edges(),
        key=lambda e: (-max(deg[e[0]], deg[e[1]]), -min(deg[e[0]], deg[e[1]]), e),
    )


def _can_join(nb: list[set[int]], u: int, v: int) -> bool:
    """Whether edge uv can join the star forest with neighbor sets ``nb``."""
    du, dv = len(nb[u]), len(nb[v])
    if du and dv:
        return False
    if du == 0 and all(len(nb[w]) == 1 for w in nb[v]):
        return True
    return dv == 0 and all(len(nb[w]) == 1 for w in nb[u])


class _StarForestSearch:
    """Edge partition into k star forests as a binary CSP.

    Each edge takes a value 2*p + d: part p, and d says which endpoint is
    the leaf (0: smaller label, 1: larger). A leaf vertex owns no other
    edge of its part; a center may not be a leaf of another edge of the
    same part. Those pairwise rules are exactly the star-forest condition.
    """

    def __init__(self, G: Graph, k: int):
        self.k = k
        self.edges = _edge_order(G)
        self.at: list[list[int]] = [[] for _ in range(G.n)]
        for i, (u, v) in enumerate(self.edges):
            self.at[u].append(i)
            self.at[v].append(i)
        self.domain = [(1 << (2 * k)) - 1] * len(self.edges)
        self.value = [-1] * len(self.edges)

    def _leaf_bit(self, f: int, vertex: int, p: int) -> int:
        a, _ = self.edges[f]
        return 1 << (2 * p + (0 if a == vertex else 1))

    def _assign(self, i: int, val: int) -> list[tuple[int, int]] | None:
        p, d = divmod(val, 2)
        a, b = self.edges[i]
        leaf, center = (a, b) if d == 0 else (b, a)
        self.value[i] = val
        trail: list[tuple[int, int]] = []
        both = 3 << (2 * p)
        ok = True
        for f in self.at[leaf]:
            if f != i and self.value[f] < 0 and self.domain[f] & both:
                trail.append((f, self.domain[f]))
                self.domain[f] &= ~both
                ok = ok and self.domain[f] != 0
        for f in self.at[center]:
            if f != i and self.value[f] < 0:
                bit = self._leaf_bit(f, center, p)
                if self.domain[f] & bit:
                    trail.append((f, self.domain[f]))
                    self.domain[f] &= ~bit
                    ok = ok and self.domain[f] != 0
        if not ok:
            self._undo(i, trail)
            return None
        return trail

    def _undo(self, i: int, trail: list[tuple[int, int]]) -> None:
        self.value[i] = -1
        for f, dom in reversed(trail):
            self.domain[f] = dom

    def run(self) -> list[list[Edge]] | None:
        if not self._search(len(self.edges), -1):
            return None
        parts: list[list[Edge]] = [[] for _ in range(self.k)]
        for e, val in zip(self.edges, self.value):
            parts[val // 2].append(e)
        return [p for p in parts if p]

    def _search(self, remaining: int, max_open: int) -> bool:
        if remaining == 0:
            return True
        # most constrained edge; ties go to the earlier edge in degree order
        pick, best = -1, 1 << 30
        for i, dom in enumerate(self.domain):
            if self.value[i] < 0:
                size = bin(dom).count("1")
                if size < best:
                    pick, best = i, size
        dom = self.domain[pick]
        # parts above max_open are interchangeable: open at most one new part
        limit = min(self.k - 1, max_open + 1)
        for val in range(2 * (limit + 1)):
            if not dom >> val & 1:
                continue
            trail = self._assign(pick, val)
            if trail is None:
                continue
            if self._search(remaining - 1, max(max_open, val // 2)):
                return True
            self._undo(pick, trail)
        return False


def greedy_star_forests(G: Graph) -> StarForestDecomposition:
    """First-fit warm start along the solver's edge order."""
    nbrs: list[list[set[int]]] = []
    parts: list[list[Edge]] = []
    for u, v in _edge_order(G):
        p = 0
        while p < len(parts) and not _can_join(nbrs[p], u, v):
            p += 1
        if p == len(parts):
            parts.append([])
            nbrs.append([set() for _ in range(G.n)])
        nbrs[p][u].add(v)
        nbrs[p][v].add(u)
        parts[p].append((u, v))
    return StarForestDecomposition.from_parts(parts)


def star_arboricity_exact(
    G: Graph, gamma: int | None = None, guard: int | None = DEFAULT_ARC_GUARD
) -> tuple[int, StarForestDecomposition]:
    """Minimum number of star forests partitioning E(G), by iterative deepening
    from the bound ceil(|E| / (|V| - gamma))."""
    check_guard(G, guard)
    if G.edge_count == 0:
        return 0, StarForestDecomposition((), ())
    if gamma is None:
        gamma = domination_number_exact(G, guard=None)[0]
    lo = max(1, -(-G.edge_count // (G.n - gamma)))
    warm = greedy_star_forests(G)
    for k in range(lo, len(warm)):
        parts = _StarForestSearch(G, k).run()
        if parts is not None:
            return len(parts), StarForestDecomposition.from_parts(parts)
    return len(warm), warm


# --- edge coloring -----------------------------------------------------------


@dataclass(frozen=True)
class EdgeColoring:
    colors: Mapping[Edge, int]
    palette_size: int

    def color(self, u: int, v: int) -> int:
        return self.colors[_e(u, v)]

    def is_proper_for(self, G: Graph) -> bool:
        return is_proper_edge_coloring(G, self.colors)

    def to_json(self) -> list[dict]:
        return [{"u": u, "v": v, "color": c} for (u, v), c in sorted(self.colors.items())]


def is_proper_edge_coloring(G: Graph, colors: Mapping[Edge, int]) -> bool:
    if set(colors) != set(G.edges()):
        return False
    for u in G.vertices():
        seen = [colors[_e(u, w)] for w in G.neighbors(u)]
        if len(set(seen)) != len(seen):
            return False
    return True


class _Misra:
    """Misra-Gries edge coloring with colors 0..Δ."""

    def __init__(self, G: Graph):
        self.G = G
        self.ncolors = G.max_degree + 1
        # at[u][c] = neighbor w with color(u, w) == c
        self.at: list[dict[int, int]] = [{} for _ in range(G.n)]
        self.col: dict[Edge, int] = {}

    def free(self, u: int) -> int:
        at = self.at[u]
        return next(c for c in range(self.ncolors) if c not in at)

    def is_free(self, u: int, c: int) -> bool:
        return c not in self.at[u]

    def set_color(self, u: int, v: int, c: int | None) -> None:
        old = self.col.pop(_e(u, v), None)
        if old is not None:
            del self.at[u][old]
            del self.at[v][old]
        if c is not None:
            self.col[_e(u, v)] = c
            self.at[u][c] = v
            self.at[v][c] = u

    def fan(self, u: int, v: int) -> list[int]:
        fan = [v]
        in_fan = {v}
        grew = True
        while grew:
            grew = False
            last = fan[-1]
            for w in self.G.neighbors(u):
                if w in in_fan:
                    continue
                c = self.col.get(_e(u, w))
                if c is not None and self.is_free(last, c):
                    fan.append(w)
                    in_fan.add(w)
                    grew = True
                    break
        return fan

    def invert_path(self, u: int, c: int, d: int) -> None:
        """Swap c and d along the maximal c/d path leaving u (c is free on u)."""
        path = []
        x, want = u, d
        while want in self.at[x]:
            y = self.at[x][want]
            path.append((x, y, want))
            x, want = y, (c if want == d else d)
        for x, y, _ in path:
            self.set_color(x, y, None)
        for x, y, k in path:
            self.set_color(x, y, c if k == d else d)

    def color_edge(self, u: int, v: int) -> None:
        fan = self.fan(u, v)
        c = self.free(u)
        d = self.free(fan[-1])
        if c != d:
            self.invert_path(u, c, d)
        # first fan prefix that is still a fan and ends at a vertex missing d
        end = None
        for j, w in enumerate(fan):
            if j > 0:
                cj = self.col.get(_e(u, w))
                if cj is None or not self.is_free(fan[j - 1], cj):
                    break
            if self.is_free(w, d):
                end = j
                break
        if end is None:
            raise AssertionError("Misra-Gries invariant broken: no rotatable fan prefix")
        for j in range(end):
            nxt = self.col[_e(u, fan[j + 1])]
            self.set_color(u, fan[j + 1], None)
            self.set_color(u, fan[j], nxt)
        self.set_color(u, fan[end], d)

    def run(self) -> dict[Edge, int]:
        for u, v in self.G.edges():
            self.color_edge(u, v)
        return dict(self.col)


def edge_coloring_vizing(G: Graph) -> EdgeColoring:
    """Proper edge coloring with at most Δ+1 colors (fan rotation plus one
    alternating-path flip per edge, edges in sorted order)."""
    colors = _Misra(G).run()
    return EdgeColoring(colors, max(colors.values(), default=-1) + 1)


def _line_graph_masks(G: Graph) -> tuple[list[Edge], list[int]]:
    edges = list(G.edges())
    touching: dict[int, int] = {}
    for i, (u, v) in enumerate(edges):
        touching[u] = touching.get(u, 0) | (1 << i)
        touching[v] = touching.get(v, 0) | (1 << i)
    masks = [(touching[u] | touching[v]) & ~(1 << i) for i, (u, v) in enumerate(edges)]
    return edges, masks


def chromatic_index_exact(G: Graph, guard: int | None = DEFAULT_ARC_GUARD) -> tuple[int, EdgeColoring]:
    """Decide Δ-edge-colorability by backtracking; otherwise Vizing's Δ+1."""
    check_guard(G, guard)
    if G.edge_count == 0:
        return 0, EdgeColoring({}, 0)
    delta = G.max_degree
    edges, masks = _line_graph_masks(G)
    w = max(G.vertices(), key=lambda x: (G.degree(x), -x))
    index = {e: i for i, e in enumerate(edges)}
    seed = {index[_e(w, x)]: c for c, x in enumerate(G.neighbors(w))}
    found = _KColorSearch(masks, delta, seed).run()
    if found is not None:
        return delta, EdgeColoring(dict(zip(edges, found)), delta)
    viz = edge_coloring_vizing(G)
    return delta + 1, EdgeColoring(viz.colors, delta + 1)


# --- domination --------------------------------------------------------------


@dataclass(frozen=True)
class DominatingSet:
    vertices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def dominates(self, G: Graph) -> bool:
        return is_dominating(G, self.vertices)


def is_dominating(G: Graph, S: Iterable[int]) -> bool:
    covered = set()
    for s in S:
        covered.add(s)
        covered.update(G.neighbors(s))
    return len(covered) == G.n


def domination_number_exact(G: Graph, guard: int | None = DEFAULT_ARC_GUARD) -> tuple[int, DominatingSet]:
    """Minimum dominating set by branching on the lowest undominated vertex
    over its closed neighborhood."""
    check_guard(G, guard)
    n = G.n
    if n == 0:
        return 0, DominatingSet(())
    closed = [(1 << u) | sum(1 << w for w in G.neighbors(u)) for u in range(n)]
    reach = G.max_degree + 1
    full = (1 << n) - 1

    # greedy start: repeatedly take the vertex covering most undominated vertices
    greedy, dom = [], 0
    while dom != full:
        u = max(range(n), key=lambda x: (bin(closed[x] & ~dom).count("1"), -x))
        greedy.append(u)
        dom |= closed[u]
    best = [len(greedy), sorted(greedy)]

    def search(chosen: list[int], dom: int) -> None:
        if dom == full:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), sorted(chosen)
            return
        left = n - bin(dom).count("1")
        if len(chosen) + -(-left // reach) >= best[0]:
            return
        low = ~dom & full
        v = (low & -low).bit_length() - 1
        cands = [v, *G.neighbors(v)]
        cands.sort(key=lambda x: (-bin(closed[x] & ~dom).count("1"), x))
        for c in cands:
            chosen.append(c)
            search(chosen, dom | closed[c])
            chosen.pop()

    search([], 0)
    return best[0], DominatingSet(tuple(best[1]))


def max_star_forest_edges(
    G: Graph, guard: int | None = DEFAULT_ARC_GUARD
) -> tuple[int, list[Edge]]:
    """A star forest with |V| - γ(G) edges: every vertex outside a minimum
    dominating set is joined to its lowest-labeled dominator."""
    gamma, D = domination_number_exact(G, guard=guard)
    inside = set(D.vertices)
    edges = []
    for v in G.vertices():
        if v not in inside:
            w = min(x for x in G.neighbors(v) if x in inside)
            edges.append(_e(v, w))
    return G.n - gamma, sorted(edges)


def witness_json(obj: StarForestDecomposition | EdgeColoring | DominatingSet) -> str:
    if isinstance(obj, DominatingSet):
        return json.dumps(list(obj.vertices))
    return json.dumps(obj.to_json())
