"""Arcs, incidence colorings, and exact solvers over the arc conflict graph.

Every edge uv contributes the arcs (u, v) and (v, u). Two distinct arcs
(u, v) and (x, y) conflict when u == x, v == x or y == u.
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import NamedTuple

from incicolor.graphs import Graph

DEFAULT_ARC_GUARD = 120


class Arc(NamedTuple):
    tail: int
    head: int


class InstanceTooLarge(RuntimeError):
    """The instance exceeds the configured size guard for exhaustive search."""


class ColoringError(ValueError):
    """A coloring is incomplete or does not belong to the graph."""


def arcs(G: Graph) -> list[Arc]:
    return [Arc(u, v) for u in G.vertices() for v in G.neighbors(u)]


def adjacent(a: Arc, b: Arc) -> bool:
    return a.tail == b.tail or a.head == b.tail or b.head == a.tail


def arc_degree_bound(G: Graph, a: Arc) -> int:
    return 2 * G.degree(a.tail) + G.degree(a.head) - 2


def conflict_masks(arc_list: Sequence[Arc]) -> list[int]:
    """Bitmask of conflicting arc indices for each arc of ``arc_list``."""
    out_of: dict[int, int] = {}
    into: dict[int, int] = {}
    for i, (u, v) in enumerate(arc_list):
        out_of[u] = out_of.get(u, 0) | (1 << i)
        into[v] = into.get(v, 0) | (1 << i)
    masks = []
    for i, (u, v) in enumerate(arc_list):
        m = out_of[u] | into.get(u, 0) | out_of.get(v, 0)
        masks.append(m & ~(1 << i))
    return masks


def check_guard(G: Graph, guard: int | None) -> None:
    if guard is not None and 2 * G.edge_count > guard:
        raise InstanceTooLarge(
            f"{2 * G.edge_count} arcs exceeds the exact-search guard of {guard}"
        )


@dataclass(frozen=True)
class IncidenceColoring:
    """Total map from the arcs of ``graph`` (sorted order) to colors."""

    graph: Graph
    colors: tuple[int, ...]
    palette_size: int

    @classmethod
    def from_mapping(cls, G: Graph, mapping: Mapping[tuple[int, int], int], palette_size: int | None = None) -> IncidenceColoring:
        arc_list = arcs(G)
        missing = [a for a in arc_list if a not in mapping]
        if missing:
            raise ColoringError(f"coloring is incomplete: {len(missing)} arcs uncolored, e.g. {tuple(missing[0])}")
        extra = set(mapping) - set(arc_list)
        if extra:
            raise ColoringError(f"coloring names non-arcs, e.g. {sorted(extra)[0]}")
        colors = tuple(int(mapping[a]) for a in arc_list)
        if palette_size is None:
            palette_size = max(colors, default=-1) + 1
        if any(c < 0 or c >= palette_size for c in colors):
            raise ColoringError(f"color outside palette 0..{palette_size - 1}")
        return cls(G, colors, palette_size)

    def as_dict(self) -> dict[Arc, int]:
        return dict(zip(arcs(self.graph), self.colors))

    def color(self, tail: int, head: int) -> int:
        return self.as_dict()[Arc(tail, head)]

    def colors_into(self, u: int) -> set[int]:
        return {self.color(w, u) for w in self.graph.neighbors(u)}

    def colors_out_of(self, u: int) -> set[int]:
        return {self.color(u, w) for w in self.graph.neighbors(u)}

    @property
    def used_colors(self) -> int:
        return len(set(self.colors))

    def to_json(self) -> list[dict]:
        return [
            {"tail": a.tail, "head": a.head, "color": c}
            for a, c in zip(arcs(self.graph), self.colors)
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def coloring_from_json(G: Graph, data: Iterable[Mapping] | str, palette_size: int | None = None) -> IncidenceColoring:
    if isinstance(data, str):
        data = json.loads(data)
    mapping: dict[tuple[int, int], int] = {}
    for row in data:
        key = (int(row["tail"]), int(row["head"]))
        if key in mapping:
            raise ColoringError(f"arc {key} listed twice")
        mapping[key] = int(row["color"])
    return IncidenceColoring.from_mapping(G, mapping, palette_size)


class Violation(NamedTuple):
    first: Arc
    second: Arc
    color: int


@dataclass
class Verdict:
    valid: bool
    violations: list[Violation]
    palette_size: int

    def __bool__(self) -> bool:
        return self.valid


def verify(G: Graph, coloring: IncidenceColoring | Mapping[tuple[int, int], int]) -> Verdict:
    """Check every conflicting arc pair; each violating pair is listed once."""
    if isinstance(coloring, IncidenceColoring):
        if coloring.graph != G:
            raise ColoringError("coloring belongs to a different graph")
        cmap = coloring.as_dict()
        palette = coloring.palette_size
    else:
        c = IncidenceColoring.from_mapping(G, coloring)
        cmap, palette = c.as_dict(), c.palette_size
    bad = []
    # conflicts only occur between arcs leaving u and arcs entering or leaving u
    for u in G.vertices():
        out = [Arc(u, w) for w in G.neighbors(u)]
        inc = [Arc(w, u) for w in G.neighbors(u)]
        for i, a in enumerate(out):
            for b in out[i + 1 :]:
                if cmap[a] == cmap[b]:
                    bad.append(Violation(a, b, cmap[a]))
            for b in inc:
                if cmap[a] == cmap[b]:
                    bad.append(Violation(min(a, b), max(a, b), cmap[a]))
    bad = sorted(set(bad))
    return Verdict(not bad, bad, palette)


# --- greedy ------------------------------------------------------------------


def greedy_order(G: Graph, strategy: str = "head_degree") -> list[Arc]:
    arc_list = arcs(G)
    if strategy == "head_degree":
        return sorted(arc_list, key=lambda a: (-G.degree(a.head), a.tail, a.head))
    if strategy == "natural":
        return arc_list
    raise ValueError(f"unknown greedy strategy {strategy!r}")


def greedy_coloring(G: Graph, order: str | Sequence[tuple[int, int]] = "head_degree") -> IncidenceColoring:
    """Lowest-free-color greedy along ``order`` (a strategy name or an arc list)."""
    arc_list = arcs(G)
    index = {a: i for i, a in enumerate(arc_list)}
    seq = greedy_order(G, order) if isinstance(order, str) else [Arc(*a) for a in order]
    if sorted(seq) != arc_list:
        raise ColoringError("greedy order must list every arc exactly once")
    masks = conflict_masks(arc_list)
    colors = [-1] * len(arc_list)
    for a in seq:
        i = index[a]
        taken = set()
        m = masks[i]
        while m:
            low = m & -m
            j = low.bit_length() - 1
            if colors[j] >= 0:
                taken.add(colors[j])
            m ^= low
        c = 0
        while c in taken:
            c += 1
        colors[i] = c
    return IncidenceColoring(G, tuple(colors), max(colors, default=-1) + 1)


# --- exact coloring ----------------------------------------------------------


class _KColorSearch:
    """DSATUR backtracking for a k-coloring of a conflict graph given as masks."""

    def __init__(self, masks: Sequence[int], k: int, precolored: Mapping[int, int]):
        self.masks = masks
        self.k = k
        self.full = (1 << k) - 1
        self.n = len(masks)
        self.colors = [-1] * self.n
        self.forbidden = [0] * self.n
        self.degree = [bin(m).count("1") for m in masks]
        self.precolored = precolored
        self.nodes = 0

    def _assign(self, i: int, c: int) -> list[int] | None:
        """Color i with c; return touched neighbors, or None on a wipe-out."""
        self.colors[i] = c
        bit = 1 << c
        touched = []
        m = self.masks[i]
        ok = True
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            if self.colors[j] < 0 and not self.forbidden[j] & bit:
                self.forbidden[j] |= bit
                touched.append(j)
                if self.forbidden[j] == self.full:
                    ok = False
        return touched if ok else self._undo(i, c, touched)

    def _undo(self, i: int, c: int, touched: list[int]) -> None:
        self.colors[i] = -1
        bit = 1 << c
        for j in touched:
            self.forbidden[j] &= ~bit

    def run(self) -> list[int] | None:
        if self.k <= 0:
            return [] if self.n == 0 else None
        for i, c in self.precolored.items():
            if c >= self.k or self.forbidden[i] >> c & 1:
                return None
            if self._assign(i, c) is None:
                return None
        max_used = max(self.precolored.values(), default=-1)
        if self._search(self.n - len(self.precolored), max_used):
            return list(self.colors)
        return None

    def _pick(self) -> int:
        best, best_key = -1, (-1, -1)
        colors, forbidden, degree = self.colors, self.forbidden, self.degree
        for i in range(self.n):
            if colors[i] < 0:
                key = (bin(forbidden[i]).count("1"), degree[i])
                if key > best_key:
                    best, best_key = i, key
        return best

    def _search(self, remaining: int, max_used: int) -> bool:
        if remaining == 0:
            return True
        self.nodes += 1
        i = self._pick()
        free = self.full & ~self.forbidden[i]
        # colors above max_used are interchangeable: try only the first of them
        limit = min(self.k - 1, max_used + 1)
        for c in range(limit + 1):
            if not free >> c & 1:
                continue
            touched = self._assign(i, c)
            if touched is None:
                continue
            if self._search(remaining - 1, max(max_used, c)):
                return True
            self._undo(i, c, touched)
        return False


def _symmetry_seed(G: Graph, arc_list: Sequence[Arc]) -> dict[int, int]:
    """Arcs out of a max-degree vertex w plus one arc into w form a clique;
    fix them to colors 0..Δ."""
    if not arc_list:
        return {}
    index = {a: i for i, a in enumerate(arc_list)}
    w = max(G.vertices(), key=lambda v: (G.degree(v), -v))
    seed = {index[Arc(w, x)]: c for c, x in enumerate(G.neighbors(w))}
    seed[index[Arc(G.neighbors(w)[0], w)]] = G.degree(w)
    return seed


def k_incidence_coloring(G: Graph, k: int, guard: int | None = DEFAULT_ARC_GUARD) -> IncidenceColoring | None:
    """A valid incidence coloring with at most k colors, or None if none exists."""
    check_guard(G, guard)
    arc_list = arcs(G)
    if not arc_list:
        return IncidenceColoring(G, (), 0) if k >= 0 else None
    if k < G.max_degree + 1:
        return None
    result = _KColorSearch(conflict_masks(arc_list), k, _symmetry_seed(G, arc_list)).run()
    if result is None:
        return None
    return IncidenceColoring(G, tuple(result), k)


def exact_chi_i(
    G: Graph,
    lower_hint: int | None = None,
    upper_hint: int | None = None,
    guard: int | None = DEFAULT_ARC_GUARD,
) -> tuple[int, IncidenceColoring]:
    """Incidence chromatic number by iterative deepening on the palette size.

    Hints must be valid bounds; they only narrow the range searched.
    """
    check_guard(G, guard)
    if G.edge_count == 0:
        return 0, IncidenceColoring(G, (), 0)
    greedy = greedy_coloring(G)
    lo = max(G.max_degree + 1, lower_hint or 0)
    hi = greedy.palette_size
    if upper_hint is not None:
        hi = min(hi, upper_hint)
    for k in range(lo, hi + 1):
        found = k_incidence_coloring(G, k, guard=None)
        if found is not None:
            return k, found
    raise AssertionError(
        f"no coloring found in [{lo}, {hi}]; the supplied hints are not valid bounds"
    )


# --- independent arc sets ----------------------------------------------------


def _max_independent(masks: Sequence[int]) -> int:
    """Maximum independent set of the conflict graph, as a bitmask."""
    n = len(masks)
    best = [0, 0]  # size, mask

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def greedy_cover_bound(cand: int) -> int:
        # partition candidates into cliques greedily; one vertex per clique at most
        bound = 0
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            clique = low
            rest = cand & masks[i]
            while rest:
                lb = rest & -rest
                j = lb.bit_length() - 1
                if clique & ~masks[j] & ~lb == 0:
                    clique |= lb
                rest ^= lb
            cand &= ~clique
            bound += 1
        return bound

    def expand(chosen: int, size: int, cand: int) -> None:
        if size > best[0]:
            best[0], best[1] = size, chosen
        if not cand or size + greedy_cover_bound(cand) <= best[0]:
            return
        # branch on a candidate of minimum remaining degree
        pick, pick_deg = -1, n + 1
        m = cand
        while m:
            low = m & -m
            i = low.bit_length() - 1
            m ^= low
            d = popcount(masks[i] & cand)
            if d < pick_deg:
                pick, pick_deg = i, d
                if d <= 1:
                    break
        bit = 1 << pick
        expand(chosen | bit, size + 1, cand & ~masks[pick] & ~bit)
        if pick_deg > 1:
            expand(chosen, size, cand & ~bit)

    expand(0, 0, (1 << n) - 1)
    return best[1]


def max_independent_arc_set(G: Graph, guard: int | None = DEFAULT_ARC_GUARD) -> list[Arc]:
    """A maximum set of pairwise non-conflicting arcs."""
    check_guard(G, guard)
    arc_list = arcs(G)
    chosen = _max_independent(conflict_masks(arc_list))
    return [a for i, a in enumerate(arc_list) if chosen >> i & 1]


def is_independent_arc_set(chosen: Iterable[tuple[int, int]]) -> bool:
    items = [Arc(*a) for a in chosen]
    return all(not adjacent(a, b) for i, a in enumerate(items) for b in items[i + 1 :])


