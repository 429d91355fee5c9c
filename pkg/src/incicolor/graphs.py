"""Simple undirected graphs on dense integer labels, generators, I/O and
the union / Cartesian product / join constructions."""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

GRAPH6_HEADER = ">>graph6<<"
GRAPH6_MAX_N = 62


class GraphError(ValueError):
    """Raised for invalid graph construction input."""


class Graph6Error(GraphError):
    """Malformed graph6 word. ``offset`` is the byte position of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable labeled simple graph with vertices ``0..n-1``."""

    __slots__ = ("_adj", "_edges", "_n")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        adj: list[set[int]] = [set() for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for pair in edges:
            u, v = int(pair[0]), int(pair[1])
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            e = _norm(u, v)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            adj[u].add(v)
            adj[v].add(u)
        self._n = n
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._edges = tuple(sorted(seen))

    @property
    def n(self) -> int:
        return self._n

    @property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        return self._adj

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted."""
        return self._edges

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self._n and v in self._adj[u]

    def vertices(self) -> range:
        return range(self._n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.edge_count})"

    def relabel(self, mapping: Sequence[int]) -> Graph:
        """Image of this graph under a vertex permutation ``u -> mapping[u]``."""
        return Graph(self._n, ((mapping[u], mapping[v]) for u, v in self._edges))

    def padded(self, n: int) -> Graph:
        """Same edges on ``n >= self.n`` vertices (extra vertices isolated)."""
        if n < self._n:
            raise GraphError(f"cannot pad {self._n} vertices down to {n}")
        return Graph(n, self._edges)

    def is_connected(self) -> bool:
        return self._n <= 1 or len(components(self)) == 1

    # --- serialization -------------------------------------------------

    def to_graph6(self, header: bool = False) -> str:
        return encode_graph6(self, header=header)

    def to_edge_list_text(self) -> str:
        lines = [f"{self._n} {self.edge_count}"]
        lines.extend(f"{u} {v}" for u, v in self._edges)
        return "\n".join(lines) + "\n"

    def to_dot(self, edge_labels: dict[tuple[int, int], str] | None = None, name: str = "G") -> str:
        """Graphviz DOT text. ``edge_labels`` keys are normalized edges."""
        out = [f"graph {name} {{"]
        out.extend(f"  {u};" for u in range(self._n))
        for u, v in self._edges:
            label = edge_labels.get((u, v)) if edge_labels else None
            out.append(f'  {u} -- {v} [label="{label}"];' if label else f"  {u} -- {v};")
        out.append("}")
        return "\n".join(out) + "\n"


def from_edge_list(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, edges)


def components(G: Graph) -> list[list[int]]:
    seen = [False] * G.n
    comps = []
    for s in G.vertices():
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in G.neighbors(u):
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


# --- graph6 --------------------------------------------------------------


def encode_graph6(G: Graph, header: bool = False) -> str:
    n = G.n
    if n > GRAPH6_MAX_N:
        raise GraphError(f"graph6 encoding supports n <= {GRAPH6_MAX_N}, got {n}")
    bits = [1 if G.has_edge(i, j) else 0 for j in range(1, n) for i in range(j)]
    bits.extend([0] * (-len(bits) % 6))
    chars = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        chars.append(chr(val + 63))
    body = "".join(chars)
    return GRAPH6_HEADER + body if header else body


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    base = 0
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER) :]
        base = len(GRAPH6_HEADER)
    if not s:
        raise Graph6Error("empty graph6 word", base)
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"illegal character {ch!r}", base + i)
    first = ord(s[0]) - 63
    if first == 63:
        raise Graph6Error(f"multi-byte vertex count unsupported (n > {GRAPH6_MAX_N})", base)
    n = first
    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    data = s[1:]
    if len(data) != nchars:
        raise Graph6Error(
            f"expected {nchars} data bytes for n={n}, found {len(data)}",
            base + 1 + min(len(data), nchars),
        )
    bits: list[int] = []
    for ch in data:
        val = ord(ch) - 63
        bits.extend((val >> (5 - k)) & 1 for k in range(6))
    if any(bits[nbits:]):
        raise Graph6Error("nonzero padding bits", base + len(s) - 1)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def parse_edge_list_text(text: str) -> Graph:
    """First line ``n m``, then ``m`` lines ``u v``. Blank lines and ``#`` comments skipped."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise GraphError("empty edge-list input")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge-list line: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header declares {m} edges, found {len(edges)}")
    return Graph(n, edges)


def parse_graph_text(text: str) -> Graph:
    """Autodetect graph6 vs edge-list text."""
    stripped = text.strip()
    first = stripped.splitlines()[0].split() if stripped else []
    if len(first) == 2 and all(tok.lstrip("-").isdigit() for tok in first):
        return parse_edge_list_text(text)
    if len(stripped.splitlines()) != 1:
        raise GraphError("input is neither a one-line graph6 word nor an edge list")
    return parse_graph6(stripped)


# --- generators ------------------------------------------------------------


def null_graph(n: int) -> Graph:
    return Graph(n)


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"path needs n >= 1, got {n}")
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return Graph(n, combinations(range(n), 2))


def complete_bipartite(m: int, n: int) -> Graph:
    """K_{m,n}: side A = 0..m-1, side B = m..m+n-1."""
    if not m >= n >= 1:
        raise GraphError(f"complete_bipartite needs m >= n >= 1, got ({m}, {n})")
    return Graph(m + n, ((a, m + b) for a in range(m) for b in range(n)))


def star(k: int) -> Graph:
    """K_{1,k} with center 0."""
    if k < 1:
        raise GraphError(f"star needs k >= 1, got {k}")
    return Graph(k + 1, ((0, i) for i in range(1, k + 1)))


def wheel(n: int) -> Graph:
    """Hub 0 joined to a cycle on 1..n, i.e. K_1 join C_n (max degree n)."""
    if n < 3:
        raise GraphError(f"wheel needs n >= 3, got {n}")
    return join(complete(1), cycle(n))


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise GraphError(f"grid needs positive dimensions, got ({rows}, {cols})")
    return cartesian_product(path(rows), path(cols))


def prism(n: int) -> Graph:
    """C_n x K_2; vertex (i, s) is ``2*i + s``."""
    return cartesian_product(cycle(n), complete(2))


def petersen() -> Graph:
    """Kneser graph K(5,2): 2-subsets of {0..4} adjacent iff disjoint."""
    subsets = list(combinations(range(5), 2))
    edges = [
        (i, j)
        for i, j in combinations(range(len(subsets)), 2)
        if not set(subsets[i]) & set(subsets[j])
    ]
    return Graph(len(subsets), edges)


def matching_pair(n: int, which: str) -> Graph:
    """The two perfect matchings whose union is the cycle 0-1-...-(n-1)-0.

    ``which='a'`` gives edges (0,1),(2,3),...; ``which='b'`` gives
    (1,2),(3,4),...,(n-1,0).
    """
    if n < 4 or n % 2:
        raise GraphError(f"matching_pair needs even n >= 4, got {n}")
    if which == "a":
        return Graph(n, ((2 * i, 2 * i + 1) for i in range(n // 2)))
    if which == "b":
        return Graph(n, ((2 * i + 1, (2 * i + 2) % n) for i in range(n // 2)))
    raise GraphError(f"matching_pair side must be 'a' or 'b', got {which!r}")


def random_gnp(n: int, p: float, seed: int, connected: bool = False) -> Graph:
    """Erdos-Renyi G(n, p). With ``connected`` the draw is repeated from the
    same RNG stream until connected, so the result is still a function of seed."""
    if n < 1:
        raise GraphError(f"random_gnp needs n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"probability must lie in [0, 1], got {p}")
    if connected and n > 1 and p == 0.0:
        raise GraphError("connected G(n, 0) is impossible for n > 1")
    rng = random.Random(seed)
    pairs = list(combinations(range(n), 2))
    while True:
        G = Graph(n, [e for e in pairs if rng.random() < p])
        if not connected or G.is_connected():
            return G


def random_ktree(k: int, n: int, seed: int) -> tuple[Graph, list[int]]:
    """Random k-tree on n vertices and its construction ordering.

    Starts from K_{k+1} on 0..k; vertex v > k is attached to a uniformly
    chosen k-clique among those created so far.
    """
    if k < 1 or n < k + 1:
        raise GraphError(f"random_ktree needs k >= 1 and n >= k + 1, got k={k}, n={n}")
    rng = random.Random(seed)
    edges = list(combinations(range(k + 1), 2))
    cliques = [tuple(c) for c in combinations(range(k + 1), k)]
    for v in range(k + 1, n):
        base = cliques[rng.randrange(len(cliques))]
        edges.extend((u, v) for u in base)
        for drop in range(k):
            cliques.append(tuple(sorted(base[:drop] + base[drop + 1 :] + (v,))))
    return Graph(n, edges), list(range(n))


@dataclass(frozen=True)
class GraphFamily:
    """A named, parameterized construction. Deterministic given its fields."""

    tag: str
    args: tuple = ()
    seed: int | None = None
    connected: bool = False

    def instance_id(self) -> str:
        text = self.tag
        if self.args:
            text += ":" + ",".join(str(a) for a in self.args)
        if self.seed is not None:
            text += f"@seed={self.seed}"
        if self.connected:
            text += "+connected"
        return text


FAMILIES = (
    "cycle", "path", "complete", "complete_bipartite", "star", "wheel", "grid",
    "prism", "petersen", "random_gnp", "random_ktree", "matching_pair", "null",
)


def generate_with_ordering(spec: GraphFamily) -> tuple[Graph, list[int] | None]:
    """Build the family instance; random k-trees also return their ordering."""
    tag, args = spec.tag, spec.args
    try:
        if tag == "cycle":
            return cycle(*args), None
        if tag == "path":
            return path(*args), None
        if tag == "complete":
            return complete(*args), None
        if tag == "complete_bipartite":
            return complete_bipartite(*args), None
        if tag == "star":
            return star(*args), None
        if tag == "wheel":
            return wheel(*args), None
        if tag == "grid":
            return grid(*args), None
        if tag == "prism":
            return prism(*args), None
        if tag == "petersen":
            return petersen(*args), None
        if tag == "null":
            return null_graph(*args), None
        if tag == "matching_pair":
            return matching_pair(*args), None
        if tag == "random_gnp":
            return random_gnp(*args, seed=_need_seed(spec), connected=spec.connected), None
        if tag == "random_ktree":
            return random_ktree(*args, seed=_need_seed(spec))
    except TypeError as exc:
        raise GraphError(f"bad arguments {args!r} for family {tag!r}: {exc}") from None
    raise GraphError(f"unknown graph family {tag!r}; known: {', '.join(FAMILIES)}")


def generate(spec: GraphFamily) -> Graph:
    return generate_with_ordering(spec)[0]


def _need_seed(spec: GraphFamily) -> int:
    if spec.seed is None:
        raise GraphError(f"family {spec.tag!r} requires a seed")
    return spec.seed


def parse_family(text: str, seed: int | None = None) -> GraphFamily:
    """Parse ``NAME[:ARG,ARG...]``.

    Integer arguments are converted; ``random_gnp`` takes a float
    probability. ``matching:10a`` is shorthand for ``matching_pair:10,a``
    and ``null``/``complete`` etc. take their usual counts.
    """
    name, _, rest = text.partition(":")
    name = name.strip()
    raw = [a.strip() for a in rest.split(",")] if rest else []
    if name == "matching" and len(raw) == 1 and raw[0][-1:] in ("a", "b"):
        return GraphFamily("matching_pair", (int(raw[0][:-1]), raw[0][-1]))
    args: list = []
    for a in raw:
        try:
            args.append(int(a))
        except ValueError:
            try:
                args.append(float(a))
            except ValueError:
                args.append(a)
    if name not in FAMILIES:
        raise GraphError(f"unknown graph family {name!r}; known: {', '.join(FAMILIES)}")
    # command-line random graphs are resampled until connected
    connected = name == "random_gnp"
    return GraphFamily(name, tuple(args), seed if name.startswith("random") else None, connected)


# --- constructions -----------------------------------------------------------


def union(G1: Graph, G2: Graph) -> Graph:
    """Edge union on the common vertex set 0..max(n1, n2)-1.

    The smaller operand is padded with isolated vertices; an edge present
    in both is kept once.
    """
    n = max(G1.n, G2.n)
    edges = set(G1.edges())
    edges.update(G2.edges())
    return Graph(n, edges)


def product_vertex(a: int, b: int, n2: int) -> int:
    return a * n2 + b


def cartesian_product(G1: Graph, G2: Graph) -> Graph:
    """Vertex ``(a, b)`` is labeled ``a * |V(G2)| + b``."""
    n1, n2 = G1.n, G2.n
    edges = []
    for a in range(n1):
        for b1, b2 in G2.edges():
            edges.append((a * n2 + b1, a * n2 + b2))
    for a1, a2 in G1.edges():
        for b in range(n2):
            edges.append((a1 * n2 + b, a2 * n2 + b))
    return Graph(n1 * n2, edges)


def join(G1: Graph, G2: Graph) -> Graph:
    """G1 keeps labels 0..m-1, G2 is shifted by m, plus all m*n cross edges."""
    m, n = G1.n, G2.n
    edges = list(G1.edges())
    edges.extend((u + m, v + m) for u, v in G2.edges())
    edges.extend((a, m + b) for a in range(m) for b in range(n))
    return Graph(m + n, edges)


# --- structure ---------------------------------------------------------------


def bipartition(G: Graph) -> list[int] | None:
    """BFS 2-coloring as a side list, or None when an odd cycle exists."""
    side = [-1] * G.n
    for s in G.vertices():
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in G.neighbors(u):
                if side[v] == -1:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    return None
    return side


def degeneracy_ordering(G: Graph) -> tuple[int, list[int]]:
    """Return (degeneracy d, ordering v_1..v_n) where each v_i has at most d
    neighbors among v_1..v_{i-1}. Built by repeated min-degree removal."""
    deg = G.degrees()
    removed = [False] * G.n
    elim = []
    d = 0
    for _ in range(G.n):
        u = min((v for v in G.vertices() if not removed[v]), key=lambda v: (deg[v], v))
        d = max(d, deg[u])
        removed[u] = True
        elim.append(u)
        for w in G.neighbors(u):
            if not removed[w]:
                deg[w] -= 1
    return d, elim[::-1]


def max_cardinality_ordering(G: Graph) -> list[int]:
    """Maximum cardinality search visit order. For chordal graphs every
    vertex's earlier neighbors form a clique under this order."""
    weight = [0] * G.n
    done = [False] * G.n
    order = []
    for _ in range(G.n):
        u = max((v for v in G.vertices() if not done[v]), key=lambda v: (weight[v], -v))
        done[u] = True
        order.append(u)
        for w in G.neighbors(u):
            if not done[w]:
                weight[w] += 1
    return order


def restricted_degeneracy(G: Graph, ordering: Sequence[int]) -> int | None:
    """Smallest k for which ``ordering`` witnesses restricted k-degeneracy,
    or None if some earlier neighborhood is not a clique."""
    if sorted(ordering) != list(G.vertices()):
        raise GraphError("ordering must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(ordering)}
    k = 0
    for v in ordering:
        back = [w for w in G.neighbors(v) if pos[w] < pos[v]]
        for a, b in combinations(back, 2):
            if not G.has_edge(a, b):
                return None
        k = max(k, len(back))
    return k


@dataclass
class StructureReport:
    n: int
    edge_count: int
    max_degree: int
    regular_degree: int | None
    bipartite: bool
    components: int
    cycle_rank: int
    degeneracy: int
    degeneracy_ordering: list[int] = field(repr=False)
    ordering: list[int] | None = field(default=None, repr=False)
    restricted_k: int | None = None

    @property
    def bipartite_at_most_one_cycle(self) -> bool:
        return self.bipartite and self.cycle_rank <= 1

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.edge_count,
            "max_degree": self.max_degree,
            "regular_degree": self.regular_degree,
            "bipartite": self.bipartite,
            "components": self.components,
            "cycle_rank": self.cycle_rank,
            "bipartite_at_most_one_cycle": self.bipartite_at_most_one_cycle,
            "degeneracy": self.degeneracy,
            "restricted_k": self.restricted_k,
        }


def structure_report(G: Graph, ordering: Sequence[int] | None = None) -> StructureReport:
    """Structural flags used as corollary hypotheses.

    Restricted degeneracy is only checked against ``ordering`` if given,
    else against a maximum cardinality search order.
    """
    degs = G.degrees()
    regular = degs[0] if degs and all(d == degs[0] for d in degs) else None
    ncomp = len(components(G))
    d, dorder = degeneracy_ordering(G)
    used = list(ordering) if ordering is not None else max_cardinality_ordering(G)
    return StructureReport(
        n=G.n,
        edge_count=G.edge_count,
        max_degree=G.max_degree,
        regular_degree=regular,
        bipartite=bipartition(G) is not None,
        components=ncomp,
        cycle_rank=G.edge_count - G.n + ncomp,
        degeneracy=d,
        degeneracy_ordering=dorder,
        ordering=used,
        restricted_k=restricted_degeneracy(G, used),
    )
