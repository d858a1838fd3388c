"""Small undirected simple graphs stored as per-vertex neighbor bitmasks.

Vertex sets are Python ints used as bitsets (bit ``v`` set means vertex ``v``
is present), so every graph is capped at 64 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 64
MAX_CANONICAL_VERTICES = 8
MAX_ENUMERATE_VERTICES = 5

GRAPH6_HEADER = ">>graph6<<"


class GraphError(ValueError):
    """Invalid graph data or parameters."""


class UnsupportedSizeError(GraphError):
    pass


class Graph6Error(GraphError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbor index >= n")
            if nb >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            m = nb
            while m:
                low = m & -m
                u = low.bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")
                m ^= low

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in bits(self.adj[v]) if u < v]

    @property
    def num_edges(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in ascending order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

FAMILIES = ("complete", "empty", "cycle", "path", "biclique", "petersen-generalized", "t3")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: tuple[int, ...] = ()

    def validate(self) -> None:
        f, p = self.family, self.params
        if f not in FAMILIES:
            raise GraphError(f"unknown graph family {f!r}")
        arity = {"t3": 0, "petersen-generalized": 2}.get(f, 1)
        if len(p) != arity:
            raise GraphError(f"family {f} takes {arity} parameter(s), got {len(p)}")
        if f == "petersen-generalized":
            n, k = p
            if n < 3 or not 1 <= k < n / 2:
                raise GraphError(f"GP({n},{k}) requires n >= 3 and 1 <= k < n/2")
            if 2 * n > MAX_VERTICES:
                raise GraphError(f"GP({n},{k}) exceeds {MAX_VERTICES} vertices")
        elif f == "cycle" and p[0] < 3:
            raise GraphError("cycle requires at least 3 vertices")
        elif f == "biclique" and not 0 <= 2 * p[0] <= MAX_VERTICES:
            raise GraphError(f"invalid biclique side {p[0]}")
        elif f in ("complete", "empty", "path") and not 0 <= p[0] <= MAX_VERTICES:
            raise GraphError(f"invalid vertex count {p[0]}")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def empty_graph(n: int) -> Graph:
    return Graph(n, (0,) * n)


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def complete_bipartite(d: int) -> Graph:
    """K_{d,d}: sides {0..d-1} and {d..2d-1}."""
    return Graph.from_edges(2 * d, ((i, d + j) for i in range(d) for j in range(d)))


def generalized_petersen(n: int, k: int) -> Graph:
    """GP(n,k): outer cycle u_i = i, inner vertices v_i = n + i.

    Edges are u_i u_{i+1}, spokes u_i v_i and inner v_i v_{i+k}, indices mod n.
    """
    FamilySpec("petersen-generalized", (n, k)).validate()
    edges = []
    for i in range(n):
        edges.append((i, (i + 1) % n))
        edges.append((i, n + i))
        edges.append((n + i, n + (i + k) % n))
    return Graph.from_edges(2 * n, edges)


def t3_tree() -> Graph:
    """First three levels of the infinite 3-regular tree (10 vertices).

    Root 0, children 1..3, and child c has leaves 2c+2, 2c+3.
    """
    edges = [(0, c) for c in (1, 2, 3)]
    edges += [(c, 2 * c + 2) for c in (1, 2, 3)] + [(c, 2 * c + 3) for c in (1, 2, 3)]
    return Graph.from_edges(10, edges)


def generate(spec: FamilySpec) -> Graph:
    spec.validate()
    f, p = spec.family, spec.params
    if f == "complete":
        return complete_graph(p[0])
    if f == "empty":
        return empty_graph(p[0])
    if f == "cycle":
        return cycle_graph(p[0])
    if f == "path":
        return path_graph(p[0])
    if f == "biclique":
        return complete_bipartite(p[0])
    if f == "petersen-generalized":
        return generalized_petersen(*p)
    return t3_tree()


# ---------------------------------------------------------------------------
# graph6
# ---------------------------------------------------------------------------

def _size_field(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    return chr(126) + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))


def write_graph6(g: Graph) -> str:
    """Encode ``g`` in graph6 without relabeling and without header."""
    out = [_size_field(g.n)]
    acc = nbits = 0
    for j in range(1, g.n):
        for i in range(j):
            acc = (acc << 1) | (g.adj[i] >> j & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    """Decode one graph6 line; an optional ``>>graph6<<`` header is skipped."""
    base = 0
    s = text.rstrip("\r\n")
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
        base = len(GRAPH6_HEADER)
    if not s:
        raise Graph6Error("empty graph6 string", base)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range", base + pos)

    if ord(s[0]) < 126:
        n, body_start = ord(s[0]) - 63, 1
    else:
        if len(s) < 4 or ord(s[1]) == 126:
            raise Graph6Error("malformed long size field", base)
        digits = [ord(c) - 63 for c in s[1:4]]
        n = (digits[0] << 12) | (digits[1] << 6) | digits[2]
        body_start = 4
        if n <= 62:
            raise Graph6Error("long size field used for n <= 62", base)
    if n > MAX_VERTICES:
        raise Graph6Error(f"graph has {n} vertices, limit is {MAX_VERTICES}", base)

    nbits = n * (n - 1) // 2
    nchars = (nbits + 5) // 6
    body = s[body_start:]
    if len(body) != nchars:
        raise Graph6Error(
            f"expected {nchars} data bytes for n={n}, found {len(body)}",
            base + body_start + min(len(body), nchars),
        )

    adj = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (ord(body[k // 6]) - 63) >> (5 - k % 6) & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
            k += 1
    if nbits % 6:
        pad = 6 - nbits % 6
        if (ord(body[-1]) - 63) & ((1 << pad) - 1):
            raise Graph6Error("nonzero padding bits", base + body_start + nchars - 1)
    return Graph(n, tuple(adj))


def read_graph6_lines(lines: Iterable[str]) -> list[Graph]:
    graphs = []
    for line in lines:
        line = line.strip()
        if line and line != GRAPH6_HEADER:
            graphs.append(parse_graph6(line))
    return graphs


# ---------------------------------------------------------------------------
# predicates and transforms
# ---------------------------------------------------------------------------

def regular_degree(g: Graph) -> int | None:
    if g.n == 0:
        return 0
    d = g.degree(0)
    return d if all(g.degree(v) == d for v in range(g.n)) else None


def is_triangle_free(g: Graph) -> bool:
    return all(not (g.adj[u] & g.adj[v]) for u, v in g.edges())


def is_disjoint_union_of_cliques(g: Graph) -> bool:
    """True when every closed neighborhood is a clique component."""
    for v in range(g.n):
        closed = g.adj[v] | (1 << v)
        if any(g.adj[u] | (1 << u) != closed for u in bits(g.adj[v])):
            return False
    return True


def induced_subgraph(g: Graph, s: int | Iterable[int]) -> Graph:
    """G[s] with the kept vertices relabeled 0.. in ascending order."""
    mask = s if isinstance(s, int) else sum(1 << v for v in set(s))
    if mask & ~g.vertex_mask:
        raise GraphError("induced vertex set not contained in the graph")
    keep = bits(mask)
    index = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        nb = 0
        for u in bits(g.adj[v] & mask):
            nb |= 1 << index[u]
        adj.append(nb)
    return Graph(len(keep), tuple(adj))


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    seen = frontier = 1
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen == g.vertex_mask


# ---------------------------------------------------------------------------
# canonical labeling and enumeration
# ---------------------------------------------------------------------------

CanonicalKey = tuple[int, int]


def _pair_index(n: int) -> dict[tuple[int, int], int]:
    # graph6 bit order, most significant first
    idx = {}
    k = 0
    for j in range(1, n):
        for i in range(j):
            idx[i, j] = idx[j, i] = n * (n - 1) // 2 - 1 - k
            k += 1
    return idx


@lru_cache(maxsize=None)
def _canonical(n: int, adj: tuple[int, ...]) -> tuple[CanonicalKey, tuple[int, ...]]:
    edges = Graph(n, adj).edges()
    idx = _pair_index(n)
    best, best_perm = -1, tuple(range(n))
    for perm in permutations(range(n)):
        code = 0
        for u, v in edges:
            code |= 1 << idx[perm[u], perm[v]]
        if code > best:
            best, best_perm = code, perm
    return (n, best), best_perm


def canonical_label(g: Graph) -> CanonicalKey:
    """Isomorphism-invariant key: maximum graph6 bit string over all labelings."""
    if g.n > MAX_CANONICAL_VERTICES:
        raise UnsupportedSizeError(
            f"canonical labeling supports n <= {MAX_CANONICAL_VERTICES}, got {g.n}"
        )
    return _canonical(g.n, g.adj)[0]


def canonical_form(g: Graph) -> Graph:
    """The relabeling of ``g`` that realizes its canonical key."""
    canonical_label(g)
    return g.relabel(_canonical(g.n, g.adj)[1])


def enumerate_nonisomorphic(max_vertices: int) -> list[Graph]:
    """One canonical representative per isomorphism class on 0..max_vertices vertices.

    Ordered by vertex count, then canonical key.
    """
    if max_vertices > MAX_ENUMERATE_VERTICES:
        raise UnsupportedSizeError(
            f"enumeration supports at most {MAX_ENUMERATE_VERTICES} vertices"
        )
    out = []
    for n in range(max_vertices + 1):
        pairs = list(combinations(range(n), 2))
        classes: dict[CanonicalKey, Graph] = {}
        for m in range(1 << len(pairs)):
            g = Graph.from_edges(n, (p for k, p in enumerate(pairs) if m >> k & 1))
            key = canonical_label(g)
            if key not in classes:
                classes[key] = canonical_form(g)
        out.extend(classes[k] for k in sorted(classes))
    return out


def naive_cubic_tf_corpus(n: int) -> list[Graph]:
    """Connected cubic triangle-free graphs on ``n`` vertices, duplicates allowed.

    Backtracks over labelings in breadth-first order from vertex 0: vertices
    are saturated in index order and every newly discovered neighbor takes the
    next unused label. Every connected graph has such a labeling, which prunes
    most of the labeled search space without isomorph rejection.
    """
    if n % 2:
        raise GraphError(f"cubic graphs need an even vertex count, got {n}")
    if not 4 <= n <= 12:
        raise GraphError(f"corpus generator supports 4 <= n <= 12, got {n}")

    adj = [0] * n
    found: list[Graph] = []
    seen: set[tuple[int, ...]] = set()

    def extend(v: int, next_new: int) -> None:
        if v == n:
            if next_new == n:
                key = tuple(adj)
                if key not in seen:
                    seen.add(key)
                    found.append(Graph(n, key))
            return
        if v >= next_new:
            return  # disconnected
        need = 3 - adj[v].bit_count()
        if need == 0:
            extend(v + 1, next_new)
            return
        old = [w for w in range(v + 1, next_new)
               if adj[w].bit_count() < 3 and not adj[w] >> v & 1 and not adj[w] & adj[v]]
        for n_new in range(need + 1):
            if next_new + n_new > n:
                break
            new = list(range(next_new, next_new + n_new))
            for chosen in combinations(old, need - n_new):
                # chosen old vertices must not be adjacent to each other
                if any(adj[a] >> b & 1 for a, b in combinations(chosen, 2)):
                    continue
                targets = list(chosen) + new
                for w in targets:
                    adj[v] |= 1 << w
                    adj[w] |= 1 << v
                extend(v + 1, next_new + n_new)
                for w in targets:
                    adj[v] &= ~(1 << w)
                    adj[w] &= ~(1 << v)

    if n > 1:
        extend(0, 1)
    return found


def iter_graph6_file(path: str) -> Iterator[Graph]:
    with open(path) as fh:
        yield from read_graph6_lines(fh)
