"""Core graph representation and the chordless-path / pattern-embedding searches.

Graphs are finite, undirected and simple, with an ordered vertex list.  The
stored order doubles as the candidate tracing function: a graph is traceable
when consecutive vertices of the list are adjacent.  All search operations
return the lexicographically least witness with respect to the stored order,
so results are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InvalidInputError

PathSeq = tuple


class Graph:
    """Immutable undirected simple graph over integer vertices."""

    __slots__ = ("vertices", "_pos", "_adj", "_masks")

    def __init__(self, vertices, edges):
        verts = tuple(int(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise InvalidInputError("duplicate vertices: %r" % (verts,))
        if any(v < 0 for v in verts):
            raise InvalidInputError("vertices must be natural numbers")
        pos = {v: i for i, v in enumerate(verts)}
        adj = {v: set() for v in verts}
        for u, v in edges:
            if u == v:
                raise InvalidInputError("self-loop at %r" % (u,))
            if u not in pos or v not in pos:
                raise InvalidInputError("edge endpoint outside vertex set: %r" % ((u, v),))
            adj[u].add(v)
            adj[v].add(u)
        masks = [0] * len(verts)
        for v, nbrs in adj.items():
            m = 0
            for w in nbrs:
                m |= 1 << pos[w]
            masks[pos[v]] = m
        self.vertices = verts
        self._pos = pos
        self._adj = {v: frozenset(nbrs) for v, nbrs in adj.items()}
        self._masks = tuple(masks)

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self._pos

    def has_edge(self, u, v) -> bool:
        return v in self._adj.get(u, frozenset())

    def neighbors(self, v) -> frozenset:
        if v not in self._pos:
            raise InvalidInputError("vertex %r not in graph" % (v,))
        return self._adj[v]

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def edges(self):
        """Edge list as sorted (u, v) pairs with u < v."""
        out = []
        for v in self.vertices:
            for w in self._adj[v]:
                if v < w:
                    out.append((v, w))
        out.sort()
        return out

    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj.values()) // 2

    def position(self, v) -> int:
        return self._pos[v]

    def adjacency_mask(self, i: int) -> int:
        """Neighbour bitmask of the vertex at position ``i`` (bits are positions)."""
        return self._masks[i]

    def __repr__(self):
        return "Graph(%d vertices, %d edges)" % (len(self.vertices), self.edge_count())


def path_graph(n: int) -> Graph:
    """The plain path 0 - 1 - ... - (n-1)."""
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph(range(n), itertools.combinations(range(n), 2))


def check_traceable(g: Graph) -> bool:
    """True when consecutive vertices of the stored order are adjacent."""
    return all(g.has_edge(u, v) for u, v in zip(g.vertices, g.vertices[1:]))


def _check_path_input(g: Graph, p) -> None:
    if len(set(p)) != len(p):
        raise InvalidInputError("path has duplicate vertices: %r" % (list(p),))
    for v in p:
        if v not in g:
            raise InvalidInputError("path vertex %r not in graph" % (v,))


def is_path(g: Graph, p) -> bool:
    _check_path_input(g, p)
    return all(g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1))


def is_chordless(g: Graph, p) -> bool:
    """True iff ``p`` is a path in ``g`` with no edges between non-consecutive vertices."""
    _check_path_input(g, p)
    if not all(g.has_edge(p[i], p[i + 1]) for i in range(len(p) - 1)):
        return False
    for i in range(len(p)):
        for j in range(i + 2, len(p)):
            if g.has_edge(p[i], p[j]):
                return False
    return True


def find_chordless_positions(masks, size: int, n: int):
    """Chordless ``n``-vertex path over raw adjacency bitmasks, or None.

    Depth-first search over positions; a candidate extension must be adjacent
    to the current endpoint and non-adjacent to every earlier vertex, which
    prunes chords as the path grows.  The first path found is the
    lexicographically least one.
    """
    if n == 1:
        return (0,) if size else None
    path = []

    def extend(last: int, used: int, banned: int):
        # banned: positions adjacent to any path vertex except the endpoint.
        if len(path) == n:
            return True
        cand = masks[last] & ~used & ~banned
        while cand:
            bit = cand & -cand
            cand ^= bit
            nxt = bit.bit_length() - 1
            path.append(nxt)
            if extend(nxt, used | bit, banned | masks[last]):
                return True
            path.pop()
        return False

    for start in range(size):
        path.append(start)
        if extend(start, 1 << start, 0):
            return tuple(path)
        path.pop()
    return None


def find_chordless_path(g: Graph, n: int):
    """Lexicographically least chordless path on exactly ``n`` vertices, or None."""
    if n < 1:
        raise InvalidInputError("path length must be >= 1, got %d" % n)
    size = len(g)
    if n > size:
        return None
    found = find_chordless_positions(g._masks, size, n)
    if found is None:
        return None
    return tuple(g.vertices[i] for i in found)


def has_chordless_path(g: Graph, n: int) -> bool:
    return find_chordless_path(g, n) is not None


# Pattern graphs.  Three fixed bipartite families are supported: K22, the
# truncated half-graph A(k) with edges a_n - b_m exactly when n <= m, and the
# complete bipartite truncation Kkk(k).


@dataclass(frozen=True)
class Pattern:
    kind: str  # "K22" | "A" | "Kkk"
    k: int

    def __post_init__(self):
        if self.kind not in ("K22", "A", "Kkk"):
            raise InvalidInputError("unknown pattern kind %r" % (self.kind,))
        if self.kind == "K22" and self.k != 2:
            raise InvalidInputError("K22 has fixed size 2")
        if self.k < 1:
            raise InvalidInputError("pattern size must be >= 1")

    @property
    def vertex_names(self):
        return tuple("a%d" % i for i in range(self.k)) + tuple(
            "b%d" % i for i in range(self.k)
        )

    def edges(self):
        """Pattern edges as (a-name, b-name) pairs."""
        if self.kind == "A":
            return [("a%d" % n, "b%d" % m) for n in range(self.k) for m in range(n, self.k)]
        return [("a%d" % n, "b%d" % m) for n in range(self.k) for m in range(self.k)]

    def __str__(self):
        return "K22" if self.kind == "K22" else "%s(%d)" % (self.kind, self.k)


K22 = Pattern("K22", 2)


def pattern_A(k: int) -> Pattern:
    return Pattern("A", k)


def pattern_Kkk(k: int) -> Pattern:
    return Pattern("Kkk", k)


def pattern_graph(pattern: Pattern) -> Graph:
    """The pattern itself as a Graph (a-side on 0..k-1, b-side on k..2k-1)."""
    k = pattern.k
    names = {name: i for i, name in enumerate(pattern.vertex_names)}
    return Graph(range(2 * k), [(names[a], names[b]) for a, b in pattern.edges()])


@dataclass(frozen=True)
class Embedding:
    """Injective, edge-preserving map from a pattern into a host graph."""

    pattern: Pattern
    assignment: dict

    def image(self):
        return tuple(self.assignment[name] for name in self.pattern.vertex_names)


def embedding_is_valid(g: Graph, emb: Embedding) -> bool:
    names = emb.pattern.vertex_names
    if set(emb.assignment) != set(names):
        return False
    image = [emb.assignment[name] for name in names]
    if len(set(image)) != len(image):
        return False
    if any(v not in g for v in image):
        return False
    return all(
        g.has_edge(emb.assignment[a], emb.assignment[b]) for a, b in emb.pattern.edges()
    )


def find_embedding(g: Graph, pattern: Pattern):
    """Lexicographically least embedding of ``pattern`` into ``g``, or None."""
    k = pattern.k
    size = len(g)
    if 2 * k > size:
        return None
    masks = g._masks
    verts = g.vertices
    names = pattern.vertex_names
    # Pattern adjacency in search order: edges from each vertex to earlier ones.
    name_index = {name: i for i, name in enumerate(names)}
    earlier_nbrs = [[] for _ in names]
    for a, b in pattern.edges():
        ia, ib = name_index[a], name_index[b]
        lo, hi = min(ia, ib), max(ia, ib)
        earlier_nbrs[hi].append(lo)

    chosen = []

    def place(idx: int, used: int) -> bool:
        if idx == len(names):
            return True
        cand = ~used & ((1 << size) - 1)
        for j in earlier_nbrs[idx]:
            cand &= masks[chosen[j]]
        while cand:
            bit = cand & -cand
            cand ^= bit
            p = bit.bit_length() - 1
            chosen.append(p)
            if place(idx + 1, used | bit):
                return True
            chosen.pop()
        return False

    if not place(0, 0):
        return None
    emb = Embedding(pattern, {name: verts[p] for name, p in zip(names, chosen)})
    if not embedding_is_valid(g, emb):  # witness soundness re-check
        raise AssertionError("search produced an invalid embedding: %r" % (emb,))
    return emb
