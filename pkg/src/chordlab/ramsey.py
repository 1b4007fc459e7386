"""Finite dichotomy for traceable graphs: a K22 copy or a chordless n-path.

The proof-shaped pipeline fixes, for every vertex pair of a traceable host, a
minimal-length increasing path (automatically chordless), colors every
ascending 4-subset by which fixed-path vertices see an edge across the two
pairs, searches for a monochromatic subset, and extracts a witness from it:
a K22 copy from a pair-color class, or a chordless path by a greedy walk over
concatenated fixed paths from the residual class.  Guaranteed success needs
Ramsey-scale hosts, so the practical entry point is :func:`dichotomy`, a
direct search; the pipeline is validated for soundness on small hosts.

All orderings ("increasing", "x < y") refer to positions in the host's stored
vertex order, which is required to be a tracing function here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import (
    ExtractionError,
    InvalidInputError,
    ResourceLimitError,
)
from .graphs import (
    K22,
    Embedding,
    Graph,
    check_traceable,
    embedding_is_valid,
    find_chordless_path,
    find_chordless_positions,
    find_embedding,
    is_chordless,
)


class IncreasingPathTable:
    """Fixed minimal increasing chordless paths for every vertex pair.

    ``path(x, y)`` is the lexicographically least among the minimal-length
    strictly increasing paths from x to y; ``edge_count(x, y)`` is its number
    of edges.  Increasing means increasing position in the host order.
    """

    def __init__(self, graph: Graph, paths: dict):
        self.graph = graph
        self._paths = paths

    def path(self, x, y):
        key = (self.graph.position(x), self.graph.position(y))
        if key not in self._paths:
            raise InvalidInputError("no table entry for pair %r" % ((x, y),))
        return self._paths[key]

    def edge_count(self, x, y) -> int:
        return len(self.path(x, y)) - 1

    def path_vertex(self, x, y, i: int):
        """The i-th vertex of the fixed path from x to y."""
        p = self.path(x, y)
        if i >= len(p):
            raise InvalidInputError(
                "fixed path %r has only %d edges" % ((x, y), len(p) - 1)
            )
        return p[i]

    def pairs(self):
        verts = self.graph.vertices
        return [(verts[i], verts[j]) for i, j in sorted(self._paths)]


def build_increasing_paths(g: Graph, n: int | None = None) -> IncreasingPathTable:
    """Build the fixed-path table for a traceable host.

    A minimal-length increasing path is necessarily chordless: a chord would
    shortcut it.  When ``n`` is given, every pair must satisfy
    ``edge_count <= n - 2`` (which holds whenever the host has no chordless
    n-path); a violation is rejected as invalid input.
    """
    if len(g) < 2:
        raise InvalidInputError("need at least 2 vertices")
    if not check_traceable(g):
        raise InvalidInputError("host is not traceable in its stored order")
    size = len(g)
    masks = [g.adjacency_mask(i) for i in range(size)]
    verts = g.vertices

    # dist_to[y][v]: fewest increasing edges from v up to y.
    dist_to = [None] * size
    for y in range(size):
        dist = [None] * size
        dist[y] = 0
        frontier = [y]
        while frontier:
            nxt = []
            for w in frontier:
                below = masks[w] & ((1 << w) - 1)
                while below:
                    bit = below & -below
                    below ^= bit
                    v = bit.bit_length() - 1
                    if dist[v] is None:
                        dist[v] = dist[w] + 1
                        nxt.append(v)
            frontier = nxt
        dist_to[y] = dist

    paths = {}
    for x in range(size):
        for y in range(x + 1, size):
            total = dist_to[y][x]
            if total is None:
                raise InvalidInputError(
                    "no increasing path %r -> %r; host order is not a tracing"
                    % (verts[x], verts[y])
                )
            if n is not None and total > n - 2:
                raise InvalidInputError(
                    "pair %r needs %d edges, above the bound %d; host has a "
                    "chordless %d-path" % ((verts[x], verts[y]), total, n - 2, n)
                )
            seq = [x]
            cur = x
            remaining = total
            while cur != y:
                step = masks[cur] & ~((1 << (cur + 1)) - 1)
                chosen = None
                while step:
                    bit = step & -step
                    step ^= bit
                    w = bit.bit_length() - 1
                    if w <= y and dist_to[y][w] == remaining - 1:
                        chosen = w
                        break
                if chosen is None:
                    raise AssertionError(
                        "distance table inconsistent at pair %r" % ((x, y),)
                    )
                seq.append(chosen)
                cur = chosen
                remaining -= 1
            p = tuple(verts[i] for i in seq)
            if not is_chordless(g, p):
                raise AssertionError("minimal increasing path %r is not chordless" % (p,))
            paths[(x, y)] = p
    return IncreasingPathTable(g, paths)


RESIDUAL = "K"  # color of 4-subsets matched by no (i, j) pair


@dataclass(frozen=True)
class FourColoring:
    """Color of every ascending 4-subset: a least (i, j) pair, or residual.

    A 4-subset (x, y, u, v) carries (i, j) when the fixed paths are long
    enough (``N(x,y) >= i``, ``N(u,v) >= j``) and the host joins the i-th
    vertex of path(x, y) to the j-th vertex of path(u, v).  The color count
    is (n-1)^2 + 1.
    """

    n: int
    vertices: tuple
    assignment: dict

    def color(self, quad):
        return self.assignment[tuple(quad)]

    def color_names(self):
        side = self.n - 1
        return [(i, j) for i in range(side) for j in range(side)] + [RESIDUAL]


def color_4subset(table: IncreasingPathTable, quad, n: int):
    """Lexicographically least applicable (i, j), else the residual color."""
    x, y, u, v = quad
    g = table.graph
    pxy = table.path(x, y)
    puv = table.path(u, v)
    top_i = min(n - 2, len(pxy) - 1)
    top_j = min(n - 2, len(puv) - 1)
    for i in range(top_i + 1):
        a = pxy[i]
        for j in range(top_j + 1):
            if g.has_edge(a, puv[j]):
                return (i, j)
    return RESIDUAL


def build_coloring(table: IncreasingPathTable, n: int) -> FourColoring:
    verts = table.graph.vertices
    assignment = {}
    for quad in itertools.combinations(verts, 4):
        assignment[quad] = color_4subset(table, quad, n)
    return FourColoring(n=n, vertices=verts, assignment=assignment)


@dataclass(frozen=True)
class HomogeneousCertificate:
    subset: tuple
    color: object


def certificate_is_valid(coloring: FourColoring, cert: HomogeneousCertificate) -> bool:
    if len(cert.subset) < 4:
        return False
    return all(
        coloring.color(quad) == cert.color
        for quad in itertools.combinations(cert.subset, 4)
    )


def find_homogeneous(coloring: FourColoring, vertices, q: int):
    """Exact ordered backtracking search for a q-subset monochromatic on 4-subsets.

    Returns the lexicographically least certificate, or None.
    """
    if q < 4:
        raise InvalidInputError("homogeneous size must be >= 4, got %d" % q)
    pool = list(vertices)
    if len(pool) < q:
        return None
    chosen = []
    state = {"color": None}

    def compatible(v):
        if len(chosen) < 3:
            return True
        color = state["color"]
        for trip in itertools.combinations(chosen, 3):
            c = coloring.color(tuple(sorted(trip + (v,))))
            if color is None:
                color = c
            elif c != color:
                return False
        state["color"] = color
        return True

    def search(start: int) -> bool:
        if len(chosen) == q:
            return True
        for idx in range(start, len(pool) - (q - len(chosen)) + 1):
            v = pool[idx]
            saved = state["color"]
            if compatible(v):
                chosen.append(v)
                if search(idx + 1):
                    return True
                chosen.pop()
            state["color"] = saved
        return False

    if not search(0):
        return None
    cert = HomogeneousCertificate(subset=tuple(chosen), color=state["color"])
    if not certificate_is_valid(coloring, cert):
        raise AssertionError("homogeneous search produced an invalid certificate")
    return cert


def extract_k22(cert: HomogeneousCertificate, table: IncreasingPathTable) -> Embedding:
    """A K22 copy from the first 8 elements of a pair-colored certificate.

    The four image vertices come from fixed paths inside four disjoint
    position intervals, so a collision indicates corrupt inputs; it is
    reported rather than papered over.
    """
    if cert.color == RESIDUAL or not isinstance(cert.color, tuple):
        raise InvalidInputError("certificate color must be a pair class")
    if len(cert.subset) < 8:
        raise InvalidInputError(
            "need at least 8 homogeneous elements, have %d" % len(cert.subset)
        )
    i, j = cert.color
    x1, x2, x3, x4, x5, x6, x7, x8 = cert.subset[:8]
    tops = (
        table.path_vertex(x1, x2, i),
        table.path_vertex(x3, x4, i),
    )
    bots = (
        table.path_vertex(x5, x6, j),
        table.path_vertex(x7, x8, j),
    )
    image = tops + bots
    if len(set(image)) != 4:
        raise ExtractionError(
            "extracted vertices collide: %r" % (image,), detail=image
        )
    emb = Embedding(
        K22,
        {"a0": tops[0], "a1": tops[1], "b0": bots[0], "b1": bots[1]},
    )
    if not embedding_is_valid(table.graph, emb):
        raise ExtractionError(
            "extracted vertices do not form a K22 copy: %r" % (image,), detail=image
        )
    return emb


def concatenated_path(cert: HomogeneousCertificate, table: IncreasingPathTable, n: int):
    """Fixed paths x0 -> x1 -> ... -> xn joined into one increasing path."""
    xs = cert.subset[: n + 1]
    out = list(table.path(xs[0], xs[1]))
    for a, b in zip(xs[1:], xs[2:]):
        out.extend(table.path(a, b)[1:])
    return tuple(out)


def extract_chordless(cert: HomogeneousCertificate, table: IncreasingPathTable, n: int):
    """Greedy chordless n-path from a residual-colored certificate.

    Walk the concatenated fixed path taking, from each vertex, the furthest
    path vertex it sees.  Skipping to the furthest neighbour is what makes
    the result chordless; a stalled or exhausted walk signals a certificate
    or table bug and is raised as an extraction failure.
    """
    if cert.color != RESIDUAL:
        raise InvalidInputError("certificate color must be the residual class")
    if len(cert.subset) < n + 1:
        raise InvalidInputError(
            "need at least %d homogeneous elements, have %d" % (n + 1, len(cert.subset))
        )
    g = table.graph
    walk = concatenated_path(cert, table, n)
    pos = {v: g.position(v) for v in walk}
    ys = [walk[0]]
    while len(ys) < n:
        cur = ys[-1]
        best = None
        for w in walk:
            if w != cur and g.has_edge(cur, w):
                if best is None or pos[w] > pos[best]:
                    best = w
        if best is None or pos[best] <= pos[cur]:
            raise ExtractionError(
                "greedy walk stalled at %r after %d vertices" % (cur, len(ys)),
                detail=tuple(ys),
            )
        ys.append(best)
    result = tuple(ys)
    if not is_chordless(g, result):
        raise ExtractionError("greedy result %r is not chordless" % (result,), detail=result)
    return result


@dataclass(frozen=True)
class DichotomyWitness:
    kind: str  # "chordless_path" | "k22" | "neither"
    path: tuple | None = None
    embedding: Embedding | None = None


def dichotomy(g: Graph, n: int) -> DichotomyWitness:
    """Chordless n-path if one exists, else a K22 copy, else neither.

    Neither is legal only when the host is smaller than the true threshold
    for ``n``.
    """
    if not check_traceable(g):
        raise InvalidInputError("host is not traceable in its stored order")
    p = find_chordless_path(g, n)
    if p is not None:
        return DichotomyWitness(kind="chordless_path", path=p)
    emb = find_embedding(g, K22)
    if emb is not None:
        return DichotomyWitness(kind="k22", embedding=emb)
    return DichotomyWitness(kind="neither")


@dataclass
class PipelineTrace:
    """Step-by-step record of the proof-shaped pipeline on one host."""

    n: int
    q: int
    outcome: str
    witness_kind: str | None = None
    path: tuple | None = None
    embedding: Embedding | None = None
    certificate: HomogeneousCertificate | None = None
    table_pairs: int = 0
    colors_used: int = 0
    notes: list = field(default_factory=list)


def homogeneous_size_for(n: int) -> int:
    """Homogeneous size the pipeline requests: one more than the path, min 8."""
    return max(n + 1, 8)


def proof_pipeline(g: Graph, n: int) -> PipelineTrace:
    q = homogeneous_size_for(n)
    trace = PipelineTrace(n=n, q=q, outcome="")
    direct = find_chordless_path(g, n)
    if direct is not None:
        trace.outcome = "chordless_path"
        trace.witness_kind = "chordless_path"
        trace.path = direct
        trace.notes.append("host already contains a chordless %d-path" % n)
        return trace
    table = build_increasing_paths(g, n)
    trace.table_pairs = len(table.pairs())
    coloring = build_coloring(table, n)
    trace.colors_used = len(set(coloring.assignment.values()))
    cert = find_homogeneous(coloring, g.vertices, q)
    if cert is None:
        trace.outcome = "no_homogeneous_set"
        trace.notes.append(
            "no monochromatic %d-subset; host is below Ramsey scale" % q
        )
        return trace
    trace.certificate = cert
    if cert.color == RESIDUAL:
        path = extract_chordless(cert, table, n)
        trace.outcome = "chordless_path"
        trace.witness_kind = "chordless_path"
        trace.path = path
    else:
        emb = extract_k22(cert, table)
        trace.outcome = "k22"
        trace.witness_kind = "k22"
        trace.embedding = emb
    return trace


# ---------------------------------------------------------------------------
# Exhaustive enumeration of small traceable hosts


def chord_slots(size: int):
    """Non-consecutive vertex pairs of the fixed path 0 - 1 - ... - size-1."""
    return [(i, j) for i in range(size) for j in range(i + 2, size)]


def iter_traceable_masks(size: int):
    """All traceable graphs on ``size`` vertices as adjacency bitmask lists.

    Fixed Hamiltonian path plus every chord subset, enumerated in Gray-code
    order so one chord is toggled per step.  Yields (masks, chord_bits); the
    masks list is reused between iterations and must not be stored.
    """
    masks = [0] * size
    for i in range(size - 1):
        masks[i] |= 1 << (i + 1)
        masks[i + 1] |= 1 << i
    slots = chord_slots(size)
    yield masks, 0
    prev_gray = 0
    for counter in range(1, 1 << len(slots)):
        gray = counter ^ (counter >> 1)
        changed = gray ^ prev_gray
        prev_gray = gray
        u, v = slots[changed.bit_length() - 1]
        masks[u] ^= 1 << v
        masks[v] ^= 1 << u
        yield masks, gray


def masks_to_graph(masks, size: int) -> Graph:
    edges = []
    for u in range(size):
        above = masks[u] >> (u + 1)
        while above:
            bit = above & -above
            above ^= bit
            edges.append((u, u + 1 + bit.bit_length() - 1))
    return Graph(range(size), edges)


def has_k22_masks(masks, size: int):
    """Two vertices with two common neighbours witness a K22 copy."""
    for r in range(size):
        mr = masks[r]
        for s in range(r + 1, size):
            common = mr & masks[s] & ~(1 << r) & ~(1 << s)
            if common and common & (common - 1):
                p = (common & -common).bit_length() - 1
                common &= common - 1
                q = (common & -common).bit_length() - 1
                return (p, q, r, s)
    return None


@dataclass(frozen=True)
class SizeCount:
    size: int
    graphs: int
    neither: int
    example: tuple | None  # edge list of the first neither instance


@dataclass(frozen=True)
class MnReport:
    n: int
    size_bound: int
    sizes: tuple
    largest_neither: int | None

    @property
    def empirical_lower_bound(self):
        if self.largest_neither is None:
            return None
        return self.largest_neither + 1


MAX_ENUMERATION_SIZE = 9


def estimate_min_m(n: int, size_bound: int, jobs: int = 1) -> MnReport:
    """Exhaustively count, per size, hosts with neither witness for ``n``.

    Every traceable graph on up to ``size_bound`` vertices is enumerated
    (fixed Hamiltonian path, every chord subset) and the dichotomy evaluated;
    the largest size with a neither instance gives the empirical lower bound
    largest+1 for the threshold.
    """
    if size_bound > MAX_ENUMERATION_SIZE:
        raise ResourceLimitError(
            "size bound %d exceeds the exhaustive-search budget (max %d)"
            % (size_bound, MAX_ENUMERATION_SIZE)
        )
    counts = []
    largest = None
    for size in range(1, size_bound + 1):
        if jobs > 1 and size >= 6:
            total, neither, best_bits = _count_neither_parallel(size, n, jobs)
        else:
            total, neither, best_bits = _count_neither_range(size, n, 0, None)
        counts.append(
            SizeCount(
                size=size,
                graphs=total,
                neither=neither,
                example=_example_edges(size, best_bits),
            )
        )
        if neither:
            largest = size
    return MnReport(
        n=n, size_bound=size_bound, sizes=tuple(counts), largest_neither=largest
    )


def _count_neither_range(size: int, n: int, prefix_bits: int, prefix_width):
    """Count neither instances; optionally fix the top chord bits to a prefix.

    Returns (total, neither, best_bits) where best_bits is the smallest chord
    bitmask among neither instances, making the reported example canonical no
    matter how the enumeration is partitioned.
    """
    total = 0
    neither = 0
    best_bits = None
    if prefix_width is None:
        iterator = iter_traceable_masks(size)
    else:
        iterator = _iter_prefixed_masks(size, prefix_bits, prefix_width)
    for masks, bits in iterator:
        total += 1
        if find_chordless_positions(masks, size, n) is not None:
            continue
        if has_k22_masks(masks, size) is not None:
            continue
        neither += 1
        if best_bits is None or bits < best_bits:
            best_bits = bits
    return total, neither, best_bits


def _example_edges(size: int, bits):
    if bits is None:
        return None
    slots = chord_slots(size)
    edges = [(i, i + 1) for i in range(size - 1)]
    edges += [slots[b] for b in range(len(slots)) if (bits >> b) & 1]
    return tuple(sorted(edges))


def _iter_prefixed_masks(size: int, prefix_bits: int, prefix_width: int):
    """Gray-code enumeration over the low chord bits with fixed high bits."""
    slots = chord_slots(size)
    low = len(slots) - prefix_width
    masks = [0] * size
    for i in range(size - 1):
        masks[i] |= 1 << (i + 1)
        masks[i + 1] |= 1 << i
    base = prefix_bits << low
    for b in range(prefix_width):
        if (prefix_bits >> b) & 1:
            u, v = slots[low + b]
            masks[u] |= 1 << v
            masks[v] |= 1 << u
    yield masks, base
    prev_gray = 0
    for counter in range(1, 1 << low):
        gray = counter ^ (counter >> 1)
        changed = gray ^ prev_gray
        prev_gray = gray
        u, v = slots[changed.bit_length() - 1]
        masks[u] ^= 1 << v
        masks[v] ^= 1 << u
        yield masks, base | gray


def _count_neither_parallel(size: int, n: int, jobs: int):
    import multiprocessing

    prefix_width = min(2 * max(1, jobs.bit_length()), len(chord_slots(size)))
    tasks = [
        (size, n, prefix, prefix_width) for prefix in range(1 << prefix_width)
    ]
    with multiprocessing.Pool(jobs) as pool:
        parts = pool.starmap(_count_neither_range, tasks)
    total = sum(p[0] for p in parts)
    neither = sum(p[1] for p in parts)
    candidates = [p[2] for p in parts if p[2] is not None]
    return total, neither, min(candidates) if candidates else None


# ---------------------------------------------------------------------------
# Tower bound


def tower(k: int, x: int = 2):
    """t_k(x) with t_1(x) = x and t_k(x) = 2^t_{k-1}(x); None above 64 bits."""
    if k < 1:
        raise InvalidInputError("tower height must be >= 1")
    value = x
    for _ in range(k - 1):
        if value >= 64:
            return None
        value = 1 << value
    if value >= 1 << 63:
        return None
    return value


@dataclass(frozen=True)
class TowerBound:
    n: int
    constant: int
    height: int
    value: int | None

    @property
    def overflow(self) -> bool:
        return self.value is None


def tower_bound(n: int, constant: int = 1) -> TowerBound:
    """Tower-of-twos threshold bound: height is ``constant * ceil(log2 n)``."""
    if n < 2:
        raise InvalidInputError("bound is defined for n >= 2")
    height = constant * ((n - 1).bit_length())
    return TowerBound(n=n, constant=constant, height=height, value=tower(height, 2))
