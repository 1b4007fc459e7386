"""Finite length-3 lattices: validation, generation ranks, and fence extraction.

A length-3 lattice has bottom, top, and only atoms and coatoms in between.
Two atoms can never lie under the same two coatoms (their join would sit
strictly between), which is exactly why comparability graphs of non-bound
elements contain no K22 copy; chordless paths in such graphs are fences.
The extraction pipeline mirrors that argument: generate the lattice from a
finite set, rank elements by generation level, grow the tree of
one-meet-or-join-per-step sequences, and run the graph dichotomy on the
deepest branches.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    ContradictionError,
    CoverageError,
    InvalidInputError,
    ResourceLimitError,
    StructuralError,
)
from .graphs import Graph
from .ramsey import dichotomy


@dataclass(frozen=True)
class LatticeReport:
    """Outcome of candidate validation: pass, or first violated axiom."""

    ok: bool
    axiom: str | None = None
    witness: tuple | None = None


def _closure_masks(n: int, leq_pairs):
    below = [0] * n  # below[x] bitmask of {z : z <= x}, including x
    above = [0] * n
    for x, y in leq_pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise InvalidInputError("relation pair %r outside 0..%d" % ((x, y), n - 1))
        below[y] |= 1 << x
        above[x] |= 1 << y
    return below, above


def validate_order(n: int, leq_pairs):
    """Check partial-order axioms and bounds; None on pass, else a report."""
    if n < 1:
        return LatticeReport(False, "nonempty", ())
    pairs = set((int(x), int(y)) for x, y in leq_pairs)
    below, above = _closure_masks(n, pairs)
    for x in range(n):
        if not (below[x] >> x) & 1:
            return LatticeReport(False, "reflexive", (x,))
    for x, y in pairs:
        if x != y and (below[x] >> y) & 1:
            return LatticeReport(False, "antisymmetric", (x, y))
    for x in range(n):
        # transitive: anything below a z below x must be below x
        acc = 0
        zs = below[x]
        while zs:
            bit = zs & -zs
            zs ^= bit
            acc |= below[bit.bit_length() - 1]
        extra = acc & ~below[x]
        if extra:
            w = (extra & -extra).bit_length() - 1
            z = next(
                z
                for z in _bits(below[x])
                if (below[z] >> w) & 1
            )
            return LatticeReport(False, "transitive", (w, z, x))
    full = (1 << n) - 1
    if not any(above[x] == full for x in range(n)):
        return LatticeReport(False, "bottom-exists", ())
    if not any(below[x] == full for x in range(n)):
        return LatticeReport(False, "top-exists", ())
    return None


def _bits(mask: int):
    while mask:
        bit = mask & -mask
        mask ^= bit
        yield bit.bit_length() - 1


def _greatest_of(mask: int, below) -> int | None:
    """The element of ``mask`` above all others in ``mask``, if any."""
    for g in _bits(mask):
        if mask & ~below[g] == 0:
            return g
    return None


def validate_lattice(n: int, leq_pairs) -> LatticeReport:
    """Partial-order axioms, bounds, and existence of all meets and joins."""
    bad = validate_order(n, leq_pairs)
    if bad is not None:
        return bad
    below, above = _closure_masks(n, set((int(x), int(y)) for x, y in leq_pairs))
    for x in range(n):
        for y in range(x + 1, n):
            if _greatest_of(below[x] & below[y], below) is None:
                return LatticeReport(False, "meet-exists", (x, y))
            if _least_of(above[x] & above[y], above) is None:
                return LatticeReport(False, "join-exists", (x, y))
    return LatticeReport(True)


def _least_of(mask: int, above) -> int | None:
    for g in _bits(mask):
        if mask & ~above[g] == 0:
            return g
    return None


class BoundedPoset:
    """Validated partial order with bottom and top over elements 0..n-1."""

    def __init__(self, n: int, leq_pairs):
        report = validate_order(n, leq_pairs)
        if report is not None:
            raise InvalidInputError(
                "not a bounded partial order: %s %r" % (report.axiom, report.witness)
            )
        self.n = n
        self.below, self.above = _closure_masks(
            n, set((int(x), int(y)) for x, y in leq_pairs)
        )
        full = (1 << n) - 1
        self.bottom = next(x for x in range(n) if self.above[x] == full)
        self.top = next(x for x in range(n) if self.below[x] == full)

    def leq(self, x: int, y: int) -> bool:
        return (self.below[y] >> x) & 1 == 1

    def comparable(self, x: int, y: int) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def is_bound(self, x: int) -> bool:
        return x == self.bottom or x == self.top

    def atoms(self):
        """Non-bound elements with nothing strictly between them and bottom."""
        out = []
        for x in range(self.n):
            if self.is_bound(x):
                continue
            if self.below[x] == (1 << x) | (1 << self.bottom):
                out.append(x)
        return out

    def coatoms(self):
        out = []
        for x in range(self.n):
            if self.is_bound(x):
                continue
            if self.above[x] == (1 << x) | (1 << self.top):
                out.append(x)
        return out

    def covers(self):
        """Cover pairs (x, y): x < y with nothing strictly between."""
        out = []
        for y in range(self.n):
            strict = self.below[y] & ~(1 << y)
            for x in _bits(strict):
                between = strict & self.above[x] & ~(1 << x)
                if between == 0:
                    out.append((x, y))
        return sorted(out)

    def leq_pairs(self):
        return sorted(
            (x, y) for y in range(self.n) for x in _bits(self.below[y])
        )


class FiniteLattice(BoundedPoset):
    """Bounded poset whose meets and joins all exist; tables are computed."""

    def __init__(self, n: int, leq_pairs):
        super().__init__(n, leq_pairs)
        meet = [[0] * n for _ in range(n)]
        join = [[0] * n for _ in range(n)]
        for x in range(n):
            for y in range(x, n):
                m = _greatest_of(self.below[x] & self.below[y], self.below)
                j = _least_of(self.above[x] & self.above[y], self.above)
                if m is None or j is None:
                    pair = (x, y)
                    raise InvalidInputError(
                        "not a lattice: pair %r lacks a %s"
                        % (pair, "meet" if m is None else "join")
                    )
                meet[x][y] = meet[y][x] = m
                join[x][y] = join[y][x] = j
        self._meet = meet
        self._join = join

    def meet(self, x: int, y: int) -> int:
        return self._meet[x][y]

    def join(self, x: int, y: int) -> int:
        return self._join[x][y]


def check_length3(lat: FiniteLattice) -> bool:
    """True iff every non-bound element is an atom or a coatom."""
    atoms = set(lat.atoms())
    coatoms = set(lat.coatoms())
    return all(
        x in atoms or x in coatoms
        for x in range(lat.n)
        if not lat.is_bound(x)
    )


def check_no_double_cover(poset: BoundedPoset):
    """A pair of atoms under a pair of coatoms, or None.

    No genuine length-3 lattice has one; a witness means the input violates
    the lattice axioms somewhere.
    """
    atoms = poset.atoms()
    coatoms = poset.coatoms()
    atom_mask_below = {}
    for u in coatoms:
        mask = 0
        for x in atoms:
            if poset.leq(x, u):
                mask |= 1 << x
        atom_mask_below[u] = mask
    for u, v in itertools.combinations(coatoms, 2):
        common = atom_mask_below[u] & atom_mask_below[v]
        if common and common & (common - 1):
            x = (common & -common).bit_length() - 1
            y = ((common & (common - 1)) & -(common & (common - 1))).bit_length() - 1
            return (x, y, u, v)
    return None


# ---------------------------------------------------------------------------
# Generation closure, ranks, and the derivation tree


@dataclass(frozen=True)
class RankTable:
    generators: tuple
    rank: tuple  # rank[x] for every element
    levels: tuple  # levels[k] = bitmask of elements generated within k steps
    rank_bound: dict  # rank -> largest element code of that rank

    @property
    def max_rank(self) -> int:
        return max(self.rank)

    def elements_of_rank(self, r: int):
        return tuple(x for x in range(len(self.rank)) if self.rank[x] == r)


def closure_and_rank(lat: FiniteLattice, generators) -> RankTable:
    """Iterate meets and joins from the generators until a fixpoint.

    Elements are ranked by the first level that contains them; reaching a
    fixpoint short of the whole lattice is a coverage error naming the
    unreached elements.
    """
    gens = sorted(set(int(g) for g in generators))
    if not gens:
        raise InvalidInputError("generator set must be nonempty")
    if any(g < 0 or g >= lat.n for g in gens):
        raise InvalidInputError("generators outside the lattice: %r" % (gens,))
    current = 0
    for g in gens:
        current |= 1 << g
    levels = [current]
    rank = {g: 0 for g in gens}
    while True:
        new = current
        members = list(_bits(current))
        for x, y in itertools.combinations_with_replacement(members, 2):
            new |= 1 << lat.meet(x, y)
            new |= 1 << lat.join(x, y)
        if new == current:
            break
        for x in _bits(new & ~current):
            rank[x] = len(levels)
        levels.append(new)
        current = new
    if current != (1 << lat.n) - 1:
        unreached = [x for x in range(lat.n) if not (current >> x) & 1]
        raise CoverageError(
            "generators do not generate the lattice; unreached: %r" % (unreached,),
            unreached=unreached,
        )
    ranks = tuple(rank[x] for x in range(lat.n))
    bound = {}
    for x in range(lat.n):
        r = ranks[x]
        bound[r] = max(bound.get(r, 0), x)
    return RankTable(
        generators=tuple(gens), rank=ranks, levels=tuple(levels), rank_bound=bound
    )


@dataclass(frozen=True)
class GenTree:
    """Derivation tree: level i holds sequences ending in a rank-i element."""

    levels: tuple  # levels[i] = tuple of node tuples, length i+1 each

    def nodes(self):
        for level in self.levels:
            yield from level

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def deepest_branches(self):
        for level in reversed(self.levels):
            if level:
                return level
        return ()

    def branches_by_depth(self):
        """All nodes, deepest level first, lexicographic within a level."""
        for level in reversed(self.levels):
            yield from level


MAX_TREE_NODES = 200_000


def build_tree(lat: FiniteLattice, ranks: RankTable, depth: int) -> GenTree:
    """All derivation sequences down to ``depth``; structural checks included.

    A node extends a shorter one by one element of the next rank obtained as
    a meet or join with something of strictly lower rank.  Nodes never touch
    bottom or top.  Checked per node: entries distinct, consecutive entries
    comparable, atom/coatom alternation, and the per-position element bound.
    Every non-bound element of rank <= depth must be reachable as some node's
    last entry; a miss is a structural error in the rank table.
    """
    if depth < 0:
        raise InvalidInputError("depth must be >= 0")
    atoms = set(lat.atoms())
    coatoms = set(lat.coatoms())
    roots = tuple(
        (x,) for x in sorted(ranks.elements_of_rank(0)) if not lat.is_bound(x)
    )
    levels = [roots]
    total = len(roots)
    for i in range(1, depth + 1):
        targets = [
            x for x in ranks.elements_of_rank(i) if not lat.is_bound(x)
        ]
        lower = [a for a in range(lat.n) if ranks.rank[a] < i]
        producers = {x: set() for x in targets}
        for x in targets:
            for a in lower:
                for e in range(lat.n):
                    if lat.meet(e, a) == x or lat.join(e, a) == x:
                        producers[x].add(e)
        nodes = []
        for node in levels[i - 1]:
            tail = node[-1]
            for x in targets:
                if tail in producers[x]:
                    nodes.append(node + (x,))
        total += len(nodes)
        if total > MAX_TREE_NODES:
            raise ResourceLimitError(
                "derivation tree exceeds %d nodes" % MAX_TREE_NODES
            )
        levels.append(tuple(sorted(nodes)))
    tree = GenTree(levels=tuple(levels))
    _assert_tree_properties(lat, ranks, tree, atoms, coatoms, depth)
    return tree


def _assert_tree_properties(lat, ranks, tree, atoms, coatoms, depth):
    for node in tree.nodes():
        if len(set(node)) != len(node):
            raise StructuralError("tree node has repeated entries: %r" % (node,))
        for a, b in zip(node, node[1:]):
            if not lat.comparable(a, b):
                raise StructuralError(
                    "consecutive tree entries incomparable: %r in %r" % ((a, b), node)
                )
            if not (
                (a in atoms and b in coatoms) or (a in coatoms and b in atoms)
            ):
                raise StructuralError(
                    "tree entries do not alternate atom/coatom: %r" % (node,)
                )
        for i, x in enumerate(node):
            if x > ranks.rank_bound[i]:
                raise StructuralError(
                    "node entry %d exceeds the rank-%d bound %d"
                    % (x, i, ranks.rank_bound[i])
                )
    # reachability: every non-bound element of rank <= depth ends some node
    reached = set()
    for node in tree.nodes():
        reached.add(node[-1])
    for x in range(lat.n):
        if lat.is_bound(x) or ranks.rank[x] > depth:
            continue
        if x not in reached:
            raise StructuralError(
                "element %d (rank %d) is not reachable in the tree"
                % (x, ranks.rank[x])
            )


def comparability_graph(lat: FiniteLattice, elems) -> Graph:
    """Graph on the given elements with edges exactly at comparabilities."""
    elems = tuple(int(e) for e in elems)
    if len(set(elems)) != len(elems):
        raise InvalidInputError("elements must be distinct")
    for e in elems:
        if lat.is_bound(e):
            raise InvalidInputError("element %d is a lattice bound" % e)
    edges = [
        (a, b) for a, b in itertools.combinations(elems, 2) if lat.comparable(a, b)
    ]
    return Graph(elems, edges)


# ---------------------------------------------------------------------------
# Fences


@dataclass(frozen=True)
class Fence:
    """Alternating sequence x0 < x1 > x2 < x3 ... with no other comparabilities."""

    seq: tuple

    @property
    def length(self) -> int:
        return len(self.seq) - 1


def validate_fence(lat: FiniteLattice, seq) -> bool:
    seq = tuple(seq)
    n = len(seq) - 1
    if n < 1 or n % 2 == 0:
        return False
    if len(set(seq)) != len(seq):
        return False
    for i in range(len(seq) - 1):
        lo, hi = (seq[i], seq[i + 1]) if i % 2 == 0 else (seq[i + 1], seq[i])
        if not (lat.leq(lo, hi) and lo != hi):
            return False
    for i, j in itertools.combinations(range(len(seq)), 2):
        if j - i >= 2 and lat.comparable(seq[i], seq[j]):
            return False
    return True


def find_fences(lat: FiniteLattice, generators, target_n: int):
    """Extract a fence with ``target_n + 1`` elements through the tree pipeline.

    Builds the derivation tree to its full depth, then runs the graph
    dichotomy on the comparability graph of each sufficiently long branch,
    deepest first.  A K22 outcome is impossible for a genuine length-3
    lattice and raises; a chordless path, oriented to start at an atom, is
    the fence.  Returns None when no branch is long enough or no branch
    yields a chordless path of the target size.
    """
    if target_n < 1 or target_n % 2 == 0:
        raise InvalidInputError("fence length must be odd and >= 1")
    ranks = closure_and_rank(lat, generators)
    tree = build_tree(lat, ranks, ranks.max_rank)
    atoms = set(lat.atoms())
    want = target_n + 1
    for branch in tree.branches_by_depth():
        if len(branch) < want:
            break  # branches are visited deepest first
        g = comparability_graph(lat, branch)
        witness = dichotomy(g, want)
        if witness.kind == "k22":
            raise ContradictionError(
                "K22 copy inside a validated length-3 lattice: %r"
                % (witness.embedding,)
            )
        if witness.kind != "chordless_path":
            continue
        seq = witness.path
        if seq[0] not in atoms:
            seq = tuple(reversed(seq))
        if not validate_fence(lat, seq):
            raise StructuralError("pipeline produced a non-fence: %r" % (seq,))
        return Fence(seq=seq)
    return None


def pipeline_capacity(lat: FiniteLattice, generators) -> int:
    """Largest odd fence length the tree can structurally support.

    The deepest branch has ``depth + 1`` entries; a fence with ``t + 1``
    elements needs a branch at least that long.
    """
    ranks = closure_and_rank(lat, generators)
    tree = build_tree(lat, ranks, ranks.max_rank)
    deepest = tree.deepest_branches()
    if not deepest:
        return 0
    best = len(deepest[0]) - 1
    return best if best % 2 == 1 else best - 1


# ---------------------------------------------------------------------------
# Stock families


def fence_lattice(fence_n: int):
    """Fence x0 .. x_{fence_n} with bounds; returns (lattice, generators).

    Element codes: 0 is bottom, fence element x_i is i + 1, top is last.
    Canonical generators: both fence ends plus every odd-position element
    (interior even positions arrive as meets of their neighbours).  All
    generation ranks in this family are 0 or 1: interior elements are only
    derivable from both their fence neighbours, so no generating set makes
    the derivation tree deep.
    """
    if fence_n < 1 or fence_n % 2 == 0:
        raise InvalidInputError("fence length must be odd and >= 1")
    m = fence_n + 1  # number of fence elements
    n = m + 2
    bottom, top = 0, n - 1
    elem = lambda i: i + 1
    pairs = set()
    for x in range(n):
        pairs.add((x, x))
        pairs.add((bottom, x))
        pairs.add((x, top))
    for i in range(0, m, 2):
        if i > 0:
            pairs.add((elem(i), elem(i - 1)))
        if i + 1 < m:
            pairs.add((elem(i), elem(i + 1)))
    lat = FiniteLattice(n, pairs)
    gens = {elem(0), elem(fence_n)}
    gens.update(elem(i) for i in range(1, m, 2))
    if fence_n == 1:
        gens.update((bottom, top))  # a 4-chain: bounds are underivable
    return lat, tuple(sorted(gens))


def fence_elements(fence_n: int):
    """Element codes of the fence inside :func:`fence_lattice`."""
    return tuple(range(1, fence_n + 2))


def spurred_fence_lattice(fence_n: int):
    """A fence with one pendant generator per interior element, plus bounds.

    Each interior fence element gains a private neighbour on the other side
    (a pendant coatom over every interior atom, a pendant atom under every
    interior coatom).  With generators {x0, x1} plus the pendants, rank grows
    by one along the fence, so the derivation tree contains the whole fence
    as a branch; this is the family where the extraction pipeline reaches
    arbitrarily long fences.  Returns (lattice, generators, fence_codes).
    """
    if fence_n < 3 or fence_n % 2 == 0:
        raise InvalidInputError("fence length must be odd and >= 3")
    m = fence_n + 1
    pend_evens = list(range(2, fence_n, 2))  # interior atoms: pendant coatom above
    pend_odds = list(range(3, fence_n + 1, 2))  # non-first coatoms: pendant atom below
    n = m + len(pend_evens) + len(pend_odds) + 2
    bottom, top = 0, n - 1
    elem = lambda i: i + 1
    pend = {}
    code = m + 1
    for i in pend_evens + pend_odds:
        pend[i] = code
        code += 1
    pairs = set()
    for x in range(n):
        pairs.add((x, x))
        pairs.add((bottom, x))
        pairs.add((x, top))
    for i in range(0, m, 2):
        if i > 0:
            pairs.add((elem(i), elem(i - 1)))
        if i + 1 < m:
            pairs.add((elem(i), elem(i + 1)))
    for i in pend_evens:
        pairs.add((elem(i), pend[i]))  # x_i below its pendant coatom
    for i in pend_odds:
        pairs.add((pend[i], elem(i)))  # pendant atom below x_i
    lat = FiniteLattice(n, pairs)
    gens = [elem(0), elem(1)] + [pend[i] for i in pend_evens + pend_odds]
    return lat, tuple(sorted(gens)), tuple(elem(i) for i in range(m))
