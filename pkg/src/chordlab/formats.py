"""JSON and DOT input/output with deterministic, round-trippable encodings."""

from __future__ import annotations

import json

from .errors import InvalidInputError
from .graphs import Graph
from .lattices import BoundedPoset, FiniteLattice


def graph_to_json_obj(g: Graph) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [[u, v] for u, v in g.edges()],
    }


def graph_to_json(g: Graph) -> str:
    return json.dumps(graph_to_json_obj(g), sort_keys=True, indent=2) + "\n"


def graph_from_json_obj(obj) -> Graph:
    if not isinstance(obj, dict) or "vertices" not in obj or "edges" not in obj:
        raise InvalidInputError("graph JSON needs 'vertices' and 'edges'")
    vertices = obj["vertices"]
    if vertices != sorted(set(int(v) for v in vertices)):
        raise InvalidInputError("graph JSON vertices must be ascending, no duplicates")
    edges = []
    seen = set()
    for pair in obj["edges"]:
        if len(pair) != 2:
            raise InvalidInputError("graph JSON edge must be a pair: %r" % (pair,))
        u, v = int(pair[0]), int(pair[1])
        if not u < v:
            raise InvalidInputError("graph JSON edges must satisfy u < v: %r" % (pair,))
        if (u, v) in seen:
            raise InvalidInputError("duplicate edge %r" % (pair,))
        seen.add((u, v))
        edges.append((u, v))
    return Graph(vertices, edges)


def graph_from_json(text: str) -> Graph:
    return graph_from_json_obj(json.loads(text))


def load_graph(path) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return graph_from_json(fh.read())


def save_graph(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(graph_to_json(g))


def graph_to_dot(g: Graph, name: str = "G") -> str:
    lines = ["graph %s {" % name]
    for v in sorted(g.vertices):
        lines.append("  %d;" % v)
    for u, v in g.edges():
        lines.append("  %d -- %d;" % (u, v))
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json_obj(n: int, leq_pairs, generators=None) -> dict:
    obj = {"n": n, "leq": [[x, y] for x, y in sorted(leq_pairs)]}
    if generators is not None:
        obj["generators"] = sorted(generators)
    return obj


def lattice_to_json(n, leq_pairs, generators=None) -> str:
    return (
        json.dumps(lattice_to_json_obj(n, leq_pairs, generators), sort_keys=True, indent=2)
        + "\n"
    )


def lattice_from_json_obj(obj):
    """Raw (n, leq pairs, generators) from the JSON object; no validation yet.

    The relation must list every holding pair, reflexive ones included;
    validation (and rejection of non-transitive input) happens when the
    candidate is checked or instantiated.
    """
    if not isinstance(obj, dict) or "n" not in obj or "leq" not in obj:
        raise InvalidInputError("lattice JSON needs 'n' and 'leq'")
    n = int(obj["n"])
    pairs = []
    for pair in obj["leq"]:
        if len(pair) != 2:
            raise InvalidInputError("lattice JSON leq entry must be a pair: %r" % (pair,))
        pairs.append((int(pair[0]), int(pair[1])))
    gens = obj.get("generators")
    if gens is not None:
        gens = tuple(int(g) for g in gens)
    return n, pairs, gens


def load_lattice_candidate(path):
    with open(path, "r", encoding="utf-8") as fh:
        return lattice_from_json_obj(json.load(fh))


def save_lattice(path, n, leq_pairs, generators=None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(lattice_to_json(n, leq_pairs, generators))


def lattice_to_dot(poset: BoundedPoset | FiniteLattice, name: str = "L") -> str:
    """Hasse diagram: cover edges only, drawn bottom-up."""
    lines = ["digraph %s {" % name, "  rankdir=BT;", "  node [shape=circle];"]
    for v in range(poset.n):
        lines.append("  %d;" % v)
    for x, y in poset.covers():
        lines.append("  %d -> %d;" % (x, y))
    lines.append("}")
    return "\n".join(lines) + "\n"
