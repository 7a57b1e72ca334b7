"""Text formats for graphs and family strings."""

from __future__ import annotations

import os

from .generators import generate
from .graph import Graph, GraphError, build_graph


def graph_text(g: Graph) -> str:
    """``n d`` header then one ``u v`` line per edge, ``u < v``, sorted."""
    return f"{g.n} {g.degree_bound}\n" + "".join(f"{u} {v}\n" for u, v in g.edges())


def parse_graph(text: str) -> Graph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or len(lines[0]) != 2:
        raise GraphError("graph file must start with 'n d'")
    n, d = map(int, lines[0])
    try:
        edges = [(int(u), int(v)) for u, v in lines[1:]]
    except ValueError as exc:
        raise GraphError("edge lines must be 'u v'") from exc
    return build_graph(n, edges, max_degree=d)


def read_graph(path: str) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def load_graph(source: str, seed: int | None = None) -> Graph:
    """A graph file path, or a family string like ``torus:32`` / ``random-regular:4,128``."""
    if os.path.exists(source):
        return read_graph(source)
    name, _, params = source.partition(":")
    try:
        args = [int(p) for p in params.split(",") if p]
    except ValueError as exc:
        raise GraphError(f"bad graph source {source!r}") from exc
    return generate(name, *args, seed=seed)


def write_text(path: str, text: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
