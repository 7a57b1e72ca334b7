"""Deterministic graph families used by the experiments."""

from __future__ import annotations

import numpy as np

from .graph import Graph, GraphError, build_graph


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    v = np.arange(n)
    return build_graph(n, np.column_stack([v, (v + 1) % n]), family=("cycle", n))


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    v = np.arange(n - 1)
    return build_graph(n, np.column_stack([v, v + 1]), family=("path", n))


def complete(n: int) -> Graph:
    u, v = np.triu_indices(n, 1)
    return build_graph(n, np.column_stack([u, v]), family=("complete", n))


def edgeless(n: int) -> Graph:
    return build_graph(n, [], family=("edgeless", n))


def grid(rows: int, cols: int | None = None) -> Graph:
    """``rows x cols`` grid; vertex ``r * cols + c``."""
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1:
        raise GraphError("grid needs positive sides")
    idx = np.arange(rows * cols).reshape(rows, cols)
    horiz = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vert = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return build_graph(rows * cols, np.concatenate([horiz, vert]), family=("grid", rows, cols))


def torus(n: int) -> Graph:
    """``n x n`` discrete torus (4-regular for n >= 3)."""
    if n < 3:
        raise GraphError("torus needs n >= 3")
    idx = np.arange(n * n).reshape(n, n)
    horiz = np.column_stack([idx.ravel(), np.roll(idx, -1, axis=1).ravel()])
    vert = np.column_stack([idx.ravel(), np.roll(idx, -1, axis=0).ravel()])
    return build_graph(n * n, np.concatenate([horiz, vert]), family=("torus", n))


def tree_ball(degree: int, depth: int) -> Graph:
    """Radius-``depth`` ball of the ``degree``-regular tree, BFS-numbered from
    the root 0 (root has ``degree`` children, others ``degree - 1``)."""
    if degree < 1 or depth < 0:
        raise GraphError("tree_ball needs degree >= 1 and depth >= 0")
    edges = []
    level = [0]
    nxt = 1
    for k in range(depth):
        fan = degree if k == 0 else degree - 1
        new_level = []
        for parent in level:
            for _ in range(fan):
                edges.append((parent, nxt))
                new_level.append(nxt)
                nxt += 1
        level = new_level
    return build_graph(nxt, edges, family=("tree_ball", degree, depth))


def random_regular(d: int, n: int, seed: int = 0, max_tries: int = 100_000) -> Graph:
    """Uniform simple ``d``-regular graph on ``n`` vertices (pairing model
    with rejection), a deterministic function of ``(d, n, seed)``."""
    if n * d % 2:
        raise GraphError(f"no {d}-regular graph on {n} vertices: n*d is odd")
    if d >= n or d < 0:
        raise GraphError(f"no {d}-regular graph on {n} vertices: need 0 <= d < n")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), d)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if (pairs[:, 0] == pairs[:, 1]).any():
            continue
        pairs.sort(axis=1)
        if np.unique(pairs, axis=0).shape[0] != pairs.shape[0]:
            continue
        return build_graph(n, pairs, family=("random_regular", d, n, seed))
    raise GraphError("pairing model did not produce a simple graph")  # pragma: no cover


def disjoint_union(*graphs: Graph) -> Graph:
    parts = []
    offset = 0
    for g in graphs:
        if g.num_edges:
            parts.append(g.edge_array() + offset)
        offset += g.n
    e = np.concatenate(parts) if parts else np.empty((0, 2), np.int64)
    return build_graph(offset, e)


FAMILIES = {
    "cycle": cycle,
    "path": path,
    "complete": complete,
    "edgeless": edgeless,
    "grid": grid,
    "torus": torus,
    "tree-ball": tree_ball,
    "random-regular": random_regular,
}


def generate(family: str, *params: int, seed: int | None = None) -> Graph:
    """Build a graph from a family name and integer parameters.

    ``seed`` is only consulted by ``random-regular``; other families ignore
    it, so the output depends on ``(family, params, seed)`` alone.
    """
    name = family.replace("_", "-")
    if name not in FAMILIES:
        raise GraphError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}")
    try:
        if name == "random-regular":
            return random_regular(*params, seed=0 if seed is None else seed)
        return FAMILIES[name](*params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {name}: {params}") from exc
