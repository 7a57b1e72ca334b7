"""Finite bounded-degree graphs and their metric primitives."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from . import _kernels


class PreconditionError(ValueError):
    """An operation was called outside its documented domain."""


class GraphError(PreconditionError):
    """Invalid graph data: bad endpoint, loop, or degree overflow."""


@functools.total_ordering
class _Unreachable:
    """Distance between vertices in different components.

    Compares greater than every integer and refuses arithmetic, so a
    disconnected pair can never leak into a sum as a large number.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNREACHABLE"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("UNREACHABLE")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def _no_arith(self, *_):
        raise TypeError("arithmetic on an unreachable distance")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _no_arith
    __truediv__ = __rtruediv__ = __int__ = __float__ = _no_arith


UNREACHABLE = _Unreachable()


class Graph:
    """Immutable simple graph on vertices ``0..n-1`` stored as CSR arrays.

    ``family`` is an optional ``(name, *params)`` tag set by the generators;
    a few exact solvers use it to pick a closed-form or DP fast path.
    """

    __slots__ = ("n", "indptr", "indices", "degree_bound", "family", "__weakref__", "_cache")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray, family=None):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        deg = np.diff(self.indptr)
        self.degree_bound = int(deg.max()) if self.n else 0
        self.family = family
        self._cache = {}

    def __repr__(self):
        tag = f" {self.family}" if self.family else ""
        return f"<Graph n={self.n} m={self.num_edges} d={self.degree_bound}{tag}>"

    def __len__(self):
        return self.n

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def num_edges(self) -> int:
        return int(self.indices.shape[0] // 2)

    def neighbors(self, x: int) -> np.ndarray:
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        if "adj" not in self._cache:
            self._cache["adj"] = tuple(
                tuple(int(v) for v in self.neighbors(x)) for x in range(self.n)
            )
        return self._cache["adj"]

    def edges(self) -> list[tuple[int, int]]:
        """Edges ``(u, v)`` with ``u < v`` in lexicographic order."""
        src = np.repeat(np.arange(self.n), self.degrees)
        keep = src < self.indices
        return list(zip(src[keep].tolist(), self.indices[keep].tolist()))

    def edge_array(self) -> np.ndarray:
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def same_as(self, other: "Graph") -> bool:
        return (self.n == other.n
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def relabel(self, perm) -> "Graph":
        """Graph with vertex ``x`` renamed ``perm[x]``."""
        perm = np.asarray(perm, dtype=np.int64)
        e = perm[self.edge_array()] if self.num_edges else np.empty((0, 2), np.int64)
        return build_graph(self.n, e)


def build_graph(n: int, edges: Iterable, max_degree: int | None = None, family=None) -> Graph:
    """Build a :class:`Graph` from an edge list.

    Duplicate edges given in either orientation are merged. Loops, endpoints
    outside ``0..n-1`` and (when ``max_degree`` is set) degree overflow raise
    :class:`GraphError`.
    """
    if n < 0:
        raise GraphError("negative vertex count")
    e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    e = e.reshape(-1, 2)
    if e.size:
        if e.min() < 0 or e.max() >= n:
            raise GraphError(f"edge endpoint out of range 0..{n - 1}")
        if (e[:, 0] == e[:, 1]).any():
            bad = e[e[:, 0] == e[:, 1]][0]
            raise GraphError(f"loop at vertex {bad[0]}")
        e = np.sort(e, axis=1)
        e = np.unique(e, axis=0)
    both = np.concatenate([e, e[:, ::-1]]) if e.size else np.empty((0, 2), np.int64)
    order = np.lexsort((both[:, 1], both[:, 0]))
    both = both[order]
    counts = np.bincount(both[:, 0], minlength=n) if both.size else np.zeros(n, np.int64)
    if max_degree is not None and n and counts.max(initial=0) > max_degree:
        x = int(np.argmax(counts))
        raise GraphError(f"vertex {x} has degree {counts[x]} > bound {max_degree}")
    indptr = np.concatenate([[0], np.cumsum(counts)])
    return Graph(n, indptr, both[:, 1] if both.size else np.empty(0, np.int64), family)


class VertexSet:
    """Membership bitmap over ``0..n-1``."""

    __slots__ = ("mask",)

    def __init__(self, mask: np.ndarray):
        self.mask = np.asarray(mask, dtype=bool)

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "VertexSet":
        mask = np.zeros(n, dtype=bool)
        mask[np.fromiter(members, dtype=np.int64)] = True
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(np.ones(n, dtype=bool))

    def __len__(self):
        return int(self.mask.sum())

    def __iter__(self) -> Iterator[int]:
        return iter(np.flatnonzero(self.mask).tolist())

    def __contains__(self, x):
        return 0 <= x < self.mask.shape[0] and bool(self.mask[x])

    def __eq__(self, other):
        if isinstance(other, VertexSet):
            return np.array_equal(self.mask, other.mask)
        return set(self) == set(other)

    def __le__(self, other: "VertexSet"):
        return not (self.mask & ~other.mask).any()

    def __repr__(self):
        return f"VertexSet({sorted(self)})"

    def to_array(self) -> np.ndarray:
        return np.flatnonzero(self.mask)


@dataclass
class Ball:
    """Radius-``r`` ball: members (original ids, root first then BFS order),
    the induced subgraph on local ids ``0..len-1``, the local root id (always
    0) and the depth of each local vertex."""

    center: int
    radius: int
    members: np.ndarray
    subgraph: Graph
    depth: np.ndarray
    root: int = 0
    vertices: VertexSet = field(repr=False, default=None)


def _check_vertex(g: Graph, x: int):
    if not 0 <= x < g.n:
        raise PreconditionError(f"vertex {x} not in 0..{g.n - 1}")


def bfs_distances(g: Graph, x: int, max_depth: int = -1) -> np.ndarray:
    _check_vertex(g, x)
    return _kernels.bfs(g.indptr, g.indices, int(x), int(max_depth))


def induced_subgraph(g: Graph, members: np.ndarray) -> Graph:
    """Induced subgraph; local id ``i`` is ``members[i]``."""
    local = np.full(g.n, -1, dtype=np.int64)
    local[members] = np.arange(members.shape[0])
    e = g.edge_array()
    if e.size:
        e = local[e]
        e = e[(e >= 0).all(axis=1)]
    return build_graph(members.shape[0], e)


def ball(g: Graph, x: int, r: int) -> Ball:
    """All vertices within distance ``r`` of ``x`` with every induced edge."""
    if r < 0:
        raise PreconditionError("radius must be >= 0")
    dist = bfs_distances(g, x, r)
    reached = np.flatnonzero(dist >= 0)
    members = reached[np.lexsort((reached, dist[reached]))]
    sub = induced_subgraph(g, members)
    return Ball(int(x), int(r), members, sub, dist[members], 0, VertexSet(dist >= 0))


def distance(g: Graph, x: int, y: int):
    """Shortest-path distance, or :data:`UNREACHABLE`."""
    _check_vertex(g, y)
    d = int(bfs_distances(g, x)[y])
    return UNREACHABLE if d < 0 else d


def _as_mask(g: Graph, h) -> np.ndarray:
    if isinstance(h, VertexSet):
        return h.mask
    return VertexSet.of(g.n, h).mask


def boundary(g: Graph, h) -> VertexSet:
    """Vertices of ``h`` with at least one neighbour outside ``h``."""
    mask = _as_mask(g, h)
    src = np.repeat(np.arange(g.n), g.degrees)
    out_edge = mask[src] & ~mask[g.indices]
    return VertexSet(np.bincount(src[out_edge], minlength=g.n) > 0)


def iso_constant(g: Graph, h) -> Fraction:
    """Exact ``|boundary(h)| / |h|``."""
    mask = _as_mask(g, h)
    size = int(mask.sum())
    if size == 0:
        raise PreconditionError("isoperimetric constant of an empty set")
    return Fraction(len(boundary(g, VertexSet(mask))), size)


def eccentricities(g: Graph) -> np.ndarray:
    """Per-vertex eccentricity within its component."""
    if "ecc" not in g._cache:
        ecc = _kernels.eccentricities(g.indptr, g.indices)
        ecc.setflags(write=False)
        g._cache["ecc"] = ecc
    return g._cache["ecc"]


def diameter(g: Graph):
    """Largest finite distance if connected, else :data:`UNREACHABLE`."""
    if g.n == 0:
        return 0
    if component_count(g) > 1:
        return UNREACHABLE
    return int(max_component_diameter(g))


def max_component_diameter(g: Graph) -> int:
    if "diam" not in g._cache:
        g._cache["diam"] = int(eccentricities(g).max(initial=0))
    return g._cache["diam"]


def components(g: Graph) -> tuple[int, np.ndarray]:
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    if g.n == 0:
        return 0, np.empty(0, np.int64)
    a = csr_matrix((np.ones(g.indices.shape[0]), g.indices, g.indptr), shape=(g.n, g.n))
    k, lab = connected_components(a, directed=False)
    return int(k), lab.astype(np.int64)


def component_count(g: Graph) -> int:
    return components(g)[0]


def growth_profile(g: Graph, s_max: int) -> np.ndarray:
    """``out[x, s] = |B_s(g, x)|`` for ``0 <= s <= s_max``."""
    if s_max < 0:
        raise PreconditionError("s_max must be >= 0")
    key = ("growth", s_max)
    if key not in g._cache:
        prof = _kernels.ball_sizes(g.indptr, g.indices, np.arange(g.n, dtype=np.int64), int(s_max))
        prof.setflags(write=False)
        g._cache[key] = prof
    return g._cache[key]


def doubling_constant(g: Graph, s_max: int | None = None) -> int:
    """Least integer D with ``|B_2s(x)| <= D |B_s(x)|`` for all x, 1 <= s <= s_max.

    ``s_max`` defaults to ``ceil(diameter / 2)`` (at least 1).
    """
    if s_max is None:
        s_max = max(1, math.ceil(max_component_diameter(g) / 2))
    if s_max < 1:
        raise PreconditionError("s_max must be >= 1")
    if g.n == 0:
        return 1
    prof = growth_profile(g, 2 * s_max)
    s = np.arange(1, s_max + 1)
    small = prof[:, s]
    large = prof[:, 2 * s]
    return int(((large + small - 1) // small).max())
