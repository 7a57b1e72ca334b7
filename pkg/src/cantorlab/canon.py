"""Canonical forms of rooted, optionally labeled balls.

Two code paths produce the byte code:

* trees (the ball has ``n - 1`` edges) use the rooted AHU encoding;
* everything else uses colour refinement seeded with ``(depth, label)``
  followed by individualisation-refinement search. Leaves of the search
  tree are discrete colourings; the code is the lexicographically least
  edge encoding over all leaves. Automorphisms found when two leaves
  coincide prune sibling branches in the same orbit.

Both paths also return a canonical vertex order, so callers can evaluate a
rule on the canonical representative of a ball rather than on the ball as
presented.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graph import Graph, PreconditionError, ball as _ball, build_graph

DEFAULT_MAX_VERTICES = 200
DEFAULT_MAX_LEAVES = 200_000


class CanonError(PreconditionError):
    """Ball too large (or too symmetric) for exact canonicalisation."""


def label_text(value) -> str:
    if isinstance(value, (bytes, bytearray)):
        return bytes(value).hex()
    if isinstance(value, CanonicalCode):
        return value.hex()
    return str(value)


@dataclass(frozen=True)
class RootedBall:
    """A connected graph fragment with a root and a radius.

    ``labels`` is ``None`` or one label per local vertex; labels are compared
    through :func:`label_text`.
    """

    graph: Graph
    root: int
    radius: int
    labels: tuple | None = None

    @classmethod
    def around(cls, g: Graph, x: int, k: int, labels: Sequence | None = None) -> "RootedBall":
        """The radius-``k`` ball of ``g`` at ``x``; ``labels`` indexes ``g``'s vertices."""
        b = _ball(g, x, k)
        lab = None if labels is None else tuple(labels[int(v)] for v in b.members)
        return cls(b.subgraph, 0, k, lab)

    @property
    def n(self) -> int:
        return self.graph.n

    def relabeled(self, order: np.ndarray) -> "RootedBall":
        """Same ball with local vertex ``order[i]`` renamed ``i``."""
        pos = np.empty_like(order)
        pos[order] = np.arange(order.shape[0])
        lab = None if self.labels is None else tuple(self.labels[int(v)] for v in order)
        return RootedBall(self.graph.relabel(pos), int(pos[self.root]), self.radius, lab)


@dataclass(frozen=True, order=True)
class CanonicalCode:
    data: bytes
    radius: int
    labeled: bool

    def hex(self) -> str:
        return self.data.hex()

    def to_bytes(self) -> bytes:
        """Length-prefixed serialisation (4-byte big-endian length)."""
        return struct.pack(">I", len(self.data)) + self.data

    @classmethod
    def from_bytes(cls, blob: bytes) -> tuple["CanonicalCode", bytes]:
        """Parse one serialised code; returns it and the unread remainder."""
        (size,) = struct.unpack(">I", blob[:4])
        data = blob[4:4 + size]
        if len(data) != size:
            raise ValueError("truncated canonical code")
        return cls.from_data(data), blob[4 + size:]

    @classmethod
    def from_data(cls, data: bytes) -> "CanonicalCode":
        _, flags, radius, _ = struct.unpack(">3sBII", data[:12])
        return cls(data, radius, bool(flags & 1))

    @classmethod
    def from_hex(cls, text: str) -> "CanonicalCode":
        return cls.from_data(bytes.fromhex(text))


def _depths(g: Graph, root: int) -> np.ndarray:
    from .graph import bfs_distances

    d = bfs_distances(g, root)
    if (d < 0).any():
        raise PreconditionError("ball fragment is not connected")
    return d


def _header(kind: int, labeled: bool, radius: int, n: int) -> bytes:
    return struct.pack(">3sBII", b"CB" + bytes([kind]), int(labeled), radius, n)


def _label_block(texts: list[str]) -> bytes:
    out = bytearray()
    for t in texts:
        raw = t.encode()
        out += struct.pack(">H", len(raw)) + raw
    return bytes(out)


# -- trees ------------------------------------------------------------------

def _tree_form(g: Graph, root: int, depth: np.ndarray, texts):
    n = g.n
    adj = g.adjacency
    codes: list[bytes | None] = [None] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for v in np.argsort(-depth, kind="stable").tolist():
        kids = [u for u in adj[v] if depth[u] == depth[v] + 1]
        kids.sort(key=lambda u: codes[u])
        children[v] = kids
        lab = texts[v].encode() if texts is not None else b""
        codes[v] = b"(" + lab + b":" + b"".join(codes[u] for u in kids) + b")"
    order = [root]
    i = 0
    while i < len(order):
        order.extend(children[order[i]])
        i += 1
    return codes[root], np.asarray(order, dtype=np.int64)


# -- general graphs -----------------------------------------------------------

def _rank_rows(rows: np.ndarray) -> np.ndarray:
    """Dense lexicographic rank of each row."""
    order = np.lexsort(rows.T[::-1])
    srt = rows[order]
    step = np.concatenate([[0], (srt[1:] != srt[:-1]).any(axis=1).astype(np.int64)])
    ranks = np.empty(rows.shape[0], dtype=np.int64)
    ranks[order] = np.cumsum(step)
    return ranks


class _Search:
    def __init__(self, g: Graph, colors: np.ndarray, max_leaves: int):
        self.n = g.n
        dmax = max(g.degree_bound, 1)
        nbr = np.full((g.n, dmax), g.n, dtype=np.int64)
        deg = g.degrees
        rows = np.repeat(np.arange(g.n), deg)
        cols = np.arange(g.indices.shape[0]) - np.repeat(g.indptr[:-1], deg)
        nbr[rows, cols] = g.indices
        self.nbr = nbr
        self.edges = g.edge_array()
        self.width = ">u2" if g.n < 65536 else ">u4"
        self.max_leaves = max_leaves
        self.leaves = 0
        self.best = None
        self.best_pos = None
        self.first = None
        self.first_pos = None
        self.autos: list[np.ndarray] = []
        self.start = colors

    def refine(self, colors):
        k = int(colors.max()) + 1
        while True:
            ext = np.append(colors, -1)
            sig = np.column_stack([colors, np.sort(ext[self.nbr], axis=1)])
            new = _rank_rows(sig)
            k_new = int(new.max()) + 1
            if k_new == k:
                return new
            colors, k = new, k_new

    def cert(self, pos):
        if self.edges.shape[0] == 0:
            return b""
        e = np.sort(pos[self.edges], axis=1)
        e = e[np.lexsort((e[:, 1], e[:, 0]))]
        return e.astype(self.width).tobytes()

    def leaf(self, pos):
        self.leaves += 1
        if self.leaves > self.max_leaves:
            raise CanonError(f"canonical search exceeded {self.max_leaves} leaves")
        c = self.cert(pos)
        if self.best is None:
            self.best = self.first = c
            self.best_pos = self.first_pos = pos
            return
        for ref, ref_pos in ((self.first, self.first_pos), (self.best, self.best_pos)):
            if c == ref:
                inv = np.empty_like(pos)
                inv[pos] = np.arange(self.n)
                self.autos.append(inv[ref_pos])
                return
        if c < self.best:
            self.best, self.best_pos = c, pos

    def same_orbit(self, v, done, path):
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for gamma in self.autos:
            if path and (gamma[path] != path).any():
                continue
            moved = np.flatnonzero(gamma != np.arange(self.n))
            for a in moved.tolist():
                ra, rb = find(a), find(int(gamma[a]))
                if ra != rb:
                    parent[ra] = rb
        rv = find(v)
        return any(find(u) == rv for u in done)

    def visit(self, colors, path):
        colors = self.refine(colors)
        counts = np.bincount(colors)
        if counts.shape[0] == self.n:
            self.leaf(colors)
            return
        target = int(np.argmax(counts > 1))
        cell = np.flatnonzero(colors == target).tolist()
        done = []
        for v in cell:
            if done and self.autos and self.same_orbit(v, done, path):
                continue
            nxt = 2 * colors + 1
            nxt[v] = 2 * colors[v]
            _, nxt = np.unique(nxt, return_inverse=True)
            self.visit(nxt.astype(np.int64).ravel(), path + [v])
            done.append(v)

    def run(self):
        self.visit(self.start, [])
        return self.best, self.best_pos


def canonical_form(b: RootedBall, max_vertices: int | None = DEFAULT_MAX_VERTICES,
                   max_leaves: int = DEFAULT_MAX_LEAVES) -> tuple[CanonicalCode, np.ndarray]:
    """Canonical code of ``b`` and a canonical vertex order.

    ``order[i]`` is the local vertex placed at canonical position ``i``; the
    root is always at position 0.
    """
    g = b.graph
    if max_vertices is not None and g.n > max_vertices:
        raise CanonError(f"ball has {g.n} vertices, above the cap of {max_vertices}")
    labeled = b.labels is not None
    texts = [label_text(v) for v in b.labels] if labeled else None
    if labeled and len(texts) != g.n:
        raise PreconditionError("need one label per ball vertex")
    depth = _depths(g, b.root)
    if int(depth.max(initial=0)) > b.radius:
        raise PreconditionError("fragment reaches beyond its radius")

    if g.num_edges == g.n - 1:
        body, order = _tree_form(g, b.root, depth, texts)
        data = _header(ord("T"), labeled, b.radius, g.n) + body
        return CanonicalCode(data, b.radius, labeled), order

    if labeled:
        _, lab_rank = np.unique(np.array(texts), return_inverse=True)
        lab_rank = lab_rank.astype(np.int64).ravel()
    else:
        lab_rank = np.zeros(g.n, dtype=np.int64)
    start = _rank_rows(np.column_stack([depth, lab_rank]))
    cert, pos = _Search(g, start, max_leaves).run()
    order = np.empty_like(pos)
    order[pos] = np.arange(g.n)
    data = _header(ord("G"), labeled, b.radius, g.n)
    if labeled:
        data += _label_block([texts[v] for v in order.tolist()])
    data += cert
    return CanonicalCode(data, b.radius, labeled), order


def canonicalize(b: RootedBall, max_vertices: int | None = DEFAULT_MAX_VERTICES) -> CanonicalCode:
    return canonical_form(b, max_vertices)[0]


def canonical_ball(b: RootedBall, max_vertices: int | None = DEFAULT_MAX_VERTICES
                   ) -> tuple[CanonicalCode, RootedBall]:
    """Code plus the canonical representative (root at local id 0)."""
    code, order = canonical_form(b, max_vertices)
    return code, b.relabeled(order)


def brute_force_isomorphic(a: RootedBall, b: RootedBall) -> bool:
    """Rooted(-labeled) isomorphism by trying every bijection.

    Independent of :func:`canonical_form`; exponential, meant for tests on
    balls of a dozen vertices or fewer.
    """
    from itertools import permutations

    if a.n != b.n or a.graph.num_edges != b.graph.num_edges:
        return False
    if (a.labels is None) != (b.labels is None):
        return False
    ea = set(a.graph.edges())
    eb = set(b.graph.edges())
    la = None if a.labels is None else [label_text(v) for v in a.labels]
    lb = None if b.labels is None else [label_text(v) for v in b.labels]
    rest_a = [v for v in range(a.n) if v != a.root]
    rest_b = [v for v in range(b.n) if v != b.root]
    for image in permutations(rest_b):
        f = dict(zip(rest_a, image))
        f[a.root] = b.root
        if la is not None and any(la[v] != lb[f[v]] for v in range(a.n)):
            continue
        if all((min(f[u], f[v]), max(f[u], f[v])) in eb for u, v in ea):
            return True
    return False


def ball_fragment(n: int, edges, root: int = 0, radius: int | None = None,
                  labels: Sequence | None = None) -> RootedBall:
    """Convenience constructor; ``radius`` defaults to the root eccentricity."""
    g = build_graph(n, edges)
    if radius is None:
        radius = int(_depths(g, root).max(initial=0))
    return RootedBall(g, root, radius, None if labels is None else tuple(labels))
