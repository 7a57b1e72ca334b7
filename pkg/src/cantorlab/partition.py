"""Bounded-diameter partitions with small boundary, and what they buy.

The partition rule at scale ``R`` (tile diameter ``K = 4R``):

1. centres: greedy maximal set in which centres are more than ``2R`` apart,
   scanning vertices by ascending label key;
2. each centre ``c`` keeps the radius ``r`` in ``[R, 2R-1]`` minimising
   ``|B_{r+1}(c) - B_r(c)| / |B_r(c)|`` (smallest ``r`` on ties);
3. a vertex joins, among centres whose kept ball covers it, the nearest
   (then smallest key); uncovered vertices use the same order over all
   centres within ``2R``.

Labels distinct within ``4R`` make step 1 a local rule and every tie-break
in step 3 unambiguous.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .canon import RootedBall, canonicalize
from .graph import (
    Graph,
    PreconditionError,
    build_graph,
    component_count,
    components,
    max_component_diameter,
)
from .labeling import Labeling, require_distinct
from .local import Oracle, QLabeling, Verifier, independence_verifier, run_verifier


def _frac(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


# -- partitions -----------------------------------------------------------------

class Partition:
    """Tile id per vertex with per-tile diameter and isoperimetric constant.

    Tile ids are renumbered ``0..T-1`` in order of first appearance.
    """

    def __init__(self, g: Graph, tile):
        tile = np.asarray(tile, dtype=np.int64)
        if tile.shape != (g.n,) or (g.n and tile.min() < 0):
            raise PreconditionError("tile array must assign every vertex")
        _, first, inv = np.unique(tile, return_index=True, return_inverse=True)
        renum = np.empty_like(first)
        renum[np.argsort(first, kind="stable")] = np.arange(first.shape[0])
        self.graph = g
        self.tile = renum[inv.ravel()]
        self.tile.setflags(write=False)
        self.count = int(first.shape[0])
        self._diam = None
        self._bnd = None

    def __len__(self):
        return self.count

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.tile == i)

    def tiles(self) -> list[np.ndarray]:
        order = np.argsort(self.tile, kind="stable")
        cuts = np.cumsum(np.bincount(self.tile, minlength=self.count))[:-1]
        return np.split(order, cuts)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.tile, minlength=self.count)

    @property
    def diameters(self) -> np.ndarray:
        """Diameter of each tile measured in the whole graph (-1 if infinite)."""
        if self._diam is None:
            g = self.graph
            self._diam = _kernels.tile_diameters(g.indptr, g.indices, self.tile, self.count)
        return self._diam

    @property
    def boundary_mask(self) -> np.ndarray:
        """Vertices with a neighbour in another tile."""
        if self._bnd is None:
            g = self.graph
            src = np.repeat(np.arange(g.n), g.degrees)
            cross = self.tile[src] != self.tile[g.indices]
            self._bnd = np.bincount(src[cross], minlength=g.n) > 0
        return self._bnd

    def boundary_counts(self) -> np.ndarray:
        return np.bincount(self.tile[self.boundary_mask], minlength=self.count)

    def iso(self, i: int) -> Fraction:
        return Fraction(int(self.boundary_counts()[i]), int(self.sizes[i]))

    def lines(self) -> str:
        return "".join(f"{x} {t}\n" for x, t in enumerate(self.tile.tolist()))


def parse_partition(g: Graph, text: str) -> Partition:
    rows = dict(line.split() for line in text.splitlines() if line.strip())
    return Partition(g, [int(rows[str(x)]) for x in range(g.n)])


@dataclass(frozen=True)
class PartitionQuality:
    K: int | None  # None when some tile spans two components
    eps_achieved: Fraction
    boundary_fraction: Fraction
    cut_size: int

    def to_json(self) -> dict:
        return {
            "K": self.K,
            "eps_achieved": _frac(self.eps_achieved),
            "boundary_fraction": _frac(self.boundary_fraction),
            "cut_size": self.cut_size,
        }


def partition_quality(g: Graph, p: Partition) -> PartitionQuality:
    """Exact quality, recomputed from the tile array alone."""
    if p.graph is not g and not p.graph.same_as(g):
        raise PreconditionError("partition belongs to another graph")
    if g.n == 0:
        return PartitionQuality(0, Fraction(0), Fraction(0), 0)
    diam = p.diameters
    K = None if (diam < 0).any() else int(diam.max())
    eps = max(Fraction(int(b), int(s)) for b, s in zip(p.boundary_counts(), p.sizes))
    return PartitionQuality(
        K, eps, Fraction(int(p.boundary_mask.sum()), g.n), int(cut_edges(g, p).shape[0])
    )


def cut_edges(g: Graph, p: Partition) -> np.ndarray:
    e = g.edge_array()
    if e.size == 0:
        return e
    return e[p.tile[e[:, 0]] != p.tile[e[:, 1]]]


# -- the partition rule -----------------------------------------------------------

@dataclass
class PartitionRun:
    """A partition plus the intermediate choices of the rule."""

    partition: Partition
    R: int
    K: int
    centers: np.ndarray  # vertex ids
    cut_radius: np.ndarray  # per centre
    center_of: np.ndarray  # per vertex: the owning centre's vertex id
    keys: np.ndarray = field(repr=False, default=None)

    @property
    def quality(self) -> PartitionQuality:
        return partition_quality(self.partition.graph, self.partition)


def label_keys(lab: Labeling, t: int) -> np.ndarray:
    return lab._prefix_ranks(t)


def _cut_radii(g: Graph, centers: np.ndarray, R: int) -> np.ndarray:
    sizes = _kernels.ball_sizes(g.indptr, g.indices, centers, 2 * R)
    r = np.arange(R, 2 * R)
    shell = sizes[:, r + 1] - sizes[:, r]
    inner = sizes[:, r]
    # compare shell/inner exactly by cross-multiplication against the running best
    best = np.zeros(centers.shape[0], dtype=np.int64)
    for j in range(1, r.shape[0]):
        better = shell[:, j] * inner[np.arange(len(best)), best] < shell[np.arange(len(best)), best] * inner[:, j]
        best = np.where(better, j, best)
    return r[best]


def partition_from_keys(g: Graph, keys: np.ndarray, R: int) -> PartitionRun:
    """Run the three-step rule with the given per-vertex keys."""
    if R < 1:
        raise PreconditionError("R must be >= 1")
    keys = np.asarray(keys, dtype=np.int64)
    order = np.lexsort((np.arange(g.n), keys))
    is_center = _kernels.select_centers(g.indptr, g.indices, order, 2 * R)
    centers = np.flatnonzero(is_center)
    cut = _cut_radii(g, centers, R)
    owner = _kernels.assign_tiles(g.indptr, g.indices, centers, keys[centers], cut, 2 * R)
    if (owner < 0).any():  # cannot happen for a maximal 2R-separated set
        raise AssertionError("vertex left without a centre")
    part = Partition(g, owner)
    return PartitionRun(part, R, 4 * R, centers, cut, centers[owner], keys)


def doubling_partition(g: Graph, lab: Labeling, R: int) -> PartitionRun:
    """Partition at scale ``R``; ``lab`` must have labels distinct within ``4R``."""
    if R < 1:
        raise PreconditionError("R must be >= 1")
    t = require_distinct(g, lab, 4 * R)
    return partition_from_keys(g, label_keys(lab, t), R)


@dataclass
class SearchResult:
    success: bool
    R: int | None
    run: PartitionRun | None
    best_eps: Fraction | None
    best_R: int | None
    tried: list  # (R, eps_achieved or None when degenerate)

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "R": self.R,
            "best_eps": None if self.best_eps is None else _frac(self.best_eps),
            "best_R": self.best_R,
            "tried": [[r, None if e is None else _frac(e)] for r, e in self.tried],
        }


def is_degenerate(run: PartitionRun) -> bool:
    """True when every tile is a whole connected component.

    Such a partition has no boundary at all, so its zero isoperimetric
    constant says nothing about the graph.
    """
    g = run.partition.graph
    return len(run.partition) == component_count(g)


def epsilon_scale_search(g: Graph, lab: Labeling | None, eps, labeling_for=None) -> SearchResult:
    """Smallest ``R`` in ``1, 2, 4, ...`` (``R <= diameter``) reaching ``eps``.

    ``lab=None`` builds a fresh labeling for each ``R`` through
    ``labeling_for(g, R)`` (default: greedy colouring of ``G^{4R}``).
    Partitions whose tiles are whole components do not count and end the
    schedule, since every larger ``R`` gives the same trivial answer.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise PreconditionError("eps must be > 0")
    if labeling_for is None:
        from .labeling import power_greedy_labeling

        def labeling_for(graph, scale):
            return power_greedy_labeling(graph, 4 * scale)

    cap = max(1, max_component_diameter(g))
    tried = []
    best = (None, None, None)
    R = 1
    while R <= cap:
        run = doubling_partition(g, lab if lab is not None else labeling_for(g, R), R)
        if is_degenerate(run) and R > 1:
            tried.append((R, None))
            break
        q = run.quality
        tried.append((R, q.eps_achieved))
        if best[0] is None or q.eps_achieved < best[0]:
            best = (q.eps_achieved, R, run)
        if q.eps_achieved <= eps:
            return SearchResult(True, R, run, q.eps_achieved, R, tried)
        R *= 2
    return SearchResult(False, None, None, best[0], best[1], tried)


# -- oracle form and the 3K gap -------------------------------------------------------

def center_ball_code(g: Graph, lab: Labeling, t: int, c: int, R: int):
    """Key of centre ``c``: code of its labeled ``6R``-ball with ``t``-bit labels."""
    return canonicalize(RootedBall.around(g, c, 6 * R, lab.prefix(t)), None)


@dataclass
class CompiledPartition:
    oracle: Oracle
    K: int
    R: int
    bits: int

    def keys(self, g: Graph, lab: Labeling, run: PartitionRun | None = None) -> QLabeling:
        """Same output as ``run_oracle`` computed in one global pass."""
        run = run if run is not None else doubling_partition(g, lab, self.R)
        memo = {}
        out = []
        for c in run.center_of.tolist():
            if c not in memo:
                memo[c] = center_ball_code(g, lab, self.bits, c, self.R)
            out.append(memo[c])
        return QLabeling(tuple(out))


def oracle_radius(R: int, t: int) -> int:
    """Radius that provably determines a vertex's key.

    A centre decision can wait on a chain of smaller-key vertices, each
    within ``2R`` of the last; keys drop along the chain, so it has at most
    ``2**t`` links. The owner lies within ``2R`` and its key reads ``6R``
    further.
    """
    return max(2 * R * ((1 << t) + 1), 8 * R)


def compile_partition_oracle(family, R: int) -> CompiledPartition:
    """Oracle whose outputs are tile keys for the scale-``R`` rule.

    ``family`` is a list of ``(graph, labeling)`` pairs; every labeling needs
    distinct labels within ``4K = 16R`` so that two different centres whose
    tiles come within ``3K`` get different keys. The oracle bit width is the
    largest certified width over the family.
    """
    if R < 1:
        raise PreconditionError("R must be >= 1")
    K = 4 * R
    t = max(require_distinct(g, lab, 4 * K) for g, lab in family) if family else 1
    for g, lab in family:
        if lab.depth < t:
            raise PreconditionError("labeling too shallow for the common bit width")
    m = oracle_radius(R, t)

    def rule(b: RootedBall):
        frag = b.graph
        keys = np.array([int(s, 2) for s in b.labels], dtype=np.int64)
        run = partition_from_keys(frag, keys, R)
        c = int(run.center_of[b.root])
        frag_lab = Labeling(np.array([[ch == "1" for ch in s] for s in b.labels],
                                     dtype=np.uint8).reshape(frag.n, t))
        return center_ball_code(frag, frag_lab, t, c, R)

    oracle = Oracle(m, rule, bits=t, max_vertices=None, name=f"partition(R={R})")
    return CompiledPartition(oracle, K, R, t)


def partition_from_keys_output(g: Graph, q, K: int) -> Partition:
    """Classes of ``x ~ y iff d(x, y) <= K and q[x] == q[y]`` (closed transitively)."""
    ranks = {v: i for i, v in enumerate(sorted(set(q)))}
    keys = np.array([ranks[v] for v in q], dtype=np.int64)
    pairs = _kernels.equal_key_pairs(g.indptr, g.indices, keys, 1, K, False)
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    a = coo_matrix((np.ones(pairs.shape[0]), (pairs[:, 0], pairs[:, 1])), shape=(g.n, g.n))
    _, lab = connected_components(a, directed=False)
    return Partition(g, lab)


def gap_audit(g: Graph, q, K: int):
    """First pair with equal outputs at distance in ``(K, 3K)``, or ``None``."""
    ranks = {v: i for i, v in enumerate(sorted(set(q)))}
    keys = np.array([ranks[v] for v in q], dtype=np.int64)
    hit = _kernels.equal_key_pairs(g.indptr, g.indices, keys, K + 1, 3 * K - 1, True)
    return tuple(int(v) for v in hit[0]) if hit.shape[0] else None


# -- hyperfinite cut ----------------------------------------------------------------

@dataclass(frozen=True)
class CutReport:
    edges: np.ndarray
    max_tile: int
    max_component: int
    bound: Fraction  # (d/2) * sum of tile boundary sizes

    @property
    def size(self) -> int:
        return int(self.edges.shape[0])


def hyperfinite_cut(g: Graph, p: Partition) -> CutReport:
    """Cross-tile edges; deleting them leaves components no larger than a tile."""
    cut = cut_edges(g, p)
    keep = g.edge_array()
    if keep.size:
        keep = keep[p.tile[keep[:, 0]] == p.tile[keep[:, 1]]]
    _, comp = components(build_graph(g.n, keep))
    biggest = int(np.bincount(comp).max(initial=0)) if g.n else 0
    bound = Fraction(g.degree_bound, 2) * int(p.boundary_counts().sum())
    return CutReport(cut, int(p.sizes.max(initial=0)), biggest, bound)


# -- fractional partitions ----------------------------------------------------------

@dataclass
class MultiPartition:
    partitions: list
    K: int
    strategy: str
    interior_counts: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        counts = np.zeros(self.partitions[0].graph.n, dtype=np.int64)
        for p in self.partitions:
            counts += ~p.boundary_mask
        self.interior_counts = counts

    @property
    def Q(self) -> int:
        return len(self.partitions)

    @property
    def p_achieved(self) -> Fraction:
        """Least share of the ``Q`` partitions in which a vertex is interior."""
        return Fraction(int(self.interior_counts.min(initial=self.Q)), self.Q)

    @property
    def mean_interior(self) -> Fraction:
        n = self.interior_counts.shape[0]
        return Fraction(int(self.interior_counts.sum()), self.Q * n) if n else Fraction(1)


def rotated_keys(keys: np.ndarray, t: int, round_: int, Q: int) -> np.ndarray:
    C = 1 << t
    return (keys + round_ * -(-C // Q)) % C


def fractional_partitions(g: Graph, lab: Labeling | None, Q: int, R: int,
                          strategy: str = "doubling", root: int = 0) -> MultiPartition:
    """``Q`` partitions of tile diameter at most ``K = 4R``.

    ``doubling``: the scale-``R`` rule rerun with label keys rotated by a
    round-dependent offset, which changes the centre scan order.
    ``slab``: levels from ``root`` cut into slabs, phase-shifted per round;
    tiles are the connected pieces of each slab.
    """
    if Q < 1:
        raise PreconditionError("Q must be >= 1")
    if R < 1:
        raise PreconditionError("R must be >= 1")
    K = 4 * R
    if strategy == "doubling":
        t = require_distinct(g, lab, 4 * R)
        keys = label_keys(lab, t)
        if t > 62:
            raise PreconditionError("key rotation needs t <= 62")
        parts = [partition_from_keys(g, rotated_keys(keys, t, n, Q), R).partition
                 for n in range(Q)]
    elif strategy == "slab":
        w = slab_width_for(g, root, K, Q)
        parts = [slab_partition(g, root, w, n, Q) for n in range(Q)]
    else:
        raise PreconditionError(f"unknown strategy {strategy!r}")
    return MultiPartition(parts, K, strategy)


def slab_partition(g: Graph, root: int, w: int, n: int, Q: int) -> Partition:
    """Round ``n`` of ``Q``: slabs of ``w`` levels starting at ``floor(n*w/Q)``."""
    level = _kernels.bfs(g.indptr, g.indices, int(root), -1)
    if (level < 0).any():
        raise PreconditionError("slab strategy needs a connected graph")
    slab = (level + w - (n * w) // Q) // w
    e = g.edge_array()
    if e.size:
        e = e[slab[e[:, 0]] == slab[e[:, 1]]]
    _, comp = components(build_graph(g.n, e))
    return Partition(g, comp)


def slab_width_for(g: Graph, root: int, K: int, Q: int) -> int:
    """Widest slab, at most ``K+1`` levels, keeping every tile diameter <= K."""
    for w in range(K + 1, 0, -1):
        if all(_max_diam(slab_partition(g, root, w, n, Q)) <= K for n in range(Q)):
            return w
    raise AssertionError("single-level slabs always fit")  # pragma: no cover


def _max_diam(p: Partition) -> int:
    d = p.diameters
    return 10 ** 9 if (d < 0).any() else int(d.max(initial=0))


# -- independent sets -----------------------------------------------------------------

MIS_CAP = 40
TILE_CAP = 64


def _bitmask_mis(adj_masks: list[int], allowed: int) -> int:
    """Maximum independent set inside ``allowed`` as a bitmask (branch and bound)."""
    best = [0, 0]  # size, mask

    def rec(avail: int, chosen: int, size: int):
        if size + avail.bit_count() <= best[0]:
            return
        # peel vertices of degree <= 1 within avail; taking them is always safe
        changed = True
        while changed and avail:
            changed = False
            a = avail
            while a:
                low = a & -a
                v = low.bit_length() - 1
                a ^= low
                if not (avail >> v) & 1:
                    continue
                if (adj_masks[v] & avail).bit_count() <= 1:
                    chosen |= low
                    size += 1
                    avail &= ~(low | adj_masks[v])
                    changed = True
        if not avail:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + avail.bit_count() <= best[0]:
            return
        # branch on a vertex of largest remaining degree
        a = avail
        pick, pick_deg = -1, -1
        while a:
            low = a & -a
            v = low.bit_length() - 1
            a ^= low
            dv = (adj_masks[v] & avail).bit_count()
            if dv > pick_deg:
                pick, pick_deg = v, dv
        bit = 1 << pick
        rec(avail & ~(bit | adj_masks[pick]), chosen | bit, size + 1)
        rec(avail & ~bit, chosen, size)

    rec(allowed, 0, 0)
    return best[1]


def _masks(g: Graph) -> list[int]:
    return [sum(1 << int(u) for u in g.neighbors(v)) for v in range(g.n)]


def _grid_mis(rows: int, cols: int) -> np.ndarray:
    """Column DP over row bitmasks of a ``rows x cols`` grid."""
    if rows > cols:
        sol = _grid_mis(cols, rows)
        return np.sort((sol % rows) * cols + sol // rows)  # transpose ids back
    states = [s for s in range(1 << rows) if not s & (s >> 1)]
    pop = {s: bin(s).count("1") for s in states}
    best = {s: (pop[s], (s,)) for s in states}
    for _ in range(cols - 1):
        nxt = {}
        for s in states:
            cand = max(((v[0], v[1]) for p, v in best.items() if not p & s), key=lambda t: t[0])
            nxt[s] = (cand[0] + pop[s], cand[1] + (s,))
        best = nxt
    _, cols_sel = max(best.values(), key=lambda t: t[0])
    ids = [r * cols + c for c, s in enumerate(cols_sel) for r in range(rows) if (s >> r) & 1]
    return np.array(sorted(ids), dtype=np.int64)


@dataclass(frozen=True)
class MISResult:
    size: int
    members: np.ndarray


def exact_mis(g: Graph, cap: int = MIS_CAP) -> MISResult:
    """Maximum independent set; exact for any graph with at most ``cap``
    vertices, and for paths, cycles and grids (tagged by the generators) of
    any size."""
    fam = g.family or ()
    if fam and fam[0] == "path":
        ids = np.arange(0, g.n, 2)
    elif fam and fam[0] == "cycle":
        ids = np.arange(0, 2 * (g.n // 2), 2)
    elif fam and fam[0] == "grid" and min(fam[1], fam[2]) <= 12:
        ids = _grid_mis(fam[1], fam[2])
    elif fam and fam[0] == "edgeless":
        ids = np.arange(g.n)
    else:
        if g.n > cap:
            raise PreconditionError(f"exact MIS capped at {cap} vertices, got {g.n}")
        mask = _bitmask_mis(_masks(g), (1 << g.n) - 1)
        ids = np.array([v for v in range(g.n) if (mask >> v) & 1], dtype=np.int64)
    return MISResult(int(ids.shape[0]), ids.astype(np.int64))


@dataclass
class ApproxMIS:
    members: np.ndarray
    size: int
    tile_optimum: int  # sum over tiles of the interior optimum
    labels: QLabeling  # 0 = in the set, 1 = not
    verifier: Verifier

    def verify(self, g: Graph):
        return run_verifier(g, self.labels, self.verifier)


def approx_mis(g: Graph, p: Partition, tile_cap: int = TILE_CAP) -> ApproxMIS:
    """Union over tiles of an exact maximum independent set of each tile interior."""
    interior = ~p.boundary_mask
    chosen = []
    for members in p.tiles():
        inner = members[interior[members]]
        if inner.shape[0] > tile_cap:
            raise PreconditionError(f"tile interior of {inner.shape[0]} vertices exceeds cap {tile_cap}")
        if inner.shape[0] == 0:
            continue
        local = {int(v): i for i, v in enumerate(inner)}
        adj = [sum(1 << local[int(u)] for u in g.neighbors(int(v)) if int(u) in local) for v in inner]
        mask = _bitmask_mis(adj, (1 << inner.shape[0]) - 1)
        chosen.extend(int(inner[i]) for i in range(inner.shape[0]) if (mask >> i) & 1)
    members = np.array(sorted(chosen), dtype=np.int64)
    flag = np.ones(g.n, dtype=np.int64)
    flag[members] = 0
    # interiors of different tiles never touch, so the union stays independent
    e = g.edge_array()
    if e.size and ((flag[e[:, 0]] == 0) & (flag[e[:, 1]] == 0)).any():
        raise AssertionError("tile interiors are adjacent")
    return ApproxMIS(members, int(members.shape[0]), int(members.shape[0]),
                     QLabeling(tuple(flag.tolist())), independence_verifier())
