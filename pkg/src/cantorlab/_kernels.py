"""Breadth-first kernels over CSR adjacency arrays.

Every kernel exists twice: a numba ``@njit`` version and a pure-numpy
version built on vectorised frontier expansion. The module-level names are
bound to the numba versions unless numba is missing or the environment
variable ``CANTORLAB_PURE_NUMPY`` is set to a non-empty value other than
``0``. Both backends are importable as ``numba_backend`` / ``numpy_backend``
so they can be compared side by side (see ``benchmarks/``).

All arrays are int64. ``dist`` arrays use -1 for "not reached".
"""

import os
from types import SimpleNamespace

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

PURE_NUMPY = os.environ.get("CANTORLAB_PURE_NUMPY", "") not in ("", "0")


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def _expand(indptr, indices, frontier):
    """Concatenated neighbour lists of ``frontier``."""
    starts = indptr[frontier]
    lens = indptr[frontier + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    offsets = np.repeat(starts - np.cumsum(lens) + lens, lens) + np.arange(total)
    return indices[offsets]


def _np_bfs(indptr, indices, src, max_depth):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    frontier = np.array([src], dtype=np.int64)
    depth = 0
    while frontier.size and (max_depth < 0 or depth < max_depth):
        nb = _expand(indptr, indices, frontier)
        nb = np.unique(nb[dist[nb] < 0])
        if nb.size == 0:
            break
        depth += 1
        dist[nb] = depth
        frontier = nb
    return dist


def _np_ball_sizes(indptr, indices, sources, s_max):
    out = np.empty((sources.shape[0], s_max + 1), dtype=np.int64)
    for i, x in enumerate(sources):
        dist = _np_bfs(indptr, indices, x, s_max)
        out[i] = np.cumsum(np.bincount(dist[dist >= 0], minlength=s_max + 1))
    return out


def _np_eccentricities(indptr, indices):
    n = indptr.shape[0] - 1
    out = np.empty(n, dtype=np.int64)
    for x in range(n):
        out[x] = _np_bfs(indptr, indices, x, -1).max()
    return out


def _np_equal_key_pairs(indptr, indices, keys, lo, hi, first_only):
    # pairs x < y with lo <= dist <= hi and equal keys, lexicographically sorted
    n = indptr.shape[0] - 1
    found = []
    for x in range(n):
        dist = _np_bfs(indptr, indices, x, hi)
        hit = np.flatnonzero((dist >= lo) & (keys == keys[x]))
        hit = hit[hit > x]
        if hit.size:
            if first_only:
                return np.array([[x, hit[0]]], dtype=np.int64)
            found.append(np.column_stack([np.full(hit.size, x), hit]))
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(found).astype(np.int64)


def _np_greedy_power_coloring(indptr, indices, r):
    n = indptr.shape[0] - 1
    colors = np.full(n, -1, dtype=np.int64)
    for x in range(n):
        dist = _np_bfs(indptr, indices, x, r)
        near = colors[(dist > 0) & (colors >= 0)]
        used = np.zeros(near.size + 2, dtype=bool)
        used[near[near < used.size]] = True
        colors[x] = int(np.argmin(used))
    return colors


def _np_tile_diameters(indptr, indices, tile, ntiles):
    n = indptr.shape[0] - 1
    diam = np.zeros(ntiles, dtype=np.int64)
    for x in range(n):
        t = tile[x]
        if diam[t] < 0:
            continue
        dist = _np_bfs(indptr, indices, x, -1)
        d = dist[tile == t]
        diam[t] = -1 if (d < 0).any() else max(diam[t], int(d.max()))
    return diam


def _np_select_centers(indptr, indices, order, sep):
    n = indptr.shape[0] - 1
    blocked = np.zeros(n, dtype=bool)
    is_center = np.zeros(n, dtype=bool)
    for x in order:
        if blocked[x]:
            continue
        is_center[x] = True
        blocked[_np_bfs(indptr, indices, x, sep) >= 0] = True
    return is_center


def _np_assign_tiles(indptr, indices, centers, rank, cut, reach):
    n = indptr.shape[0] - 1
    big = np.iinfo(np.int64).max
    best_cov = np.full(n, 2, dtype=np.int64)
    best_d = np.full(n, big, dtype=np.int64)
    best_rank = np.full(n, big, dtype=np.int64)
    owner = np.full(n, -1, dtype=np.int64)
    for i, c in enumerate(centers):
        dist = _np_bfs(indptr, indices, c, reach)
        v = np.flatnonzero(dist >= 0)
        d = dist[v]
        cov = np.where(d <= cut[i], 0, 1)
        better = (cov < best_cov[v]) | (
            (cov == best_cov[v])
            & ((d < best_d[v]) | ((d == best_d[v]) & (rank[i] < best_rank[v])))
        )
        v = v[better]
        best_cov[v] = cov[better]
        best_d[v] = d[better]
        best_rank[v] = rank[i]
        owner[v] = i
    return owner


def _np_reduce_colors(indptr, indices, colors, d):
    colors = colors.copy()
    for t in np.unique(colors[colors > d + 1])[::-1]:
        cls = np.flatnonzero(colors == t)
        starts = indptr[cls]
        lens = indptr[cls + 1] - starts
        rows = np.repeat(np.arange(cls.size), lens)
        nbc = colors[_expand(indptr, indices, cls)]
        keep = nbc <= d + 1
        forbidden = np.zeros((cls.size, d + 2), dtype=bool)
        forbidden[rows[keep], nbc[keep]] = True
        colors[cls] = np.argmin(forbidden[:, 1:], axis=1) + 1
    return colors


numpy_backend = SimpleNamespace(
    name="numpy",
    bfs=_np_bfs,
    ball_sizes=_np_ball_sizes,
    eccentricities=_np_eccentricities,
    equal_key_pairs=_np_equal_key_pairs,
    greedy_power_coloring=_np_greedy_power_coloring,
    tile_diameters=_np_tile_diameters,
    select_centers=_np_select_centers,
    assign_tiles=_np_assign_tiles,
    reduce_colors=_np_reduce_colors,
)


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

def _build_numba_backend():
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def bfs_into(indptr, indices, src, max_depth, dist, queue):
        # dist must be all -1 on entry; caller resets dist[queue[:tail]].
        dist[src] = 0
        queue[0] = src
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            if max_depth >= 0 and du >= max_depth:
                continue
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
        return tail

    @njit
    def bfs(indptr, indices, src, max_depth):
        n = indptr.shape[0] - 1
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        bfs_into(indptr, indices, src, max_depth, dist, queue)
        return dist

    @njit
    def ball_sizes(indptr, indices, sources, s_max):
        n = indptr.shape[0] - 1
        out = np.zeros((sources.shape[0], s_max + 1), dtype=np.int64)
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for i in range(sources.shape[0]):
            tail = bfs_into(indptr, indices, sources[i], s_max, dist, queue)
            for j in range(tail):
                out[i, dist[queue[j]]] += 1
                dist[queue[j]] = -1
            for s in range(1, s_max + 1):
                out[i, s] += out[i, s - 1]
        return out

    @njit
    def eccentricities(indptr, indices):
        n = indptr.shape[0] - 1
        out = np.zeros(n, dtype=np.int64)
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for x in range(n):
            tail = bfs_into(indptr, indices, x, -1, dist, queue)
            out[x] = dist[queue[tail - 1]]
            for j in range(tail):
                dist[queue[j]] = -1
        return out

    @njit
    def equal_key_pairs(indptr, indices, keys, lo, hi, first_only):
        n = indptr.shape[0] - 1
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        xs = []
        ys = []
        for x in range(n):
            tail = bfs_into(indptr, indices, x, hi, dist, queue)
            for j in range(tail):
                v = queue[j]
                if v > x and dist[v] >= lo and keys[v] == keys[x]:
                    xs.append(x)
                    ys.append(v)
                dist[v] = -1
            if first_only and len(xs) > 0:
                break
        # rows in lexicographic order, matching the numpy backend
        flat = np.empty(len(xs), dtype=np.int64)
        for i in range(len(xs)):
            flat[i] = xs[i] * n + ys[i]
        flat.sort()
        if first_only and flat.shape[0] > 1:
            flat = flat[:1]
        out = np.empty((flat.shape[0], 2), dtype=np.int64)
        for i in range(flat.shape[0]):
            out[i, 0] = flat[i] // n
            out[i, 1] = flat[i] % n
        return out

    @njit
    def greedy_power_coloring(indptr, indices, r):
        n = indptr.shape[0] - 1
        colors = np.full(n, -1, dtype=np.int64)
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        used = np.zeros(n + 1, dtype=np.bool_)
        for x in range(n):
            tail = bfs_into(indptr, indices, x, r, dist, queue)
            for j in range(1, tail):
                c = colors[queue[j]]
                if c >= 0:
                    used[c] = True
            c = 0
            while used[c]:
                c += 1
            colors[x] = c
            for j in range(tail):
                v = queue[j]
                dist[v] = -1
                if colors[v] >= 0:
                    used[colors[v]] = False
        return colors

    @njit
    def tile_diameters(indptr, indices, tile, ntiles):
        n = indptr.shape[0] - 1
        size = np.zeros(ntiles, dtype=np.int64)
        for x in range(n):
            size[tile[x]] += 1
        diam = np.zeros(ntiles, dtype=np.int64)
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for x in range(n):
            t = tile[x]
            if diam[t] < 0:
                continue
            dist[x] = 0
            queue[0] = x
            head = 0
            tail = 1
            found = 1
            far = 0
            while head < tail and found < size[t]:
                u = queue[head]
                head += 1
                for p in range(indptr[u], indptr[u + 1]):
                    v = indices[p]
                    if dist[v] < 0:
                        dist[v] = dist[u] + 1
                        queue[tail] = v
                        tail += 1
                        if tile[v] == t:
                            found += 1
                            far = dist[v]
            if found < size[t]:
                diam[t] = -1
            elif far > diam[t]:
                diam[t] = far
            for j in range(tail):
                dist[queue[j]] = -1
        return diam

    @njit
    def select_centers(indptr, indices, order, sep):
        n = indptr.shape[0] - 1
        blocked = np.zeros(n, dtype=np.bool_)
        is_center = np.zeros(n, dtype=np.bool_)
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for i in range(order.shape[0]):
            x = order[i]
            if blocked[x]:
                continue
            is_center[x] = True
            tail = bfs_into(indptr, indices, x, sep, dist, queue)
            for j in range(tail):
                blocked[queue[j]] = True
                dist[queue[j]] = -1
        return is_center

    @njit
    def assign_tiles(indptr, indices, centers, rank, cut, reach):
        n = indptr.shape[0] - 1
        big = np.iinfo(np.int64).max
        best_cov = np.full(n, 2, dtype=np.int64)
        best_d = np.full(n, big, dtype=np.int64)
        best_rank = np.full(n, big, dtype=np.int64)
        owner = np.full(n, -1, dtype=np.int64)
        dist = np.full(n, -1, dtype=np.int64)
        queue = np.empty(n, dtype=np.int64)
        for i in range(centers.shape[0]):
            tail = bfs_into(indptr, indices, centers[i], reach, dist, queue)
            for j in range(tail):
                v = queue[j]
                d = dist[v]
                cov = 0 if d <= cut[i] else 1
                if (cov < best_cov[v]
                        or (cov == best_cov[v]
                            and (d < best_d[v]
                                 or (d == best_d[v] and rank[i] < best_rank[v])))):
                    best_cov[v] = cov
                    best_d[v] = d
                    best_rank[v] = rank[i]
                    owner[v] = i
                dist[v] = -1
        return owner

    @njit
    def reduce_colors_ordered(indptr, indices, colors, d, order):
        forbidden = np.zeros(d + 2, dtype=np.bool_)
        for i in range(order.shape[0]):
            x = order[i]
            for p in range(indptr[x], indptr[x + 1]):
                c = colors[indices[p]]
                if c <= d + 1:
                    forbidden[c] = True
            c = 1
            while forbidden[c]:
                c += 1
            colors[x] = c
            forbidden[:] = False
        return colors

    def reduce_colors(indptr, indices, colors, d):
        colors = colors.copy()
        high = np.flatnonzero(colors > d + 1)
        # descending color; vertices of one color are independent, so any
        # order inside a class gives the synchronous-round result
        order = high[np.argsort(-colors[high], kind="stable")]
        return reduce_colors_ordered(indptr, indices, colors, d, order)

    return SimpleNamespace(
        name="numba",
        bfs=bfs,
        ball_sizes=ball_sizes,
        eccentricities=eccentricities,
        equal_key_pairs=equal_key_pairs,
        greedy_power_coloring=greedy_power_coloring,
        tile_diameters=tile_diameters,
        select_centers=select_centers,
        assign_tiles=assign_tiles,
        reduce_colors=reduce_colors,
    )


numba_backend = _build_numba_backend() if numba is not None else None

active = numpy_backend if (PURE_NUMPY or numba_backend is None) else numba_backend

bfs = active.bfs
ball_sizes = active.ball_sizes
eccentricities = active.eccentricities
equal_key_pairs = active.equal_key_pairs
greedy_power_coloring = active.greedy_power_coloring
tile_diameters = active.tile_diameters
select_centers = active.select_centers
assign_tiles = active.assign_tiles
reduce_colors = active.reduce_colors
