"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 48] [--repeat 3]

Both backends are checked for identical output before timing. The numba
column excludes the first (compiling) call.
"""

import argparse
import time

import numpy as np

from cantorlab import _kernels
from cantorlab.generators import torus


def _cases(g):
    ip, ix = g.indptr, g.indices
    n = g.n
    src = np.arange(n, dtype=np.int64)
    keys = np.arange(n, dtype=np.int64) % 97
    order = np.argsort(keys, kind="stable").astype(np.int64)
    centers = np.flatnonzero(_kernels.numpy_backend.select_centers(ip, ix, order, 8))
    cut = np.full(centers.shape[0], 5, dtype=np.int64)
    tile = _kernels.numpy_backend.assign_tiles(ip, ix, centers, centers, cut, 8)
    colors = _kernels.numpy_backend.greedy_power_coloring(ip, ix, 2) + 1
    return {
        "bfs": (ip, ix, 0, -1),
        "ball_sizes": (ip, ix, src, 6),
        "eccentricities": (ip, ix),
        "equal_key_pairs": (ip, ix, keys, 1, 6, False),
        "greedy_power_coloring": (ip, ix, 3),
        "tile_diameters": (ip, ix, tile, int(tile.max()) + 1),
        "select_centers": (ip, ix, order, 8),
        "assign_tiles": (ip, ix, centers, centers, cut, 8),
        "reduce_colors": (ip, ix, colors, 4),
    }


def _time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=48, help="torus side")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    nb, npy = _kernels.numba_backend, _kernels.numpy_backend
    if nb is None:
        raise SystemExit("numba is not installed")
    g = torus(args.n)
    print(f"torus {args.n}x{args.n}: n={g.n}")
    print(f"{'kernel':24s} {'numpy s':>10s} {'numba s':>10s} {'speedup':>8s}")
    for name, a in _cases(g).items():
        out_np = getattr(npy, name)(*a)
        out_nb = getattr(nb, name)(*a)
        assert np.array_equal(np.asarray(out_np), np.asarray(out_nb)), name
        t_np = _time(getattr(npy, name), a, args.repeat)
        t_nb = _time(getattr(nb, name), a, args.repeat)
        print(f"{name:24s} {t_np:10.4f} {t_nb:10.4f} {t_np / max(t_nb, 1e-9):8.1f}")


if __name__ == "__main__":
    main()
