"""Laplacian spectra, spectral measures and Hausdorff distances."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np
import scipy.linalg

from .graph import Graph, PreconditionError

SPECTRUM_CAP = 4096
CLUSTER_TOL = 1e-7


@dataclass(frozen=True)
class Spectrum:
    values: np.ndarray  # ascending

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def points(self) -> np.ndarray:
        return self.values

    def csv(self) -> str:
        return "index,eigenvalue\n" + "".join(
            f"{i},{_fmt(v)}\n" for i, v in enumerate(self.values.tolist())
        )


def _fmt(v: float) -> str:
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


@dataclass(frozen=True)
class IntervalSpec:
    """Finite union of closed intervals, kept sorted and merged."""

    intervals: tuple

    def __post_init__(self):
        ivs = sorted((float(a), float(b)) for a, b in self.intervals)
        if any(a > b for a, b in ivs):
            raise PreconditionError("interval with a > b")
        merged = []
        for a, b in ivs:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "intervals", tuple(merged))

    def contains(self, x: float) -> bool:
        return any(a <= x <= b for a, b in self.intervals)

    def distance_to(self, x: float) -> float:
        return min(0.0 if a <= x <= b else min(abs(x - a), abs(x - b)) for a, b in self.intervals)


def laplacian(g: Graph, kernel: Callable | None = None) -> np.ndarray:
    """Dense ``D - A``; ``kernel(g)`` may supply another symmetric radius-1 operator."""
    if kernel is not None:
        m = np.asarray(kernel(g), dtype=float)
        if m.shape != (g.n, g.n) or not np.allclose(m, m.T):
            raise PreconditionError("kernel must return a symmetric n x n matrix")
        return m
    a = np.zeros((g.n, g.n))
    src = np.repeat(np.arange(g.n), g.degrees)
    a[src, g.indices] = -1.0
    a[np.arange(g.n), np.arange(g.n)] = g.degrees
    return a


def laplacian_spectrum(g: Graph, cap: int = SPECTRUM_CAP, kernel: Callable | None = None) -> Spectrum:
    if g.n > cap:
        raise PreconditionError(f"dense spectrum capped at {cap} vertices, got {g.n}")
    if g.n == 0:
        return Spectrum(np.empty(0))
    vals = scipy.linalg.eigvalsh(laplacian(g, kernel))
    vals.setflags(write=False)
    return Spectrum(vals)


@dataclass(frozen=True)
class SpectralMeasure:
    atoms: tuple  # ((value, Fraction weight), ...) ascending

    def total(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))


def spectral_measure(g: Graph, tol: float = CLUSTER_TOL, spectrum: Spectrum | None = None) -> SpectralMeasure:
    """Eigenvalues chained within ``tol`` of each other form one atom
    (value = cluster mean, weight = cluster size / n)."""
    if spectrum is None:
        spectrum = laplacian_spectrum(g)
    v = spectrum.values
    if v.shape[0] == 0:
        raise PreconditionError("spectral measure of the empty graph")
    breaks = np.flatnonzero(np.diff(v) > tol) + 1
    atoms = tuple((float(c.mean()), Fraction(c.shape[0], v.shape[0])) for c in np.split(v, breaks))
    return SpectralMeasure(atoms)


def _as_set(s):
    if isinstance(s, IntervalSpec):
        return s
    if isinstance(s, Spectrum):
        pts = s.values
    else:
        pts = np.asarray(s, dtype=float)
    if pts.shape[0] == 0:
        raise PreconditionError("Hausdorff distance needs nonempty sets")
    return np.unique(pts)


def _point_to_points(x: float, pts: np.ndarray) -> float:
    i = bisect.bisect_left(pts, x)
    best = math.inf
    if i < len(pts):
        best = pts[i] - x
    if i > 0:
        best = min(best, x - pts[i - 1])
    return float(best)


def _directed(a, b) -> float:
    """``sup_{x in a} dist(x, b)``."""
    if isinstance(a, IntervalSpec):
        # farthest points of an interval from a set sit at endpoints or at
        # midpoints between consecutive points of the other set
        cand = []
        for lo, hi in a.intervals:
            cand += [lo, hi]
            if isinstance(b, IntervalSpec):
                for (_, b1), (b2, _) in zip(b.intervals, b.intervals[1:]):
                    m = (b1 + b2) / 2
                    if lo <= m <= hi:
                        cand.append(m)
                    for e in (b1, b2):
                        if lo <= e <= hi:
                            cand.append(e)
            else:
                inside = b[(b >= lo) & (b <= hi)]
                mids = (b[1:] + b[:-1]) / 2
                cand += mids[(mids >= lo) & (mids <= hi)].tolist()
                cand += inside.tolist()
        return max(_dist_to(x, b) for x in cand)
    return max(_dist_to(float(x), b) for x in a)


def _dist_to(x: float, b) -> float:
    if isinstance(b, IntervalSpec):
        return b.distance_to(x)
    return _point_to_points(x, b)


def hausdorff_distance(a, b) -> float:
    """Symmetrised Hausdorff distance between finite point sets and/or interval unions."""
    a, b = _as_set(a), _as_set(b)
    return max(_directed(a, b), _directed(b, a))


def limit_spectrum(family: str, d: int | None = None) -> IntervalSpec:
    """Laplacian spectra of the line, the plane lattice and the ``d``-regular tree."""
    name = family.lower().replace("_", "-")
    if name in ("line", "z"):
        return IntervalSpec(((0.0, 4.0),))
    if name in ("plane", "z2"):
        return IntervalSpec(((0.0, 8.0),))
    if name in ("tree", "regular-tree"):
        if d is None or d < 2:
            raise PreconditionError("regular tree needs d >= 2")
        r = 2 * math.sqrt(d - 1)
        return IntervalSpec(((d - r, d + r),))
    raise PreconditionError(f"unknown limit family {family!r}")


def convergence_curve(make: Callable[[int], Graph], target, ns: Iterable[int],
                      cap: int = SPECTRUM_CAP) -> list[tuple[int, float]]:
    return [(n, hausdorff_distance(laplacian_spectrum(make(n), cap), target)) for n in ns]


def curve_csv(curve) -> str:
    return "n,hausdorff\n" + "".join(f"{n},{_fmt(h)}\n" for n, h in curve)


def cycle_closed_form(n: int) -> np.ndarray:
    return np.sort(2 - 2 * np.cos(2 * np.pi * np.arange(n) / n))
