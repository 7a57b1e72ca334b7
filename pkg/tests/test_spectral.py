import math
from fractions import Fraction

import numpy as np
import pytest

from cantorlab.generators import complete, cycle, disjoint_union, edgeless, grid, path, random_regular, torus
from cantorlab.graph import PreconditionError, component_count
from cantorlab.spectral import (
    IntervalSpec,
    convergence_curve,
    curve_csv,
    cycle_closed_form,
    hausdorff_distance,
    laplacian,
    laplacian_spectrum,
    limit_spectrum,
    spectral_measure,
)


def test_small_spectra():
    assert np.allclose(laplacian_spectrum(complete(2)).values, [0, 2])
    assert np.allclose(laplacian_spectrum(cycle(4)).values, [0, 2, 2, 4])
    assert np.allclose(laplacian_spectrum(edgeless(3)).values, [0, 0, 0])


@pytest.mark.parametrize("n", [3, 5, 16, 64, 255, 256])
def test_cycle_closed_form(n):
    assert np.abs(laplacian_spectrum(cycle(n)).values - cycle_closed_form(n)).max() < 1e-9


def test_measures():
    assert [w for _, w in spectral_measure(complete(2)).atoms] == [Fraction(1, 2)] * 2
    atoms = spectral_measure(cycle(4), 1e-9).atoms
    assert [round(v, 9) for v, _ in atoms] == [0, 2, 4]
    assert [w for _, w in atoms] == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 4)]
    assert spectral_measure(edgeless(6)).atoms == ((0.0, Fraction(1)),)
    assert spectral_measure(torus(6)).total() == 1


def test_hausdorff_examples():
    line = limit_spectrum("line")
    assert hausdorff_distance([1, 2], [1, 2]) == 0
    assert hausdorff_distance([0, 2, 4], line) == pytest.approx(1.0)
    assert hausdorff_distance([0], [3]) == 3
    assert hausdorff_distance(line, IntervalSpec(((0, 1), (3, 4)))) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        hausdorff_distance([], line)


def test_hausdorff_against_dense_sampling():
    rng = np.random.default_rng(0)
    target = IntervalSpec(((0.5, 1.5), (2.0, 3.75)))
    xs = np.linspace(-1, 5, 60001)
    inside = xs[((xs >= 0.5) & (xs <= 1.5)) | ((xs >= 2.0) & (xs <= 3.75))]
    for _ in range(5):
        pts = np.sort(rng.uniform(0, 4, size=7))
        gap = np.abs(inside[:, None] - pts[None, :])
        want = max(gap.min(axis=0).max(), gap.min(axis=1).max())
        assert hausdorff_distance(pts, target) == pytest.approx(want, abs=2e-4)


def test_limit_spectra():
    assert limit_spectrum("line").intervals == ((0.0, 4.0),)
    assert limit_spectrum("plane").intervals == ((0.0, 8.0),)
    lo, hi = limit_spectrum("tree", 4).intervals[0]
    assert lo == pytest.approx(4 - 2 * math.sqrt(3)) and hi == pytest.approx(4 + 2 * math.sqrt(3))
    with pytest.raises(PreconditionError):
        limit_spectrum("hyperbolic")


def test_curves():
    cyc = convergence_curve(cycle, limit_spectrum("line"), [8, 16, 32, 64])
    h = [v for _, v in cyc]
    assert all(v > 0 for v in h) and h == sorted(h, reverse=True)
    # half the widest gap between closed-form eigenvalues (0 and 4 are both
    # eigenvalues for even n, so the gaps are the whole story)
    for n, v in cyc:
        pts = np.unique(np.round(cycle_closed_form(n), 12))
        assert v == pytest.approx(np.diff(pts).max() / 2, abs=1e-9)
    tor = [v for _, v in convergence_curve(torus, limit_spectrum("plane"), [4, 8, 16])]
    assert tor[0] > tor[1] > tor[2]
    rr = hausdorff_distance(laplacian_spectrum(random_regular(4, 128, seed=3)), limit_spectrum("tree", 4))
    assert rr >= 0.4
    assert curve_csv(cyc).startswith("n,hausdorff\n8,")


CORPUS = [cycle(9), path(7), grid(4, 5), torus(5), random_regular(4, 30, seed=2),
          disjoint_union(cycle(4), path(3), edgeless(2)), edgeless(3)]


@pytest.mark.parametrize("g", CORPUS, ids=lambda g: repr(g))
def test_sanity_invariants(g):
    vals = laplacian_spectrum(g).values
    assert abs(vals.sum() - g.degrees.sum()) <= 1e-8 * g.n
    assert vals.min() >= -1e-9 and vals.max() <= 2 * g.degree_bound + 1e-9
    assert int((np.abs(vals) < 1e-9).sum()) == component_count(g)


def test_custom_kernel_hook():
    g = cycle(5)
    adj = -(laplacian(g) - np.diag(g.degrees))
    spectrum = laplacian_spectrum(g, kernel=lambda h: adj)
    assert spectrum.values.max() == pytest.approx(2.0)
    with pytest.raises(PreconditionError):
        laplacian_spectrum(g, kernel=lambda h: np.triu(np.ones((5, 5))))


def test_spectrum_cap_and_csv():
    with pytest.raises(PreconditionError):
        laplacian_spectrum(grid(10), cap=50)
    lines = laplacian_spectrum(cycle(4)).csv().splitlines()
    assert lines[0] == "index,eigenvalue" and lines[4] == "3,4"
    assert abs(float(lines[1].split(",")[1])) < 1e-12


def test_equal_ball_sets_spectra_get_closer():
    from cantorlab.balls import d_gr

    # C_n and C_{n+1} agree to larger radii as n grows; their spectra approach
    pairs = [(8, 9), (16, 17), (32, 33)]
    ks = [int(-math.log2(d_gr(cycle(a), cycle(b), 40))) for a, b in pairs]
    hs = [hausdorff_distance(laplacian_spectrum(cycle(a)), laplacian_spectrum(cycle(b))) for a, b in pairs]
    assert ks == sorted(ks) and hs == sorted(hs, reverse=True)
