import re
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantorlab.balls import (
    BallProfile,
    BallSet,
    ball_profile,
    ball_set,
    bs_distance,
    bs_metric,
    d_cgr,
    d_gr,
    dumps,
)
from cantorlab.canon import RootedBall, brute_force_isomorphic
from cantorlab.generators import cycle, disjoint_union, grid, path, torus
from cantorlab.graph import PreconditionError
from cantorlab.labeling import Labeling


def _freqs(p):
    return sorted(p.freq.values())


def test_profiles():
    assert _freqs(ball_profile(cycle(5), 1)) == [1]
    assert _freqs(ball_profile(path(4), 1)) == [Fraction(1, 2)] * 2
    assert _freqs(ball_profile(grid(3), 1)) == [Fraction(1, 9), Fraction(4, 9), Fraction(4, 9)]


def test_ball_sets():
    assert len(ball_set(cycle(6), 1)) == 1
    assert len(ball_set(cycle(3), 1)) == 1
    assert len(ball_set(disjoint_union(cycle(6), path(2)), 1)) == 2


def _enumerated_types(g, k):
    """Ball types at radius k by pairwise brute-force isomorphism (no codes)."""
    reps = []
    for x in range(g.n):
        b = RootedBall.around(g, x, k)
        if not any(brute_force_isomorphic(b, r) for r in reps):
            reps.append(b)
    return reps


def _oracle_d_gr(g, h, k_max):
    for i in range(1, k_max + 1):
        tg, th = _enumerated_types(g, i), _enumerated_types(h, i)
        same = len(tg) == len(th) and all(any(brute_force_isomorphic(a, b) for b in th) for a in tg)
        if not same:
            return Fraction(1, 2 ** (i - 1))
    return Fraction(0)


def test_cycle_pairs_against_formula_and_enumeration():
    for n, m in [(4, 5), (5, 7), (6, 9), (8, 11)]:
        want = Fraction(1, 2 ** (min(n // 2, m // 2) - 1))
        assert d_gr(cycle(n), cycle(m), 6) == want
        assert _oracle_d_gr(cycle(n), cycle(m), 6) == want


def test_d_gr_examples():
    assert d_gr(cycle(3), cycle(4), 5) == 1
    assert d_gr(cycle(6), cycle(7), 3) == Fraction(1, 4)
    assert d_gr(grid(4), grid(4), 5) == 0
    with pytest.raises(PreconditionError):
        d_gr(cycle(4), cycle(5), 0)


CORPUS = [cycle(5), cycle(6), cycle(8), path(6), grid(3), grid(3, 4), torus(4), torus(5)]


def test_ultrametric_and_symmetry_on_corpus():
    k = 4
    dist = {}
    for i, j in combinations(range(len(CORPUS)), 2):
        dist[i, j] = dist[j, i] = d_gr(CORPUS[i], CORPUS[j], k)
        assert dist[i, j] == d_gr(CORPUS[j], CORPUS[i], k)
    for i in range(len(CORPUS)):
        dist[i, i] = Fraction(0)
    for a in range(len(CORPUS)):
        for b in range(len(CORPUS)):
            for c in range(len(CORPUS)):
                assert dist[a, b] <= max(dist[a, c], dist[c, b])


def test_equal_sets_at_k_imply_equal_below():
    for g, h in combinations(CORPUS, 2):
        for k in range(1, 5):
            if ball_set(g, k) == ball_set(h, k):
                assert all(ball_set(g, j) == ball_set(h, j) for j in range(1, k))


def test_d_cgr():
    g = cycle(6)
    rng = np.random.default_rng(5)
    bits = rng.integers(0, 2, size=(6, 4), dtype=np.uint8)
    lab = Labeling(bits)
    assert d_cgr(g, lab, g, Labeling(bits.copy()), 4) == 0

    flipped = bits.copy()
    flipped[2, 0] ^= 1
    assert d_cgr(g, lab, g, Labeling(flipped), 4) == 1

    deep = bits.copy()
    deep[:, 2] ^= 1
    assert d_cgr(g, lab, g, Labeling(deep), 4) <= Fraction(1, 4)

    with pytest.raises(PreconditionError):
        d_cgr(g, Labeling(bits[:, :2]), g, lab, 3)


def test_bs_distance_examples():
    assert bs_distance(grid(3), grid(3), 2) == 0
    assert bs_distance(cycle(5), cycle(6), 1) == 0
    assert bs_distance(cycle(4), path(4), 1) == Fraction(1, 2)
    assert bs_metric(cycle(4), path(4), 1) == Fraction(1, 4)


@given(st.integers(3, 14), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_profile_weights_sum_to_one(n, k):
    for g in (cycle(n), path(n), grid(2, n)):
        assert ball_profile(g, k).total() == 1


def test_json_round_trips():
    prof = ball_profile(grid(3, 4), 2)
    assert BallProfile.from_json(prof.to_json()) == prof
    assert all(re.fullmatch(r"\d+/\d+", w) for w in prof.to_json()["atoms"].values())
    assert dumps(prof) == dumps(ball_profile(grid(3, 4), 2))
    bs = ball_set(grid(3, 4), 2)
    assert BallSet.from_json(bs.to_json()) == bs
