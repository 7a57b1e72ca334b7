import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cantorlab.canon import RootedBall, brute_force_isomorphic
from cantorlab.generators import cycle, grid, path, random_regular, torus
from cantorlab.graph import PreconditionError, bfs_distances, build_graph
from cantorlab.labeling import (
    Labeling,
    NotCertified,
    certify_distinct,
    constant_labeling,
    parse_labeling,
    power_greedy_labeling,
    random_labeling,
    require_distinct,
    verify_proper,
)


def test_greedy_on_p3():
    lab = power_greedy_labeling(path(3), 1)
    assert lab.prefix(1) == ["0", "1", "0"]


def test_greedy_single_vertex():
    assert power_greedy_labeling(build_graph(1, []), 3).prefix(1) == ["0"]


def test_greedy_c4_square_is_k4():
    lab = power_greedy_labeling(cycle(4), 2)
    assert lab.depth == 2 and len(set(lab.prefix(2))) == 4


@pytest.mark.parametrize("n", [8, 16, 32, 64])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_greedy_bit_length_independent_of_n(n, r):
    d = 4
    bound = math.ceil(math.log2(d * (d - 1) ** (r - 1) * r + 1))
    assert power_greedy_labeling(grid(n), r).depth <= bound


def test_random_labeling_deterministic():
    g = cycle(10)
    a = random_labeling(g, 8, seed=4)
    assert np.array_equal(a.bits, random_labeling(g, 8, seed=4).bits)


def test_random_64_bit_labels_are_distinct():
    g = random_regular(4, 1000, seed=2)
    lab = random_labeling(g, 64, seed=11)
    assert lab.globally_distinct is not None
    assert len(set(lab.prefix(64))) == 1000


def test_one_bit_labels_on_p3_fail():
    g = path(3)
    lab = random_labeling(g, 1, seed=0)
    assert lab.globally_distinct is None
    x, y = certify_distinct(g, lab, None)
    assert lab.prefix(1)[x] == lab.prefix(1)[y]


def test_constant_labels_on_c4_give_witness():
    w = verify_proper(cycle(4), constant_labeling(4, 3), 1)
    assert isinstance(w, tuple) and bfs_distances(cycle(4), w[0])[w[1]] == 1


def test_depth_is_enforced():
    lab = constant_labeling(3, 2)
    with pytest.raises(PreconditionError):
        lab.prefix(3)
    with pytest.raises(NotCertified):
        require_distinct(path(3), lab, 1)


def _brute_proper(g, lab, r, s):
    """All pairs within r have non-isomorphic s-bit labeled s-balls (permutation oracle)."""
    labels = lab.prefix(s)
    for x, y in combinations(range(g.n), 2):
        d = bfs_distances(g, x)[y]
        if 0 < d <= r:
            a = RootedBall.around(g, x, s, labels)
            b = RootedBall.around(g, y, s, labels)
            if brute_force_isomorphic(a, b):
                return False
    return True


@pytest.mark.parametrize("g,r", [(cycle(7), 1), (path(6), 2), (grid(3), 1), (cycle(8), 2)])
def test_certificates_confirmed_by_brute_force(g, r):
    lab = power_greedy_labeling(g, r)
    s = verify_proper(g, lab, r)
    assert isinstance(s, int) and s <= max(lab.depth, 1)
    assert _brute_proper(g, lab, r, s)
    if s > 1:
        assert not _brute_proper(g, lab, r, s - 1)


@given(st.integers(3, 11), st.integers(1, 3), st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_deeper_prefixes_stay_proper(n, r, seed):
    g = cycle(n)
    lab = random_labeling(g, 6, seed=seed, certify=False)
    s = verify_proper(g, lab, r)
    if isinstance(s, int) and s < lab.depth:
        assert _brute_proper(g, lab, r, s + 1)


def test_distinct_labels_bound_s():
    g = torus(6)
    lab = power_greedy_labeling(g, 3)
    t = certify_distinct(g, lab, 3)
    assert verify_proper(g, lab, 3) <= max(t, 1)


def test_file_round_trip():
    g = cycle(5)
    lab = power_greedy_labeling(g, 2)
    verify_proper(g, lab, 2)
    again = parse_labeling(lab.lines(), lab.sidecar())
    assert np.array_equal(again.bits, lab.bits)
    assert again.proper == lab.proper


def test_from_strings_and_keys():
    lab = Labeling.from_strings(["101", "011"])
    assert lab.prefix_keys(3).tolist() == [5, 3]
    assert lab.prefix_keys(1).tolist() == [1, 0]
