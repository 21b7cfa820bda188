import math

import numpy as np
from hypothesis import given, strategies as st

from brake_index.lagrangian import i_L, i_omega_L0, i_sqrt, self_test
from brake_index.paths import constant_path, fundamental_solution, path_to, rotation_path
from brake_index.suites import random_b1_path
from brake_index.symplectic import random_symplectic


def test_self_test_anchors():
    assert self_test()


def test_rotation_full_turn():
    assert i_L(rotation_path(2 * math.pi), 0).pair() == (1, 1)


def test_constant_path():
    for n in (1, 2, 3):
        p = constant_path(n)
        assert i_L(p, 0).pair() == (-n, n)
        assert i_L(p, 1).pair() == (-n, n)
        assert i_sqrt(p).pair() == (0, 0)


def test_sqrt_index_of_rotation_three_half_pi():
    assert i_sqrt(rotation_path(1.5 * math.pi)).pair() == (1, 1)


def test_sqrt_index_of_rotation_three_pi_counts_three_crossings():
    assert i_sqrt(rotation_path(3 * math.pi)).index == 3


@given(st.integers(0, 10_000))
def test_squeeze_on_random_paths(seed):
    rng = np.random.default_rng(seed)
    path = fundamental_solution(random_b1_path(rng, 1 + seed % 2, 1.0 + rng.uniform()))
    base = i_L(path, 0).index
    for th in (0.4, 1.2, 2.5):
        assert base <= i_omega_L0(path, th).index <= base + path.n


@given(st.integers(0, 10_000))
def test_orthogonal_endpoint_gives_equal_indices(seed):
    rng = np.random.default_rng(seed)
    from brake_index.suites import _random_unitary_symplectic

    p = path_to(_random_unitary_symplectic(rng, 2))
    assert i_L(p, 0).index == i_L(p, 1).index


def test_nullity_bounded_by_n(rng):
    p = path_to(random_symplectic(2, rng))
    for j in (0, 1):
        assert 0 <= i_L(p, j).nullity <= 2
