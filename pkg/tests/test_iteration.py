from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from brake_index.iteration import (
    IndexCache,
    bott_L0,
    bott_periodic,
    bott_sqrt,
    iterate_brake,
    monotonicity_check,
    double_iterate_relation,
    roots_of,
)
from brake_index.lagrangian import i_L
from brake_index.paths import CoefficientPath, fundamental_solution, rotation_path
from brake_index.suites import random_b1_path


def test_roots_of_unity():
    assert roots_of(Fraction(0), 3) == [Fraction(0), Fraction(1, 3), Fraction(2, 3)]


def test_brake_iterate_of_rotation_is_longer_rotation():
    p = rotation_path(1.0)
    it = iterate_brake(p, 3)
    assert it.grid[-1] == pytest.approx(3.0)
    assert np.allclose(it.end, rotation_path(3.0).end, atol=1e-8)


@given(st.integers(0, 10_000))
def test_bott_formulas_small(seed):
    rng = np.random.default_rng(seed)
    path = fundamental_solution(random_b1_path(rng, 1, 0.5 + 2 * rng.uniform()))
    cache = IndexCache(path)
    for k in (1, 2, 3):
        assert bott_L0(path, k, cache).agree
        assert bott_sqrt(path, k, cache).agree
    assert bott_periodic(path, Fraction(1, 2), 2).agree


def test_double_iterate_relation_constant():
    path = fundamental_solution(CoefficientPath.constant(np.eye(2), 2.0))
    lhs, rhs = double_iterate_relation(path)
    assert lhs == rhs


def test_monotone_in_iteration_count(rng):
    B = random_b1_path(rng, 1, 1.5, psd=True)
    assert monotonicity_check(B, 3, 1, "sqrt").holds
    assert monotonicity_check(B, 2, 2, "L0").holds


def test_report_serializes():
    path = rotation_path(1.2)
    d = bott_L0(path, 2).to_dict()
    assert d["agree"] and d["identity"]
