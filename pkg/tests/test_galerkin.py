import math

import numpy as np
import pytest

from brake_index.galerkin import (
    assemble_A,
    assemble_B,
    block_positivity,
    extended_coefficients,
    frequencies,
    index_from_galerkin,
    monotonicity_suite,
)
from brake_index.lagrangian import i_L, i_sqrt
from brake_index.paths import CoefficientPath, fundamental_solution
from brake_index.suites import random_b1_path


@pytest.mark.parametrize("B,tau,family,want", [
    (np.eye(2), 1.5 * math.pi, "sqrt", (1, 1)),
    (np.eye(2), 2 * math.pi, "L0", (1, 1)),
    (np.eye(2), 0.5 * math.pi, "L0", (0, 0)),
    (np.zeros((4, 4)), 1.0, "L0", (-2, 2)),
    (np.zeros((2, 2)), 1.0, "sqrt", (0, 0)),
])
def test_constant_anchors(B, tau, family, want):
    res = index_from_galerkin(CoefficientPath.constant(B, tau), family)
    assert res.record.pair() == want


def test_frequencies_ordered_by_magnitude():
    for space in ("E", "check", "hat"):
        f = np.abs(frequencies(space, 6))
        assert np.all(np.diff(f) >= 0)


def test_forms_symmetric(rng):
    B = random_b1_path(rng, 2, 1.0)
    for fam in ("L0", "L1", "sqrt"):
        ext, P, space = extended_coefficients(B, fam)
        A = assemble_A(space, P, 5, 2)
        Bm = assemble_B(ext, space, P, 5)
        assert np.allclose(A, A.T) and np.allclose(Bm, Bm.T)


def test_oracle_agrees_with_path_engine(rng):
    for _ in range(3):
        B = random_b1_path(rng, 2, 1.0 + rng.uniform())
        path = fundamental_solution(B)
        assert index_from_galerkin(B, "L0").record.pair() == i_L(path, 0).pair()
        assert index_from_galerkin(B, "L1").record.pair() == i_L(path, 1).pair()
        assert index_from_galerkin(B, "sqrt").record.pair() == i_sqrt(path).pair()


def test_sweep_csv_header():
    res = index_from_galerkin(CoefficientPath.constant(np.eye(2), 1.0), "L0")
    assert res.sweep_csv().splitlines()[0] == "m,d,plus,zero,minus"
    assert res.m_stable <= 256


def test_monotonicity_strict(rng):
    B = random_b1_path(rng, 1, 1.2)
    bump = random_b1_path(rng, 1, 1.2, psd=True)
    grid = np.union1d(B.grid, bump.grid)
    upper = CoefficientPath(grid, B(grid) + bump(grid))
    assert all(r.holds for r in monotonicity_suite(upper, B))


def test_block_positivity(rng):
    rep = block_positivity(random_b1_path(rng, 2, 1.5, psd=True))
    assert rep.holds
