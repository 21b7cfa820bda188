import math
from fractions import Fraction

import numpy as np
import pytest

from brake_index.omega import (
    check_omega_bounds,
    i_nu_omega,
    omega_profile,
    splitting_numbers,
    table_splitting,
)
from brake_index.paths import fundamental_solution, path_to, rotation_path
from brake_index.suites import random_b1_path
from brake_index.symplectic import NormalFormSpec, diamond, normal_form


def _nf(spec):
    return normal_form(NormalFormSpec.from_dict(spec))


@pytest.mark.parametrize("spec,theta,want", [
    ({"kind": "N1", "lam": 1, "b": 1}, 0.0, (1, 1)),
    ({"kind": "N1", "lam": 1, "b": -1}, 0.0, (0, 0)),
    ({"kind": "N1", "lam": -1, "b": -1}, math.pi, (1, 1)),
    ({"kind": "R", "theta": 1.0}, 1.0, (0, 1)),
    ({"kind": "R", "theta": 1.0}, 2 * math.pi - 1.0, (1, 0)),
])
def test_splitting_table_rows(spec, theta, want):
    M = _nf(spec)
    assert splitting_numbers(M, theta, parts=[spec]).pair() == want


def test_hyperbolic_endpoint_has_no_splitting():
    M = _nf({"kind": "D", "lam": 2})
    for th in (0.0, 1.0, math.pi):
        assert splitting_numbers(M, th).pair() == (0, 0)


def test_diamond_additivity():
    a, b = {"kind": "N1", "lam": 1, "b": 1}, {"kind": "R", "theta": 2.0}
    M = diamond(_nf(a), _nf(b))
    for th in (0.0, 2.0, 2 * math.pi - 2.0):
        got = splitting_numbers(M, th, parts=[a, b]).pair()
        assert got == table_splitting([a, b], th)


def test_turns_and_radians_agree():
    p = rotation_path(3.0)
    assert i_nu_omega(p, Fraction(1, 3)) == i_nu_omega(p, 2 * math.pi / 3)


def test_profile_cells_match_direct(rng):
    path = fundamental_solution(random_b1_path(rng, 2, 2.5))
    prof = omega_profile(path, resolution=48)
    for a, b, v in prof.cells:
        assert i_nu_omega(path, 0.5 * (a + b)).index == v


def test_profile_csv_header():
    assert omega_profile(rotation_path(1.0), 16).to_csv().startswith("theta_start,theta_end,index\n")


def test_omega_bounds_on_rotation_iterate():
    p = rotation_path(2.5)
    for w in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)):
        assert check_omega_bounds(p, w).holds


def test_hyperbolic_profile_constant(rng):
    p = path_to(_nf({"kind": "D", "lam": -2}))
    vals = {v for *_, v in omega_profile(p, 24).cells}
    assert len(vals) == 1
