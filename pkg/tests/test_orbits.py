import math
import warnings

import numpy as np
import pytest

from brake_index.orbits import (
    TrivialOrbitWarning,
    duffing,
    from_spec,
    harmonic,
    linear_bound_check,
    mechanical_period,
    minimal_period,
    orbit_index,
    shoot_brake,
    step_inequalities,
    period_spotcheck,
)
from brake_index.symplectic import ValidationError


@pytest.mark.parametrize("mult,k", [(1, 1), (2, 2), (3, 3)])
def test_harmonic_periods(mult, k):
    orbit = shoot_brake(harmonic(), 2 * math.pi * mult, [1.0])
    assert orbit.residual < 1e-10
    assert minimal_period(orbit)[1] == k


def test_harmonic_brake_index():
    orbit = shoot_brake(harmonic(), 4 * math.pi, [1.0])
    assert orbit_index(orbit, "brake").index == 1


def test_harmonic_spotchecks():
    o4 = shoot_brake(harmonic(), 4 * math.pi, [1.0])
    assert period_spotcheck(o4, "brake").passed
    o6 = shoot_brake(harmonic(), 6 * math.pi, [1.0])
    r = period_spotcheck(o6, "symmetric")
    assert r.applicable and r.passed and r.k == 3


def test_duffing_matches_quadrature():
    from scipy.optimize import brentq

    T = 1.8 * math.pi
    V = lambda q: q**2 / 2 + q**4 / 4
    q_star = brentq(lambda a: mechanical_period(V, a) - T, 0.05, 3.0)
    orbit = shoot_brake(duffing(1.0), T, [0.6])
    assert abs(abs(orbit.q0[0]) - q_star) < 1e-7


def test_step_inequalities_hold_on_quartic():
    H = from_spec({"kind": "radial_quartic", "params": {"n": 1, "a": 0.0}})
    orbit = shoot_brake(H, 3.0, [1.4])
    vals = step_inequalities(orbit, minimal_period(orbit)[1])
    assert vals["l1_bound"] and vals["double_bound"]


def test_orbit_is_reversible():
    orbit = shoot_brake(duffing(1.0), 5.0, [0.8])
    N = np.diag([-1.0, 1.0])
    t = np.linspace(0.1, 4.9, 7)
    assert np.allclose(orbit.at(-t), (N @ orbit.at(t).T).T, atol=1e-8)


def test_trivial_orbit_flagged():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TrivialOrbitWarning)
        orbit = shoot_brake(duffing(1.0), 3.0, [1e-10])
    assert orbit.trivial
    with pytest.raises(ValidationError):
        minimal_period(orbit)


def test_unknown_spec():
    with pytest.raises(ValidationError):
        from_spec({"kind": "nope"})


def test_linear_bound_zero_matrix():
    rep = linear_bound_check(np.zeros((2, 2)), 2.0)
    assert rep.to_dict()["applicable"] in (True, False)
