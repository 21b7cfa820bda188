import numpy as np
import pytest

from brake_index.paths import fundamental_solution, rotation_path
from brake_index.signature import constancy_check, index_difference, m_eps, sgn_m_eps
from brake_index.suites import random_b1_path
from brake_index.symplectic import random_symplectic, rotation


def test_m_eps_symmetric(rng):
    M = m_eps(random_symplectic(2, rng), 1e-3)
    assert np.allclose(M, M.T)


@pytest.mark.parametrize("theta", [0.3, 1.7, 4.0])
def test_rotation_signature_zero(theta):
    assert sgn_m_eps(rotation(theta)).signature == 0


@pytest.mark.parametrize("b", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("sign", [1, -1])
def test_shear_signatures(b, sign):
    cases = {
        (1, b, 0, 1): 0,
        (1, 0, -b, 1): 0,
        (1, -b, 0, 1): 2,
        (1, 0, b, 1): -2,
        (2, -1, -1, 1): 2,
    }
    for entries, want in cases.items():
        P = sign * np.array(entries, float).reshape(2, 2)
        assert sgn_m_eps(P).signature == want


def test_full_turn_difference_is_zero():
    p = rotation_path(2 * np.pi)
    assert index_difference(p, "bare") == 0
    assert index_difference(p, "plus-nullity") == 0


def test_constancy_along_rotation_arc():
    samples = np.stack([rotation(0.7 + 0.01 * k) for k in range(20)])
    assert constancy_check(samples)


def test_difference_matches_engine(rng):
    from brake_index.lagrangian import i_L

    for _ in range(5):
        path = fundamental_solution(random_b1_path(rng, 2, 2.0))
        assert index_difference(path) == i_L(path, 0).index - i_L(path, 1).index
