import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from brake_index.symplectic import (
    NormalFormSpec,
    ValidationError,
    diamond,
    is_symplectic,
    normal_form,
    nu_lagrangian,
    nu_omega,
    random_symplectic,
    rotation,
    standard_J,
    standard_N,
)


def test_structures():
    J, N = standard_J(2), standard_N(2)
    assert np.allclose(J @ J, -np.eye(4))
    assert np.allclose(N @ N, np.eye(4))
    assert np.allclose(N @ J, -J @ N)


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_random_symplectic_is_symplectic(seed, n):
    M = random_symplectic(n, np.random.default_rng(seed))
    assert is_symplectic(M)


@given(st.integers(0, 10_000))
def test_diamond_is_symplectic(seed):
    rng = np.random.default_rng(seed)
    M = diamond(random_symplectic(1, rng), random_symplectic(2, rng))
    assert M.shape == (6, 6) and is_symplectic(M)


def test_nullities_of_identity():
    I = np.eye(4)
    assert nu_lagrangian(I, 0) == 2 and nu_lagrangian(I, 1) == 2
    assert nu_omega(I, 1.0) == 4
    assert nu_omega(I, -1.0) == 0


def test_rotation_nullity_at_its_eigenvalue():
    th = 0.7
    assert nu_omega(rotation(th), complex(math.cos(th), math.sin(th))) == 1
    assert nu_omega(rotation(th), 1.0) == 0


@pytest.mark.parametrize("spec", [
    {"kind": "D", "lam": 2},
    {"kind": "N1", "lam": -1, "b": 1},
    {"kind": "R", "theta": 1.1},
])
def test_normal_forms_are_symplectic(spec):
    assert is_symplectic(normal_form(NormalFormSpec.from_dict(spec)))


def test_normal_form_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        normal_form(NormalFormSpec("D", lam=3))
    with pytest.raises(ValidationError):
        normal_form(NormalFormSpec("R", theta=math.pi))
