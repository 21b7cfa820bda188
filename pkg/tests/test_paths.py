import numpy as np
import pytest
from scipy.linalg import expm

from brake_index.paths import (
    CoefficientPath,
    fundamental_solution,
    path_to,
    reversible_extend,
    rotation_path,
)
from brake_index.suites import random_b1_path
from brake_index.symplectic import is_symplectic, random_symplectic, standard_J, standard_N


def test_constant_generator_matches_matrix_exponential():
    B = np.diag([1.0, 0.0])
    path = fundamental_solution(CoefficientPath.constant(B, 1.0))
    assert np.allclose(path.end, expm(standard_J(1) @ B), atol=1e-9)


def test_rotation_path_endpoint():
    p = rotation_path(np.pi / 2, 2)
    assert np.allclose(p.end, standard_J(2), atol=1e-12)


def test_random_paths_satisfy_b1(rng):
    for psd in (False, True):
        B = random_b1_path(rng, 2, 1.3, psd=psd)
        assert B.satisfies_b1()
        if psd:
            assert B.is_semipositive()


def test_fundamental_solution_stays_symplectic(rng):
    B = random_b1_path(rng, 2, 2.0)
    path = fundamental_solution(B)
    assert all(is_symplectic(M, 1e-7) for M in path.samples[:: max(1, len(path.grid) // 16)])


def test_reversible_extension_symmetry(rng):
    B = random_b1_path(rng, 1, 1.0)
    ext = reversible_extend(B, "half")
    N = standard_N(1)
    for t in (0.1, 0.4, 0.9):
        assert np.allclose(ext(1.0 + t), N @ B(1.0 - t) @ N, atol=1e-12)


def test_path_to_reaches_target(rng):
    M = random_symplectic(2, rng)
    p = path_to(M)
    assert np.allclose(p.samples[0], np.eye(4)) and np.allclose(p.end, M)


def test_coefficient_path_roundtrip(rng):
    B = random_b1_path(rng, 2, 1.5)
    d = B.to_dict()
    again = CoefficientPath(np.array(d["grid"]), np.array(d["B"]), d["periodic"])
    assert np.array_equal(again.values, B.values)


def test_coefficient_path_rejects_nonsymmetric():
    with pytest.raises(Exception):
        CoefficientPath(np.array([0.0, 1.0]), np.array([[[0, 1], [0, 0]], [[0, 1], [0, 0]]], float))
