"""
Matrix-level foundations: the structures J and N, symplecticity checks,
the diamond product, basic normal forms, nullities and unit-circle spectra.

Complex quantities (eigenspaces at a unit-circle point) are evaluated on the
real 2x-sized representation ``[[Re, -Im], [Im, Re]]`` so that only real
linear algebra is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_SYMPLECTIC_TOL = 1e-9
DEFAULT_KERNEL_TOL = 1e-8
ANGLE_TOL = 5e-8


class DimensionError(ValueError):
    """Raised when a matrix does not have an even square shape."""


class ValidationError(ValueError):
    """Raised when an input violates a documented precondition."""


def half_dim(M: np.ndarray) -> int:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionError(f"expected an even square matrix, got shape {M.shape}")
    return M.shape[0] // 2


def make_structures(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return the standard ``J = [[0, -I], [I, 0]]`` and ``N = diag(-I, I)``."""
    if n < 1:
        raise ValidationError("n must be a positive integer")
    I = np.eye(n)
    Z = np.zeros((n, n))
    J = np.block([[Z, -I], [I, Z]])
    N = np.block([[-I, Z], [Z, I]])
    return J, N


def standard_J(n: int) -> np.ndarray:
    return make_structures(n)[0]


def standard_N(n: int) -> np.ndarray:
    return make_structures(n)[1]


def symplectic_defect(M: np.ndarray) -> float:
    """Frobenius norm of ``M^T J M - J`` normalized by ``max(1, |M|_F^2)``."""
    n = half_dim(M)
    J = standard_J(n)
    M = np.asarray(M, dtype=float)
    scale = max(1.0, float(np.sum(M * M)))
    return float(np.linalg.norm(M.T @ J @ M - J)) / scale


def is_symplectic(M: np.ndarray, tol: float = DEFAULT_SYMPLECTIC_TOL) -> bool:
    return symplectic_defect(M) <= tol


def require_symplectic(M: np.ndarray, tol: float = 1e-7, what: str = "matrix") -> np.ndarray:
    M = np.asarray(M, dtype=float)
    d = symplectic_defect(M)
    if d > tol:
        raise ValidationError(f"{what} is not symplectic (defect {d:.3e})")
    return M


def blocks(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Split a 2n x 2n matrix into its n x n blocks ``A, B, C, D``."""
    n = half_dim(M)
    return M[:n, :n], M[:n, n:], M[n:, :n], M[n:, n:]


def diamond(M1: np.ndarray, M2: np.ndarray, check: bool = True) -> np.ndarray:
    """Interleave two block matrices so that each keeps its own symplectic pairs."""
    if check:
        require_symplectic(M1, DEFAULT_SYMPLECTIC_TOL, "first factor")
        require_symplectic(M2, DEFAULT_SYMPLECTIC_TOL, "second factor")
    return diamond_blocks(M1, M2)


def diamond_blocks(M1: np.ndarray, M2: np.ndarray) -> np.ndarray:
    """Block interleaving without the symplectic check (used for symmetric matrices)."""
    A1, B1, C1, D1 = blocks(M1)
    A2, B2, C2, D2 = blocks(M2)
    n1, n2 = A1.shape[0], A2.shape[0]
    Z12 = np.zeros((n1, n2))
    Z21 = np.zeros((n2, n1))
    return np.block(
        [
            [A1, Z12, B1, Z12],
            [Z21, A2, Z21, B2],
            [C1, Z12, D1, Z12],
            [Z21, C2, Z21, D2],
        ]
    )


def diamond_power(M: np.ndarray, k: int) -> np.ndarray:
    out = M
    for _ in range(k - 1):
        out = diamond_blocks(out, M)
    return out


def rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class NormalFormSpec:
    """Parameters of one of the basic normal forms D, N1, R, N2."""

    kind: str
    lam: float | None = None
    b: float | tuple[tuple[float, float], tuple[float, float]] | None = None
    theta: float | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "NormalFormSpec":
        b = d.get("b")
        if isinstance(b, list):
            b = tuple(tuple(float(v) for v in row) for row in b)
        return cls(kind=d["kind"], lam=d.get("lambda", d.get("lam")), b=b, theta=d.get("theta"))


def _theta_ok(theta) -> bool:
    if theta is None:
        return False
    t = float(theta) % (2 * np.pi)
    return 0 < t < 2 * np.pi and not np.isclose(t, np.pi)


def normal_form(spec: NormalFormSpec) -> np.ndarray:
    kind = spec.kind
    if kind == "D":
        if spec.lam not in (2, -2, 2.0, -2.0):
            raise ValidationError("D(lambda) requires lambda = +-2")
        lam = float(spec.lam)
        return np.array([[lam, 0.0], [0.0, 1.0 / lam]])
    if kind == "N1":
        if spec.lam not in (1, -1, 1.0, -1.0):
            raise ValidationError("N1(lambda, b) requires lambda = +-1")
        if spec.b not in (1, -1, 0, 1.0, -1.0, 0.0):
            raise ValidationError("N1(lambda, b) requires b in {-1, 0, 1}")
        lam = float(spec.lam)
        return np.array([[lam, float(spec.b)], [0.0, lam]])
    if kind == "R":
        if not _theta_ok(spec.theta):
            raise ValidationError("R(theta) requires theta in (0, pi) U (pi, 2 pi)")
        return rotation(float(spec.theta))
    if kind == "N2":
        if not _theta_ok(spec.theta):
            raise ValidationError("N2 requires theta in (0, pi) U (pi, 2 pi)")
        b = np.asarray(spec.b, dtype=float)
        if b.shape != (2, 2):
            raise ValidationError("N2 requires a 2x2 block b")
        if np.isclose(b[0, 1], b[1, 0]):
            raise ValidationError("N2 requires b2 != b3")
        R = rotation(float(spec.theta))
        M = np.block([[R, b], [np.zeros((2, 2)), R]])
        return require_symplectic(M, DEFAULT_SYMPLECTIC_TOL, "N2 normal form")
    raise ValidationError(f"unknown normal form kind {kind!r}")


def n2_block(theta: float, b1: float, b2: float, b3: float) -> tuple[tuple[float, float], tuple[float, float]]:
    """Complete ``b`` so that ``[[R(theta), b], [0, R(theta)]]`` is symplectic.

    Symplecticity forces ``R^T b`` symmetric, i.e. ``cos(theta)(b2 - b3) = -sin(theta)(b1 + b4)``.
    """
    c, s = np.cos(theta), np.sin(theta)
    b4 = -c * (b2 - b3) / s - b1
    return ((float(b1), float(b2)), (float(b3), float(b4)))


def realify(M: np.ndarray, omega: complex) -> np.ndarray:
    """Real representation of ``M - omega I`` acting on ``(Re v, Im v)``."""
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    c, s = float(np.real(omega)), float(np.imag(omega))
    I = np.eye(k)
    return np.block([[M - c * I, s * I], [-s * I, M - c * I]])


def kernel_dim(A: np.ndarray, tol: float = DEFAULT_KERNEL_TOL, scale: float | None = None) -> int:
    """Number of singular values below ``tol * scale`` (scale defaults to max(1, sigma_max))."""
    A = np.asarray(A)
    if A.size == 0:
        return 0
    sv = np.linalg.svd(A, compute_uv=False)
    if scale is None:
        scale = max(1.0, float(sv[0]) if sv.size else 1.0)
    rank = int(np.sum(sv > tol * scale))
    return min(A.shape) - rank + max(0, A.shape[1] - A.shape[0])


def _orth(X: np.ndarray) -> np.ndarray:
    Q, _ = np.linalg.qr(np.asarray(X))
    return Q


def principal_sines(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Sines of the principal angles between ``span(X)`` and ``span(Y)``, ascending."""
    Qx, Qy = _orth(X), _orth(Y)
    R = Qy - Qx @ (Qx.conj().T @ Qy)
    return np.sort(np.linalg.svd(R, compute_uv=False))


def subspace_intersection_dim(X: np.ndarray, Y: np.ndarray, tol: float = ANGLE_TOL) -> int:
    """Dimension of ``span(X) ∩ span(Y)``: principal angles with sine below ``tol``."""
    return int(np.sum(principal_sines(X, Y) < tol))


def nu_omega(M: np.ndarray, omega: complex, tol: float = ANGLE_TOL) -> int:
    """Complex dimension of ``ker(M - omega I)`` for ``|omega| = 1``.

    Counted as ``dim Gr(M) ∩ Gr(omega I)``; principal angles between graphs do
    not degrade with the norm of ``M`` the way a singular-value threshold does.
    """
    if abs(abs(omega) - 1.0) > 1e-12:
        raise ValidationError("omega must lie on the unit circle")
    M = np.asarray(M, dtype=float)
    k = M.shape[0]
    I = np.eye(k)
    if abs(np.imag(omega)) == 0.0:
        return subspace_intersection_dim(np.vstack([I, M]), np.vstack([I, np.real(omega) * I]), tol)
    return subspace_intersection_dim(np.vstack([I, M]).astype(complex), np.vstack([I, omega * I]), tol)


def nu_lagrangian(M: np.ndarray, j: int, tol: float = ANGLE_TOL) -> int:
    """``dim(M L_j ∩ L_j)`` with ``L_0 = {0} x R^n`` and ``L_1 = R^n x {0}``.

    Equals ``n - rank`` of the upper-right (j=0) or lower-left (j=1) block.
    """
    if j not in (0, 1):
        raise ValidationError("j must be 0 or 1")
    M = np.asarray(M, dtype=float)
    n = half_dim(M)
    L = np.eye(2 * n)[:, n:] if j == 0 else np.eye(2 * n)[:, :n]
    return subspace_intersection_dim(M @ L, L, tol)


@dataclass(frozen=True)
class UnitEigen:
    omega: complex
    multiplicity: int
    nullity: int


@dataclass(frozen=True)
class UnitSpectrum:
    entries: tuple[UnitEigen, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def angles(self) -> list[float]:
        return [float(np.angle(e.omega)) % (2 * np.pi) for e in self.entries]


def unit_spectrum(M: np.ndarray, tol: float = 1e-6, cluster_tol: float = 1e-4) -> UnitSpectrum:
    """Unit-circle eigenvalues of ``M`` grouped into clusters, with multiplicities and nullities.

    Jordan blocks split eigenvalues by roughly ``eps**(1/k)``; ``cluster_tol`` must
    dominate that spread for defective eigenvalues to be grouped correctly.
    """
    M = np.asarray(M, dtype=float)
    ev = np.linalg.eigvals(M)
    # Jordan blocks move eigenvalues off the circle by O(sqrt(eps)); accept within cluster_tol
    on_circle = ev[np.abs(np.abs(ev) - 1.0) <= max(tol, cluster_tol)]
    angles = np.sort(np.angle(on_circle) % (2 * np.pi))
    groups: list[list[float]] = []
    for a in angles:
        if groups and _angle_dist(a, groups[-1][-1]) <= cluster_tol:
            groups[-1].append(a)
        else:
            groups.append([a])
    if len(groups) > 1 and _angle_dist(groups[0][0], groups[-1][-1]) <= cluster_tol:
        groups[0] = groups.pop() + groups[0]
    entries = []
    for g in groups:
        center = np.angle(np.mean(np.exp(1j * np.asarray(g))))
        omega = complex(np.exp(1j * center))
        if abs(omega.imag) < cluster_tol:
            omega = complex(np.sign(omega.real), 0.0)
        nul = nu_omega(M, omega, tol=max(ANGLE_TOL, cluster_tol * 1e-2))
        entries.append(UnitEigen(omega, len(g), nul))
    entries.sort(key=lambda e: (float(np.angle(e.omega)) % (2 * np.pi)))
    return UnitSpectrum(tuple(entries))


def _angle_dist(a: float, b: float) -> float:
    d = abs(a - b) % (2 * np.pi)
    return min(d, 2 * np.pi - d)


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random symplectic matrix as a product of exponentials of Hamiltonian matrices."""
    from scipy.linalg import expm

    J = standard_J(n)
    M = np.eye(2 * n)
    for _ in range(2):
        S = rng.normal(size=(2 * n, 2 * n)) * scale
        S = 0.5 * (S + S.T)
        M = M @ expm(J @ S)
    return M
