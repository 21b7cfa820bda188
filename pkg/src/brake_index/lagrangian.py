"""
Lagrangian intersection counts and the boundary-value Maslov-type indices.

The intersection number of a Lagrangian pair (V, W(t)) is computed from the
winding of ``det(Z_V^* Z_W)^2`` where ``Z = X + iY`` is the unitary matrix of
an orthonormal frame in symplectically standard coordinates.  Eigen-angles of
``G G^T`` at the two endpoints fix the integer part; eigen-angles sitting on
zero are shifted off it in the direction selected once by calibration.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .paths import SymplecticPath, constant_path, rotation_path
from .symplectic import (
    ANGLE_TOL,
    ValidationError,
    nu_lagrangian,
    nu_omega,
    standard_J,
    subspace_intersection_dim,
)

SNAP_TOL = 2 * ANGLE_TOL  # eigen-angles of G G^T are twice the principal angles
ISOTROPY_TOL = 1e-10


class UndersampledPathError(RuntimeError):
    """Consecutive samples are too far apart to follow the winding."""


class CalibrationError(RuntimeError):
    """No endpoint convention reproduces the anchor values."""


class DegenerateCrossingError(RuntimeError):
    def __init__(self, message: str, event: "CrossingEvent | None" = None):
        super().__init__(message)
        self.event = event


@dataclass(frozen=True)
class LagrangianFrame:
    """Column frame of a Lagrangian subspace of ``(R^{2m}, K)``."""

    columns: np.ndarray
    structure: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        K = np.asarray(self.structure, dtype=float)
        D, m = cols.shape
        if K.shape != (D, D) or D != 2 * m:
            raise ValidationError("frame must be 2m x m for a 2m-dimensional structure")
        if np.linalg.matrix_rank(cols) != m:
            raise ValidationError("frame columns are rank deficient")
        iso = np.max(np.abs(cols.T @ K @ cols)) / max(1.0, np.max(np.abs(cols)) ** 2)
        if iso > ISOTROPY_TOL:
            raise ValidationError(f"frame is not isotropic (defect {iso:.2e})")
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "structure", K)

    @property
    def n(self) -> int:
        return self.columns.shape[1] // 2


def product_structure(n: int) -> np.ndarray:
    """``(-J) (+) J`` on ``R^{2n} (+) R^{2n}``."""
    J = standard_J(n)
    Z = np.zeros_like(J)
    return np.block([[-J, Z], [Z, J]])


def graph_columns(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim == 3:
        k = M.shape[1]
        eye = np.broadcast_to(np.eye(k), M.shape)
        return np.concatenate([eye, M], axis=1)
    return np.vstack([np.eye(M.shape[0]), M])


def graph_frame(M: np.ndarray) -> LagrangianFrame:
    """``Gr(M) = {(x, Mx)}`` as a frame in the product space."""
    return LagrangianFrame(graph_columns(M), product_structure(M.shape[0] // 2))


def lagrangian_basis(n: int, j: int) -> np.ndarray:
    """Columns spanning ``L0 = {0} x R^n`` (j=0) or ``L1 = R^n x {0}`` (j=1)."""
    if j not in (0, 1):
        raise ValidationError("j must be 0 or 1")
    E = np.eye(2 * n)
    return E[:, n:] if j == 0 else E[:, :n]


def product_frame(A: np.ndarray, B: np.ndarray) -> LagrangianFrame:
    """``span(A) x span(B)`` inside the product space."""
    n = A.shape[0] // 2
    Z = np.zeros_like(A)
    return LagrangianFrame(np.block([[A, Z], [Z, B]]), product_structure(n))


def v_frame(n: int, j: int) -> LagrangianFrame:
    """``V1 = L0 x L0`` for j=0, ``V2 = L1 x L1`` for j=1."""
    L = lagrangian_basis(n, j)
    return product_frame(L, L)


def rotation_exp(theta: float, n: int) -> np.ndarray:
    """``exp(theta J) = cos(theta) I + sin(theta) J``."""
    return math.cos(theta) * np.eye(2 * n) + math.sin(theta) * standard_J(n)


def v_omega_frame(n: int, theta: float) -> LagrangianFrame:
    """``L0 x exp(theta J) L0``."""
    L0 = lagrangian_basis(n, 0)
    return product_frame(L0, rotation_exp(theta, n) @ L0)


# ---------------------------------------------------------------- engine


@functools.lru_cache(maxsize=32)
def _standardizer(K_bytes: bytes, D: int) -> np.ndarray:
    K = np.frombuffer(K_bytes).reshape(D, D)
    if np.max(np.abs(K @ K + np.eye(D))) > 1e-12 or np.max(np.abs(K + K.T)) > 1e-12:
        raise ValidationError("structure must be orthogonal with K^2 = -I")
    # an orthonormal K-Lagrangian frame: the K-isotropic half of a complex basis
    m = D // 2
    X = _orthonormal_lagrangian(K, m)
    return np.hstack([X, K @ X])


def _orthonormal_lagrangian(K: np.ndarray, m: int) -> np.ndarray:
    cols: list[np.ndarray] = []
    basis = np.eye(K.shape[0])
    for e in basis:
        v = e.copy()
        for c in cols:
            v -= (c @ v) * c
            Kc = K @ c
            v -= (Kc @ v) * Kc
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            cols.append(v / norm)
        if len(cols) == m:
            break
    return np.column_stack(cols)


def _unitaries(frames: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Unitary ``X + iY`` of orthonormalized frames in standard coordinates."""
    U = T.T @ frames
    Q, _ = np.linalg.qr(U)
    m = Q.shape[-1]
    return Q[..., :m, :] + 1j * Q[..., m:, :]


@dataclass(frozen=True)
class Convention:
    orientation: int  # +1 counterclockwise winding counts positive
    snap_high: bool  # eigen-angles on zero read as 2*pi (True) or 0 (False)


def _endpoint_angles(G: np.ndarray, conv: Convention, snap_tol: float) -> np.ndarray:
    lam = np.linalg.eigvals(G @ G.T)
    ang = np.mod(conv.orientation * np.angle(lam), 2 * np.pi)
    near = (ang < snap_tol) | (ang > 2 * np.pi - snap_tol)
    ang[near] = 2 * np.pi if conv.snap_high else 0.0
    if not conv.snap_high:
        ang[ang >= 2 * np.pi] = 0.0
    return ang


def _raw_count(
    V: np.ndarray,
    W: np.ndarray,
    K: np.ndarray,
    conv: Convention,
    snap_tol: float = SNAP_TOL,
) -> tuple[int, int, int]:
    """Signed count plus the number of snapped eigen-angles at each end."""
    D = K.shape[0]
    T = _standardizer(np.ascontiguousarray(K, dtype=float).tobytes(), D)
    ZV = _unitaries(V, T)
    # a real triangular factor only rescales det by a positive number after squaring,
    # so the winding can be read off unorthonormalized frames
    Wt = T.T @ W
    m = Wt.shape[-1]
    det = np.linalg.det(ZV.conj().T @ (Wt[:, :m, :] + 1j * Wt[:, m:, :]))
    phase = conv.orientation * np.angle(det**2)
    steps = np.diff(phase)
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    if steps.size and np.max(np.abs(steps)) > 0.5 * np.pi:
        k = int(np.argmax(np.abs(steps)))
        raise UndersampledPathError(f"winding step {steps[k]:.3f} rad at sample {k}; refine the grid")
    G = ZV.conj().T @ _unitaries(W[[0, -1]], T)
    a = _endpoint_angles(G[0], conv, snap_tol)
    b = _endpoint_angles(G[1], conv, snap_tol)
    total = (np.sum(a) - np.sum(b) + np.sum(steps)) / (2 * np.pi)
    count = int(round(total))
    if abs(total - count) > 1e-5:
        raise UndersampledPathError(f"non-integral intersection count {total:.6f}")
    snapped = lambda ang: int(np.sum((ang == 0.0) | (ang == 2 * np.pi)))
    return count, snapped(a), snapped(b)


def _calibration_candidates():
    for orientation in (1, -1):
        for snap_high in (True, False):
            yield Convention(orientation, snap_high)


def _anchor_values(conv: Convention) -> dict[str, int]:
    K = product_structure(1)
    V1 = v_frame(1, 0).columns
    Vq = v_omega_frame(1, 0.5 * math.pi).columns
    const = constant_path(2, 1.0)
    K2 = product_structure(2)
    out = {
        "const_L0_n2": _raw_count(v_frame(2, 0).columns, graph_columns(const.samples), K2, conv)[0] - 2,
        "rot_2pi_L0": _raw_count(V1, graph_columns(rotation_path(2 * math.pi).samples), K, conv)[0] - 1,
        "rot_half_pi_L0": _raw_count(V1, graph_columns(rotation_path(0.5 * math.pi).samples), K, conv)[0] - 1,
        "const_sqrt": _raw_count(Vq, graph_columns(constant_path(1).samples), K, conv)[0],
        "rot_3half_pi_sqrt": _raw_count(Vq, graph_columns(rotation_path(1.5 * math.pi).samples), K, conv)[0],
    }
    return out


ANCHORS = {
    "const_L0_n2": -2,
    "rot_2pi_L0": 1,
    "rot_half_pi_L0": 0,
    "const_sqrt": 0,
    "rot_3half_pi_sqrt": 1,
}


@functools.lru_cache(maxsize=1)
def calibrated_convention() -> Convention:
    """The unique endpoint convention reproducing every anchor in ``ANCHORS``."""
    good = [c for c in _calibration_candidates() if _anchor_values(c) == ANCHORS]
    if len(good) != 1:
        raise CalibrationError(f"{len(good)} conventions satisfy the anchors")
    return good[0]


def self_test() -> dict[str, int]:
    """Recompute the anchors under the calibrated convention; raise on mismatch."""
    values = _anchor_values(calibrated_convention())
    if values != ANCHORS:
        raise CalibrationError(f"anchor mismatch: {values}")
    return values


def mu_clm(V, W, structure: np.ndarray | None = None, interval: tuple[int, int] | None = None) -> int:
    """Intersection count of a fixed Lagrangian ``V`` with a sampled path ``W``.

    Parameters
    ----------
    V : LagrangianFrame or ndarray
        Fixed frame, shape ``(2m, m)``.
    W : ndarray
        Frames of the moving subspace, shape ``(K, 2m, m)``.
    structure : ndarray, optional
        The ambient structure; taken from ``V`` when it is a ``LagrangianFrame``.
    interval : tuple of int, optional
        Sample index range ``[i0, i1]`` (inclusive).
    """
    if isinstance(V, LagrangianFrame):
        structure = V.structure if structure is None else structure
        V = V.columns
    if structure is None:
        raise ValidationError("structure required for a bare frame")
    W = np.asarray(W, dtype=float)
    if interval is not None:
        i0, i1 = interval
        W = W[i0 : i1 + 1]
    if W.shape[0] < 2:
        return 0
    return _raw_count(np.asarray(V, dtype=float), W, np.asarray(structure, dtype=float), calibrated_convention())[0]


def mu_graph(V: LagrangianFrame, path: SymplecticPath) -> int:
    return mu_clm(V, graph_columns(path.samples))


# ---------------------------------------------------------------- records


@dataclass(frozen=True)
class IndexRecord:
    family: str
    index: int
    nullity: int
    theta: float | None = None
    turns: Fraction | None = field(default=None, compare=False)

    @property
    def omega(self) -> complex | None:
        return None if self.theta is None else complex(math.cos(self.theta), math.sin(self.theta))

    def pair(self) -> tuple[int, int]:
        return self.index, self.nullity

    def to_dict(self) -> dict:
        w = self.omega
        return {
            "family": self.family,
            "omega": None if w is None else {"re": w.real, "im": w.imag, "theta": self.theta},
            "index": self.index,
            "nullity": self.nullity,
        }


def i_L(path: SymplecticPath, j: int) -> IndexRecord:
    """``i_{L_j}`` and ``nu_{L_j}`` of a path."""
    n = path.n
    count = mu_graph(v_frame(n, j), path)
    return IndexRecord(f"L{j}", count - n, nu_lagrangian(path.end, j))


def nu_omega_L0(M: np.ndarray, theta: float, tol: float = ANGLE_TOL) -> int:
    """``dim(M L0 cap exp(theta J) L0)``."""
    n = M.shape[0] // 2
    L0 = lagrangian_basis(n, 0)
    return subspace_intersection_dim(M @ L0, rotation_exp(theta, n) @ L0, tol)


def i_omega_L0(path: SymplecticPath, theta: float) -> IndexRecord:
    """The rotated index ``i_omega^{L0}`` for ``omega = exp(i theta)``, ``0 < theta < pi``."""
    if not 0.0 < theta < math.pi:
        raise ValidationError("theta must lie in (0, pi)")
    n = path.n
    count = mu_graph(v_omega_frame(n, theta), path)
    return IndexRecord("omega-L0", count, nu_omega_L0(path.end, theta), theta=theta)


def i_sqrt(path: SymplecticPath) -> IndexRecord:
    return i_omega_L0(path, 0.5 * math.pi)


# ---------------------------------------------------------------- crossings


@dataclass(frozen=True)
class CrossingEvent:
    t: float
    dimension: int
    form_signature: tuple[int, int, int]
    location: str

    @property
    def signature(self) -> int:
        return self.form_signature[0] - self.form_signature[2]


def _overlap(V: np.ndarray, M: np.ndarray) -> np.ndarray:
    W = graph_columns(M)
    Qv, _ = np.linalg.qr(V)
    Qw, _ = np.linalg.qr(W)
    return np.hstack([Qv, Qw])


def _sigma_min(V: np.ndarray, M: np.ndarray) -> float:
    return float(np.linalg.svd(_overlap(V, M), compute_uv=False)[-1])


def locate_crossing(path: SymplecticPath, V: np.ndarray, lo: float, hi: float, tol: float = 1e-10) -> float:
    """Crossing time in ``[lo, hi]``: root of ``det[V, Gr]`` if it changes sign, else argmin of the
    smallest singular value."""
    f = lambda t: float(np.linalg.det(_overlap(V, path.at(t))))
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi < 0:
        return float(brentq(f, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps))
    res = minimize_scalar(lambda t: _sigma_min(V, path.at(t)), bounds=(lo, hi), method="bounded",
                          options={"xatol": tol})
    return float(res.x)


def crossing_form(path: SymplecticPath, V: np.ndarray, t: float, tol: float = 1e-6) -> tuple[int, int, int, int]:
    """Inertia ``(m+, m0, m-)`` and dimension of the crossing form at ``t``.

    The form is ``x -> <J gamma(t) x, gamma'(t) x>`` on graph vectors lying in ``V``,
    with ``gamma'`` from central differences of step ``1e-6 tau``.
    """
    n = path.n
    J = standard_J(n)
    M = path.at(t)
    h = 1e-6 * path.tau
    lo, hi = max(path.t0, t - h), min(path.t0 + path.tau, t + h)
    dM = (path.at(hi) - path.at(lo)) / (hi - lo)
    A = np.hstack([V, -graph_columns(M)])
    _, s, vt = np.linalg.svd(A)
    scale = max(1.0, s[0])
    null = vt[np.sum(s > tol * scale):].T if s.size == A.shape[1] else vt.T
    k = V.shape[1]
    X = null[k:, :]  # graph coordinates x of intersection vectors (x, Mx)
    dim = X.shape[1]
    if dim == 0:
        return 0, 0, 0, 0
    Q = X.T @ (J @ M).T @ dM @ X
    Q = 0.5 * (Q + Q.T)
    ev = np.linalg.eigvalsh(Q)
    thr = 1e-6 * max(1.0, float(np.max(np.abs(ev))))
    return int(np.sum(ev > thr)), int(np.sum(np.abs(ev) <= thr)), int(np.sum(ev < -thr)), dim


def crossing_events(path: SymplecticPath, V: LagrangianFrame, threshold: float = 1e-3) -> list[CrossingEvent]:
    """Crossings of ``Gr(gamma)`` with ``V``, localized and classified."""
    Vc = V.columns
    smin = np.array([_sigma_min(Vc, M) for M in path.samples])
    events = []
    end_tol = 1e-9 * max(1.0, path.tau)
    t_end = path.grid[-1]
    for i in range(smin.size):
        left = smin[i - 1] if i > 0 else np.inf
        right = smin[i + 1] if i + 1 < smin.size else np.inf
        if smin[i] > threshold or smin[i] > left or smin[i] >= right:
            continue
        lo = path.grid[max(i - 1, 0)]
        hi = path.grid[min(i + 1, smin.size - 1)]
        if i == 0 or i == smin.size - 1:
            t = float(path.grid[i])
            if smin[i] > 1e-7:
                continue
        else:
            t = locate_crossing(path, Vc, lo, hi)
            if _sigma_min(Vc, path.at(t)) > 1e-7:
                continue
        loc = "left-endpoint" if t - path.grid[0] <= end_tol else (
            "right-endpoint" if t_end - t <= end_tol else "interior")
        mp, m0, mm, dim = crossing_form(path, Vc, t)
        events.append(CrossingEvent(t, dim, (mp, m0, mm), loc))
    return events


def count_from_crossings(events: list[CrossingEvent]) -> int:
    """Crossing-form sum: ``m+`` at the left end, signature inside, ``-m-`` at the right end."""
    total = 0
    for e in events:
        if e.form_signature[1]:
            raise DegenerateCrossingError(f"degenerate crossing at t={e.t:.6g}", e)
        if e.location == "left-endpoint":
            total += e.form_signature[0]
        elif e.location == "right-endpoint":
            total -= e.form_signature[2]
        else:
            total += e.signature
    return total
