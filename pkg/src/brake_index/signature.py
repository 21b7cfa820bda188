"""
The eps-rotated symmetric matrix ``M_eps(P)`` and the index difference
``i_{L0} - i_{L1}`` it encodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .paths import SymplecticPath
from .symplectic import ValidationError, half_dim, nu_lagrangian, require_symplectic

EPS0 = 1e-3
MAX_HALVINGS = 24
ZERO_TOL = 1e-10


class DegenerateSignatureError(RuntimeError):
    pass


def _k_blocks(n: int, eps: float) -> tuple[np.ndarray, np.ndarray]:
    s, c = math.sin(2 * eps), math.cos(2 * eps)
    I = np.eye(n)
    K_minus = np.block([[s * I, -c * I], [-c * I, -s * I]])
    K_plus = np.block([[s * I, c * I], [c * I, -s * I]])
    return K_minus, K_plus


def m_eps(P: np.ndarray, eps: float) -> np.ndarray:
    """``P^T K_-(eps) P + K_+(eps)`` with the two sin/cos block matrices."""
    n = half_dim(P)
    K_minus, K_plus = _k_blocks(n, eps)
    M = P.T @ K_minus @ P + K_plus
    return 0.5 * (M + M.T)


def inertia(M: np.ndarray, zero_tol: float = ZERO_TOL) -> tuple[int, int, int]:
    ev = np.linalg.eigvalsh(M)
    thr = zero_tol * max(float(np.max(np.abs(ev))), np.finfo(float).tiny)
    return int(np.sum(ev > thr)), int(np.sum(np.abs(ev) <= thr)), int(np.sum(ev < -thr))


@dataclass(frozen=True)
class EpsSignature:
    side: str
    eps_used: float
    signature: int
    inertia: tuple[int, int, int]

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "eps": self.eps_used,
            "signature": self.signature,
            "inertia": list(self.inertia),
        }


def sgn_m_eps(P: np.ndarray, side: str = "plus", eps0: float = EPS0) -> EpsSignature:
    """Signature of ``M_eps(P)`` for small ``eps`` of the given sign.

    ``eps = +-eps0 2^{-j}`` is halved until two consecutive invertible inertias agree.
    """
    if side not in ("plus", "minus"):
        raise ValidationError("side must be 'plus' or 'minus'")
    P = require_symplectic(np.asarray(P, dtype=float), what="P")
    sign = 1.0 if side == "plus" else -1.0
    prev = None
    eps = eps0
    for _ in range(MAX_HALVINGS):
        cur = inertia(m_eps(P, sign * eps))
        if cur[1] == 0 and cur == prev:
            return EpsSignature(side, sign * eps, cur[0] - cur[2], cur)
        prev = cur if cur[1] == 0 else None
        eps *= 0.5
    raise DegenerateSignatureError(f"M_eps did not stabilize on side {side}")


def index_difference(path: SymplecticPath, variant: str = "bare") -> int:
    """Half the stabilized signature at the endpoint.

    ``variant="bare"`` uses ``eps > 0`` and predicts ``i_{L0} - i_{L1}``;
    ``variant="plus-nullity"`` uses ``eps < 0`` and predicts
    ``(i_{L0} + nu_{L0}) - (i_{L1} + nu_{L1})``.
    """
    side = {"bare": "plus", "plus-nullity": "minus"}.get(variant)
    if side is None:
        raise ValidationError("variant must be 'bare' or 'plus-nullity'")
    sig = sgn_m_eps(path.end, side).signature
    if sig % 2:
        raise DegenerateSignatureError(f"odd signature {sig}")
    return sig // 2


def constancy_check(samples: np.ndarray, j: int | None = None) -> bool:
    """Whether ``sgn M_eps`` agrees at both ends of a path with constant ``nu_{L_j}``.

    Parameters
    ----------
    samples : ndarray
        Symplectic matrices along a continuous path, shape ``(K, 2n, 2n)``.
    j : {0, 1}, optional
        Which nullity to require constant; both when omitted.
    """
    samples = np.asarray(samples, dtype=float)
    for jj in ((0, 1) if j is None else (j,)):
        nus = {nu_lagrangian(M, jj) for M in samples}
        if len(nus) != 1:
            raise ValidationError(f"nu_L{jj} is not constant along the path: {sorted(nus)}")
    return sgn_m_eps(samples[0]).signature == sgn_m_eps(samples[-1]).signature
