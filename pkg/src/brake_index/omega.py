"""
Periodic Maslov-type index ``(i_omega, nu_omega)``, splitting numbers and the
rotation profile ``theta -> i_{exp(i theta)}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lagrangian import IndexRecord, graph_columns, mu_clm
from .paths import SymplecticPath, path_to
from .symplectic import (
    ValidationError,
    nu_omega,
    standard_J,
    unit_spectrum,
)

EPS0 = 1e-3
MAX_HALVINGS = 20


class DegenerateEndpointError(RuntimeError):
    pass


class ConsistencyError(RuntimeError):
    pass


Angle = float | Fraction


def as_theta(w: Angle | complex) -> float:
    """Angle in ``[0, 2pi)``; a ``Fraction`` is read as exact turns."""
    if isinstance(w, Fraction):
        return float(2 * math.pi * (w % 1))
    if isinstance(w, complex):
        if abs(abs(w) - 1.0) > 1e-12:
            raise ValidationError("omega must have modulus one")
        return float(np.mod(np.angle(w), 2 * math.pi))
    return float(np.mod(w, 2 * math.pi))


def _is_real(theta: float) -> int | None:
    if theta == 0.0 or abs(theta - 2 * math.pi) < 1e-15:
        return 1
    if abs(theta - math.pi) < 1e-15:
        return -1
    return None


def _periodic_count(path: SymplecticPath, theta: float) -> int:
    n = path.n
    S = path.samples
    sign = _is_real(theta)
    J = standard_J(n)
    Z2 = np.zeros((2 * n, 2 * n))
    if sign is not None:
        K = np.block([[-J, Z2], [Z2, J]])
        V = np.vstack([np.eye(2 * n), sign * np.eye(2 * n)])
        return mu_clm(V, graph_columns(S), K)
    # realification: gamma (+) gamma on (Re, Im) with the graph of multiplication by omega
    c, s = math.cos(theta), math.sin(theta)
    I = np.eye(2 * n)
    Om = np.block([[c * I, -s * I], [s * I, c * I]])
    Jr = np.block([[J, Z2], [Z2, J]])
    Z4 = np.zeros((4 * n, 4 * n))
    K = np.block([[-Jr, Z4], [Z4, Jr]])
    V = np.vstack([np.eye(4 * n), Om])
    Sr = np.zeros((S.shape[0], 4 * n, 4 * n))
    Sr[:, : 2 * n, : 2 * n] = S
    Sr[:, 2 * n :, 2 * n :] = S
    real = mu_clm(V, graph_columns(Sr), K)
    if real % 2:
        raise ConsistencyError(f"realified count {real} is odd")
    return real // 2


def i_nu_omega(path: SymplecticPath, omega: Angle | complex) -> IndexRecord:
    """``(i_omega, nu_omega)`` of a path from the identity.

    Parameters
    ----------
    omega : float, Fraction or complex
        Angle in radians, exact turns, or the unit complex number itself.
    """
    theta = as_theta(omega)
    count = _periodic_count(path, theta)
    n = path.n
    index = count - n if _is_real(theta) == 1 else count
    w = complex(math.cos(theta), math.sin(theta))
    turns = omega % 1 if isinstance(omega, Fraction) else None
    return IndexRecord("periodic-omega", index, nu_omega(path.end, w), theta=theta, turns=turns)


@dataclass(frozen=True)
class SplittingPair:
    theta: float
    S_plus: int
    S_minus: int
    eps_used: float

    def pair(self) -> tuple[int, int]:
        return self.S_plus, self.S_minus

    def to_dict(self) -> dict:
        return {"theta": self.theta, "S_plus": self.S_plus, "S_minus": self.S_minus, "eps": self.eps_used}


def splitting_by_limit(path: SymplecticPath, theta: float, eps0: float = EPS0) -> SplittingPair:
    """``S^{+-} = i_{omega exp(+-i eps)} - i_omega`` with ``eps`` halved until stable."""
    base = i_nu_omega(path, theta).index
    prev = None
    eps = eps0
    for _ in range(MAX_HALVINGS):
        cur = (
            i_nu_omega(path, theta + eps).index - base,
            i_nu_omega(path, theta - eps).index - base,
        )
        if cur == prev:
            return SplittingPair(theta, cur[0], cur[1], eps)
        prev = cur
        eps *= 0.5
    raise DegenerateEndpointError(f"splitting numbers at theta={theta} did not stabilize")


def _same_angle(a: float, b: float, tol: float = 1e-9) -> bool:
    d = abs(a - b) % (2 * math.pi)
    return min(d, 2 * math.pi - d) < tol


def table_splitting(parts: list[dict], theta: float) -> tuple[int, int] | None:
    """Closed-form splitting numbers of a diamond product of basic normal forms.

    ``parts`` is a list of normal-form specs as dictionaries (``kind`` plus parameters).
    Returns ``None`` when some factor is not covered by the table.
    """
    total = [0, 0]
    for p in parts:
        kind = p["kind"]
        if kind == "I":
            # identity block of size 2m: m copies of N1(1, 0)
            pair = (p.get("m", 1), p.get("m", 1)) if _same_angle(theta, 0.0) else (0, 0)
        elif kind == "D":
            pair = (0, 0)
        elif kind == "N1":
            lam, b = p["lam"], p["b"]
            # N1(-1, b) = -N1(1, -b)
            b_eff = b if lam > 0 else -b
            at = 0.0 if lam > 0 else math.pi
            if not _same_angle(theta, at):
                pair = (0, 0)
            elif b_eff in (0, 1):
                pair = (1, 1)
            elif b_eff == -1:
                pair = (0, 0)
            else:
                return None
        elif kind == "R":
            th = p["theta"]
            if _same_angle(theta, th):
                pair = (0, 1)
            elif _same_angle(theta, -th):
                pair = (1, 0)
            else:
                pair = (0, 0)
        else:
            return None
        total[0] += pair[0]
        total[1] += pair[1]
    return total[0], total[1]


def splitting_numbers(
    M: np.ndarray,
    theta: Angle | complex,
    path: SymplecticPath | None = None,
    parts: list[dict] | None = None,
) -> SplittingPair:
    """Splitting numbers of ``M`` at ``omega``; cross-checked against the table when ``parts`` is given."""
    th = as_theta(theta)
    if path is None:
        path = path_to(M)
    elif np.max(np.abs(path.end - M)) > 1e-8:
        raise ValidationError("path does not end at M")
    pair = splitting_by_limit(path, th)
    nu = nu_omega(M, complex(math.cos(th), math.sin(th)))
    if not (0 <= pair.S_plus <= nu and 0 <= pair.S_minus <= nu):
        raise ConsistencyError(f"splitting numbers {pair.pair()} outside [0, {nu}]")
    if parts is not None:
        expected = table_splitting(parts, th)
        if expected is not None and expected != pair.pair():
            raise ConsistencyError(f"table {expected} != limit {pair.pair()} at theta={th}")
    return pair


@dataclass(frozen=True)
class OmegaProfile:
    """Piecewise-constant ``theta -> i_{exp(i theta)}`` on ``[0, 2pi)``."""

    crossings: tuple[float, ...]
    cells: tuple[tuple[float, float, int], ...]
    value_at_one: int

    def value(self, theta: float) -> int:
        th = as_theta(theta)
        if any(_same_angle(th, c) for c in self.crossings):
            raise ValidationError("theta is a crossing; use i_nu_omega there")
        for a, b, v in self.cells:
            if a < th < b:
                return v
        raise ValidationError("theta not covered")

    def to_csv(self) -> str:
        rows = ["theta_start,theta_end,index"]
        rows += [f"{a!r},{b!r},{v}" for a, b, v in self.cells]
        return "\n".join(rows) + "\n"


def _crossing_angles(M: np.ndarray) -> list[float]:
    spec = unit_spectrum(M)
    angles = {round(float(np.mod(np.angle(e.omega), 2 * math.pi)), 12) for e in spec.entries}
    return sorted(a for a in angles if not _same_angle(a, 0.0)) if angles else []


def omega_profile(path: SymplecticPath, resolution: int = 360) -> OmegaProfile:
    """Rotation profile from direct evaluation, checked against splitting-number reconstruction."""
    if resolution < 8:
        raise ValidationError("resolution must be >= 8")
    inner = _crossing_angles(path.end)
    cuts = [0.0] + inner + [2 * math.pi]
    # cell values by direct evaluation at cell midpoints
    cells = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        cells.append((a, b, i_nu_omega(path, 0.5 * (a + b)).index))
    # reconstruction: start just above 1 and add S^+ - S^- ... across each crossing
    at_one = splitting_by_limit(path, 0.0)
    i_one = i_nu_omega(path, 0.0).index
    value = i_one + at_one.S_plus
    recon = [value]
    for c in inner:
        sp = splitting_by_limit(path, c)
        value = value - sp.S_minus + sp.S_plus
        recon.append(value)
    if [v for _, _, v in cells] != recon:
        raise ConsistencyError(f"profile {[v for _, _, v in cells]} != reconstruction {recon}")
    # every grid angle off the crossing set must agree with its cell value
    grid = np.linspace(0.0, 2 * math.pi, resolution, endpoint=False)[1:]
    all_cross = [0.0] + inner
    for th in grid:
        if any(_same_angle(th, c, 1e-6) for c in all_cross):
            continue
        direct = i_nu_omega(path, float(th)).index
        cell = next(v for a, b, v in cells if a < th < b)
        if direct != cell:
            raise ConsistencyError(f"i at theta={th:.6f} is {direct}, cell says {cell}")
    return OmegaProfile(tuple(inner), tuple(cells), i_one)


@dataclass(frozen=True)
class InequalityReport:
    holds: bool
    lower: int
    middle: int
    upper: int

    def to_dict(self) -> dict:
        return {"holds": self.holds, "lower": self.lower, "i_omega": self.middle, "upper": self.upper}


def check_omega_bounds(path: SymplecticPath, omega: Angle | complex) -> InequalityReport:
    """``i_1 + nu_1 - n <= i_omega <= i_1 + n - nu_omega`` for ``omega != 1``."""
    theta = as_theta(omega)
    if _same_angle(theta, 0.0, 1e-15):
        raise ValidationError("omega must differ from 1")
    n = path.n
    one = i_nu_omega(path, 0.0)
    w = i_nu_omega(path, omega)
    lower = one.index + one.nullity - n
    upper = one.index + n - w.nullity
    return InequalityReport(lower <= w.index <= upper, lower, w.index, upper)
