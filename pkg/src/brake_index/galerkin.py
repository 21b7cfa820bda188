"""
Fourier-Galerkin truncations of ``<Ax, y> = int -J x' . y`` and
``<Bx, y> = int B x . y`` on reversible loop spaces, and the index oracle
obtained from counting negative eigenvalues of ``A - B``.

Basis functions are ``exp(f w t J) e`` for signed integer frequencies ``f``
(``w = 2 pi / P``) and ``e`` running over a basis of ``L0`` (spaces ``E`` and
``hat``) or ``L1`` (space ``check``), scaled to unit ``W^{1/2,2}`` norm
``sqrt(P (1 + |f|))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .lagrangian import IndexRecord
from .paths import CoefficientPath, reversible_extend
from .symplectic import ValidationError

M_MAX = 256
EDGE_TOL = 1e-12


class NonConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class FourierTruncation:
    """Truncated basis: ``space`` in {E, hat, check}, period ``P``, order ``m``."""

    space: str
    period: float
    m: int
    n: int
    freqs: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return self.freqs.size * self.n

    @classmethod
    def build(cls, space: str, period: float, m: int, n: int) -> "FourierTruncation":
        return cls(space, float(period), m, n, frequencies(space, m))


def frequencies(space: str, m: int) -> np.ndarray:
    """Signed frequencies ordered by ``|f|`` so each truncation is a leading block."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    if space in ("E", "check"):
        out = [0]
        for j in range(1, m + 1):
            out += [j, -j]
    elif space == "hat":
        out = []
        for j in range(1, m + 1):
            out += [2 * j - 1, -(2 * j - 1)]
    else:
        raise ValidationError(f"unknown space {space!r}")
    return np.array(out, dtype=int)


def _weights(freqs: np.ndarray, period: float, n: int) -> np.ndarray:
    return np.repeat(1.0 / np.sqrt(period * (1.0 + np.abs(freqs))), n)


def assemble_A(space: str, period: float, m: int, n: int) -> np.ndarray:
    """Diagonal Gram matrix of the A-form: ``f w / (1 + |f|)``."""
    f = frequencies(space, m)
    w = 2 * math.pi / period
    return np.diag(np.repeat(f * w / (1.0 + np.abs(f)), n).astype(float))


def _phi1(z: np.ndarray) -> np.ndarray:
    small = np.abs(z) < 1e-3
    zs = np.where(small, 1.0, z)
    out = np.expm1(zs) / zs
    series = 1 + z / 2 + z**2 / 6 + z**3 / 24 + z**4 / 120
    return np.where(small, series, out)


def _phi2(z: np.ndarray) -> np.ndarray:
    small = np.abs(z) < 1e-2
    zs = np.where(small, 1.0, z)
    out = (np.exp(zs) * (zs - 1) + 1) / zs**2
    series = 0.5 + z / 3 + z**2 / 8 + z**3 / 30 + z**4 / 144 + z**5 / 840
    return np.where(small, series, out)


def fourier_integrals(B: CoefficientPath, period: float, kmax: int) -> np.ndarray:
    """``F[k] = int_0^P B(t) exp(i k w t) dt`` for ``k = 0..kmax``, exact for piecewise-linear ``B``."""
    g, V = B.grid, B.values
    if abs(g[-1] - period) > 1e-12 * max(1.0, period):
        raise ValidationError("coefficient path must cover exactly one period")
    w = 2 * math.pi / period
    k = np.arange(kmax + 1)[:, None]
    t0, h = g[:-1][None, :], np.diff(g)[None, :]
    z = 1j * k * w * h
    pre = np.exp(1j * k * w * t0) * h  # (K, S)
    a = pre * _phi1(z)
    b = pre * _phi2(z)
    V0, dV = V[:-1], V[1:] - V[:-1]
    return np.einsum("ks,sij->kij", a, V0) + np.einsum("ks,sij->kij", b, dV)


def _profile(space: str) -> tuple[tuple[str, float], tuple[str, float]]:
    """Components of ``exp(f w t J) e``: (trig, sign) for the first and second half."""
    if space in ("E", "hat"):
        return ("sin", -1.0), ("cos", 1.0)  # e in L0
    return ("cos", 1.0), ("sin", 1.0)  # e in L1


def assemble_B(B_ext: CoefficientPath, space: str, period: float, m: int) -> np.ndarray:
    """Gram matrix of the B-form in the normalized basis; ``B_ext`` covers one period."""
    n = B_ext.n
    f = frequencies(space, m)
    F = fourier_integrals(B_ext, period, 2 * int(np.max(np.abs(f))) if f.size else 0)
    C, S = F.real, F.imag

    def cint(k):  # int B cos(k w t)
        return C[np.abs(k)]

    def sint(k):  # int B sin(k w t)
        return np.sign(k)[..., None, None] * S[np.abs(k)]

    G, Fq = np.meshgrid(f, f, indexing="ij")  # row frequency g, column frequency f
    dm, sm = G - Fq, G + Fq
    prof = _profile(space)
    blocks = {}
    for p, (tp, sp) in enumerate(prof):  # row component (test function psi_g)
        for q, (tq, sq) in enumerate(prof):  # column component (psi_f)
            if tp == "cos" and tq == "cos":
                val = 0.5 * (cint(dm) + cint(sm))
            elif tp == "sin" and tq == "sin":
                val = 0.5 * (cint(dm) - cint(sm))
            elif tp == "sin" and tq == "cos":
                val = 0.5 * (sint(sm) + sint(dm))
            else:  # cos(g) sin(f)
                val = 0.5 * (sint(sm) - sint(dm))
            blk = slice(p * n, (p + 1) * n), slice(q * n, (q + 1) * n)
            blocks[p, q] = sp * sq * val[:, :, blk[0], blk[1]]
    total = sum(blocks.values())  # (g, f, n, n) with row e_l, column e_k
    mat = total.transpose(0, 2, 1, 3).reshape(f.size * n, f.size * n)
    wts = _weights(f, period, n)
    mat = wts[:, None] * mat * wts[None, :]
    return 0.5 * (mat + mat.T)


@dataclass(frozen=True)
class BandCount:
    m: int
    d: float
    plus: int
    zero: int
    minus: int
    edge_warning: bool = False

    @property
    def total(self) -> int:
        return self.plus + self.zero + self.minus

    def to_dict(self) -> dict:
        return {"m": self.m, "d": self.d, "plus": self.plus, "zero": self.zero, "minus": self.minus,
                "edge_warning": self.edge_warning}


def band_counts(Amat: np.ndarray, Bmat: np.ndarray, d: float, m: int = -1) -> BandCount:
    """Eigenvalue counts of ``A - B`` in ``[d, inf)``, ``(-d, d)`` and ``(-inf, -d]``."""
    if Amat.shape != Bmat.shape:
        raise ValidationError("A and B must have the same shape")
    if d < 0:
        raise ValidationError("d must be nonnegative")
    ev = np.linalg.eigvalsh(Amat - Bmat)
    return _counts(ev, d, m)


def _counts(ev: np.ndarray, d: float, m: int) -> BandCount:
    edge = bool(np.any(np.abs(np.abs(ev) - d) < EDGE_TOL)) if d > 0 else False
    return BandCount(m, d, int(np.sum(ev >= d)), int(np.sum(np.abs(ev) < d)), int(np.sum(ev <= -d)), edge)


def extended_coefficients(B: CoefficientPath, family: str) -> tuple[CoefficientPath, float, str]:
    """One period of the coefficient path used by each family, with its period and space."""
    if not B.satisfies_b1():
        raise ValidationError("(B1) violated")
    half = reversible_extend(B, "half")
    if family in ("L0", "L1"):
        return half, 2 * B.tau, ("E" if family == "L0" else "check")
    if family == "sqrt":
        s = B.tau
        grid = np.concatenate([half.grid, half.grid[1:] + 2 * s])
        values = np.concatenate([half.values, half.values[1:]])
        return CoefficientPath(grid, values), 4 * s, "hat"
    raise ValidationError(f"unknown family {family!r}")


@dataclass(frozen=True)
class GalerkinResult:
    record: IndexRecord
    sweep: tuple[BandCount, ...]
    m_stable: int

    def sweep_csv(self) -> str:
        rows = ["m,d,plus,zero,minus"]
        rows += [f"{c.m},{c.d!r},{c.plus},{c.zero},{c.minus}" for c in self.sweep]
        return "\n".join(rows) + "\n"


def _offset(space: str, m: int, n: int) -> int:
    return m * n + (n if space in ("E", "check") else 0)


def index_from_galerkin(B: CoefficientPath, family: str = "L0", m_max: int = M_MAX,
                        zero_tol: float = 1e-7) -> GalerkinResult:
    """Index and nullity from negative/zero eigenvalue counts of truncated ``A - B``.

    ``family`` is ``"L0"``, ``"L1"`` (spaces E and check) or ``"sqrt"`` (space hat).
    Truncation orders grow from ``m0 ~ ||B|| P / 2 pi`` by doubling until the adjusted
    count ``minus - offset`` and the zero count agree at three consecutive orders.
    """
    Bext, P, space = extended_coefficients(B, family)
    n = B.n
    normB = float(np.max(np.linalg.norm(Bext.values, ord=2, axis=(1, 2))))
    m0 = max(4, int(math.ceil(normB * P / (2 * math.pi))) + 1)
    sweep: list[BandCount] = []
    while True:
        top = min(m0 + 2, m_max)
        Abig = assemble_A(space, P, top, n)
        Bbig = assemble_B(Bext, space, P, top)
        per_m = 2 * n
        lead = n if space in ("E", "check") else 0
        spectra = {}
        for m in range(max(0, top - 2), top + 1):
            k = lead + per_m * m
            spectra[m] = np.linalg.eigvalsh(Abig[:k, :k] - Bbig[:k, :k])
        ev_top = spectra[top]
        nonzero = np.abs(ev_top)[np.abs(ev_top) > zero_tol]
        d = 0.25 * float(np.min(nonzero)) if nonzero.size else 0.25
        window = [_counts(spectra[m], d, m) for m in sorted(spectra)]
        sweep.extend(window)
        adjusted = {(c.minus - _offset(space, c.m, n), c.zero) for c in window}
        if len(window) == 3 and len(adjusted) == 1:
            idx, nul = adjusted.pop()
            fam = {"L0": "L0", "L1": "L1", "sqrt": "omega-L0"}[family]
            theta = 0.5 * math.pi if family == "sqrt" else None
            return GalerkinResult(IndexRecord(fam, idx, nul, theta=theta), tuple(sweep), top - 2)
        if top >= m_max:
            raise NonConvergenceError(f"counts did not stabilize by m={m_max}")
        m0 *= 2


@dataclass(frozen=True)
class MonotonicityResult:
    family: str
    i1: int
    n1: int
    i2: int
    n2: int
    strict: bool

    @property
    def holds(self) -> bool:
        ok = self.i1 >= self.i2 and self.i1 + self.n1 >= self.i2 + self.n2
        if self.strict:
            ok = ok and self.i1 >= self.i2 + self.n2
        return ok


def monotonicity_suite(B1: CoefficientPath, B2: CoefficientPath, families=("sqrt", "L0", "L1"),
                       engine: str = "path") -> list[MonotonicityResult]:
    """Index comparisons for ``B1 >= B2`` pointwise; strict when ``int (B1 - B2) > 0``."""
    if B1.n != B2.n or abs(B1.tau - B2.tau) > 1e-12:
        raise ValidationError("paths must share n and duration")
    grid = np.union1d(B1.grid, B2.grid)
    diff = B1(grid) - B2(grid)
    if np.min(np.linalg.eigvalsh(diff)) < -1e-12:
        raise ValidationError("B1 >= B2 violated")
    strict = bool(np.min(np.linalg.eigvalsh(B1.integral() - B2.integral())) > 1e-12)
    out = []
    for fam in families:
        r1, r2 = _index(B1, fam, engine), _index(B2, fam, engine)
        out.append(MonotonicityResult(fam, r1.index, r1.nullity, r2.index, r2.nullity, strict))
    return out


def _index(B: CoefficientPath, family: str, engine: str) -> IndexRecord:
    if engine == "galerkin":
        return index_from_galerkin(B, family).record
    from .lagrangian import i_L, i_sqrt
    from .paths import fundamental_solution

    path = fundamental_solution(B)
    if family == "sqrt":
        return i_sqrt(path)
    return i_L(path, int(family[1]))


@dataclass(frozen=True)
class PositivityReport:
    checked: tuple[str, ...]
    skipped: tuple[str, ...]
    galerkin: dict
    path: dict

    @property
    def holds(self) -> bool:
        return all(self.galerkin[f] >= 0 and self.path[f] == self.galerkin[f] for f in self.checked)


def block_positivity(B: CoefficientPath) -> PositivityReport:
    """``int B22 > 0`` implies ``i_{L0} >= 0`` and ``int B11 > 0`` implies ``i_{L1} >= 0``."""
    if not B.is_semipositive():
        raise ValidationError("B must be positive semidefinite")
    n = B.n
    I = B.integral()
    conds = {"L0": I[n:, n:], "L1": I[:n, :n]}
    checked, skipped, gal, pth = [], [], {}, {}
    for fam, blk in conds.items():
        if np.min(np.linalg.eigvalsh(blk)) > 1e-12:
            checked.append(fam)
            gal[fam] = index_from_galerkin(B, fam).record.index
            pth[fam] = _index(B, fam, "path").index
        else:
            skipped.append(fam)
    return PositivityReport(tuple(checked), tuple(skipped), gal, pth)
