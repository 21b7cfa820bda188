"""
Iterated paths in the brake and periodic senses, and the Bott-type
iteration formulas evaluated against direct indices of the iterates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .lagrangian import IndexRecord, i_L, i_sqrt
from .omega import i_nu_omega
from .paths import CoefficientPath, SymplecticPath, fundamental_solution, reversible_extend
from .symplectic import ValidationError, standard_N

JUNCTION_TOL = 1e-8


class ConstructionError(RuntimeError):
    pass


def brake_monodromy(M: np.ndarray) -> np.ndarray:
    """``N M^{-1} N M``, the value of the 2-iterate at ``2 tau``."""
    N = standard_N(M.shape[0] // 2)
    return N @ np.linalg.solve(M, N @ M)


def _iter_source(path: SymplecticPath) -> CoefficientPath | None:
    B = path.source
    if B is None or not B.satisfies_b1() or abs(B.tau - path.tau) > 1e-12:
        return None
    return reversible_extend(B, "full")


def iterate_brake(path: SymplecticPath, k: int) -> SymplecticPath:
    """``gamma^k`` on ``[0, k tau]`` in the brake boundary sense.

    Even legs are ``gamma(t - 2j tau) P^j`` and odd legs
    ``N gamma(2j tau + 2 tau - t) N P^{j+1}`` with ``P = N gamma(tau)^{-1} N gamma(tau)``.
    """
    if k < 1:
        raise ValidationError("k must be a positive integer")
    if path.t0 != 0.0:
        raise ValidationError("path must start at t = 0")
    tau = path.tau
    g, S = path.grid, path.samples
    N = standard_N(path.n)
    P = brake_monodromy(path.end)
    grids, samples = [g], [S]
    Pj = np.eye(S.shape[1])
    for leg in range(1, k):
        j, odd = divmod(leg, 2)
        if odd:
            Pn = Pj @ P
            t = (2 * j + 2) * tau - g[::-1]
            seg = N @ S[::-1] @ N @ Pn
        else:
            Pj = Pn
            t = 2 * j * tau + g
            seg = S @ Pj
        gap = float(np.max(np.abs(seg[0] - samples[-1][-1])))
        if gap > JUNCTION_TOL * max(1.0, float(np.max(np.abs(seg[0])))):
            raise ConstructionError(f"junction mismatch {gap:.2e} at leg {leg}")
        grids.append(t[1:])
        samples.append(seg[1:])
    grid = np.concatenate(grids)
    grid[-1] = k * tau
    return SymplecticPath(grid, np.concatenate(samples), _iter_source(path))


def iterate_periodic(path: SymplecticPath, m: int) -> SymplecticPath:
    """``gamma(m)(t) = gamma(t - j tau) gamma(tau)^j`` on ``[0, m tau]``."""
    if m < 1:
        raise ValidationError("m must be a positive integer")
    tau = path.tau
    g, S = path.grid, path.samples
    M = path.end
    grids, samples = [g], [S]
    Mj = np.eye(S.shape[1])
    for j in range(1, m):
        Mj = Mj @ M
        seg = S @ Mj
        gap = float(np.max(np.abs(seg[0] - samples[-1][-1])))
        if gap > JUNCTION_TOL * max(1.0, float(np.max(np.abs(seg[0])))):
            raise ConstructionError(f"junction mismatch {gap:.2e} at leg {j}")
        grids.append(j * tau + g[1:])
        samples.append(seg[1:])
    grid = np.concatenate(grids)
    grid[-1] = m * tau
    src = path.source if path.source is not None and path.source.periodic else None
    return SymplecticPath(grid, np.concatenate(samples), src)


@dataclass(frozen=True)
class IterationReport:
    identity: str
    k: int
    direct: tuple[int, int]
    formula: tuple[int, int]
    omega_turns: Fraction | None = None

    @property
    def agree(self) -> bool:
        return self.direct == self.formula

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "k": self.k,
            "z_turns": None if self.omega_turns is None else str(self.omega_turns),
            "direct": {"index": self.direct[0], "nullity": self.direct[1]},
            "formula": {"index": self.formula[0], "nullity": self.formula[1]},
            "agree": self.agree,
        }


def _sum(records: list[IndexRecord]) -> tuple[int, int]:
    return sum(r.index for r in records), sum(r.nullity for r in records)


def _add(*pairs: tuple[int, int]) -> tuple[int, int]:
    return sum(p[0] for p in pairs), sum(p[1] for p in pairs)


class IndexCache:
    """Memoized indices of one base path, its 2-iterate and its brake iterates."""

    def __init__(self, path: SymplecticPath):
        self.path = path
        self._iter: dict[int, SymplecticPath] = {1: path}
        self._omega: dict[Fraction, tuple[int, int]] = {}

    def iterate(self, k: int) -> SymplecticPath:
        if k not in self._iter:
            self._iter[k] = iterate_brake(self.path, k)
        return self._iter[k]

    def omega2(self, turns: Fraction) -> tuple[int, int]:
        turns = turns % 1
        if turns not in self._omega:
            self._omega[turns] = i_nu_omega(self.iterate(2), turns).pair()
        return self._omega[turns]


def bott_L0(path: SymplecticPath, k: int, cache: IndexCache | None = None) -> IterationReport:
    """Index of ``gamma^k`` directly and through ``i_{omega_k^{2i}}(gamma^2)`` sums."""
    c = cache or IndexCache(path)
    direct = i_L(c.iterate(k), 0).pair()
    base = i_L(path, 0).pair()
    if k % 2:
        terms = [c.omega2(Fraction(i, k)) for i in range(1, (k - 1) // 2 + 1)]
        formula = _add(base, *terms)
    else:
        terms = [c.omega2(Fraction(i, k)) for i in range(1, k // 2)]
        formula = _add(base, i_sqrt(path).pair(), *terms)
    return IterationReport("L0", k, direct, formula)


def bott_sqrt(path: SymplecticPath, k: int, cache: IndexCache | None = None) -> IterationReport:
    """Same for ``i_{sqrt(-1)}^{L0}`` with the odd powers ``omega_k^{2i-1}``."""
    c = cache or IndexCache(path)
    direct = i_sqrt(c.iterate(k)).pair()
    if k % 2:
        terms = [c.omega2(Fraction(2 * i - 1, 2 * k)) for i in range(1, (k - 1) // 2 + 1)]
        formula = _add(i_sqrt(path).pair(), *terms)
    else:
        terms = [c.omega2(Fraction(2 * i - 1, 2 * k)) for i in range(1, k // 2 + 1)]
        formula = _add(*terms)
    return IterationReport("sqrt", k, direct, formula)


def bott_sqrt_by_subtraction(path: SymplecticPath, k: int, cache: IndexCache | None = None) -> tuple[int, int]:
    """``i^{L0}_{sqrt}(gamma^k)`` as ``i_{L0}(gamma^{2k}) - i_{L0}(gamma^k)``, both from the L0 formula."""
    c = cache or IndexCache(path)
    two_k = bott_L0(path, 2 * k, c).formula
    one_k = bott_L0(path, k, c).formula
    return two_k[0] - one_k[0], two_k[1] - one_k[1]


def roots_of(z_turns: Fraction, m: int) -> list[Fraction]:
    """All ``omega`` with ``omega^m = z``, as exact turns in ``[0, 1)``."""
    return [((z_turns + j) / m) % 1 for j in range(m)]


def bott_periodic(path: SymplecticPath, z_turns: Fraction, m: int) -> IterationReport:
    """``i_z(gamma, m)`` directly and as the sum of ``i_omega(gamma)`` over m-th roots of ``z``."""
    z_turns = Fraction(z_turns) % 1
    direct = i_nu_omega(iterate_periodic(path, m), z_turns).pair()
    formula = _sum([i_nu_omega(path, w) for w in roots_of(z_turns, m)])
    return IterationReport("periodic", m, direct, formula, z_turns)


def double_iterate_relation(path: SymplecticPath) -> tuple[tuple[int, int], tuple[int, int]]:
    """``(i_1, nu_1)(gamma^2)`` next to ``(i_{L0} + i_{L1} + n, nu_{L0} + nu_{L1})``."""
    n = path.n
    two = iterate_brake(path, 2)
    lhs = i_nu_omega(two, 0.0).pair()
    a, b = i_L(path, 0), i_L(path, 1)
    return lhs, (a.index + b.index + n, a.nullity + b.nullity)


@dataclass(frozen=True)
class MonotonicityReport:
    family: str
    p: int
    q: int
    index_p: int
    index_q: int

    @property
    def holds(self) -> bool:
        return self.index_p >= self.index_q


def monotonicity_check(B: CoefficientPath, p: int, q: int, family: str = "sqrt",
                       steps: int | None = None) -> MonotonicityReport:
    """Compare indices of ``gamma_B^p`` and ``gamma_B^q`` for ``B >= 0``.

    ``family`` is ``"sqrt"`` (requires ``p > q``), ``"L0"`` or ``"L1"`` (``p >= q``).
    """
    if not B.is_semipositive():
        raise ValidationError("B must be positive semidefinite")
    if not B.satisfies_b1():
        raise ValidationError("(B1) violated")
    if family == "sqrt" and not p > q:
        raise ValidationError("need p > q")
    if family in ("L0", "L1") and not p >= q:
        raise ValidationError("need p >= q")
    gamma = fundamental_solution(B, steps)
    if family == "sqrt":
        f = lambda path: i_sqrt(path).index
    elif family in ("L0", "L1"):
        j = int(family[1])
        f = lambda path: i_L(path, j).index
    else:
        raise ValidationError(f"unknown family {family!r}")
    return MonotonicityReport(family, p, q, f(iterate_brake(gamma, p)), f(iterate_brake(gamma, q)))
