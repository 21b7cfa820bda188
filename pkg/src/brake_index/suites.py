"""
Seeded random coefficient paths satisfying (B1), and the identity suites run
over them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .paths import CoefficientPath

KNOTS = 33
MODES = 3


@dataclass(frozen=True)
class SuiteCase:
    seed: int
    case: int
    n: int
    sigma: float
    B: CoefficientPath = field(repr=False)
    psd: bool = False


def _smooth_entries(rng: np.random.Generator, t: np.ndarray, count: int, scale: float) -> np.ndarray:
    """``count`` random trigonometric polynomials of low degree sampled on ``t``."""
    s = t / t[-1]
    k = np.arange(MODES)
    a = rng.normal(size=(count, MODES)) * scale / (1.0 + k)
    b = rng.normal(size=(count, MODES)) * scale / (1.0 + k)
    phase = np.pi * np.outer(s, k)  # (len(t), MODES)
    return np.cos(phase) @ a.T + np.sin(phase) @ b.T  # (len(t), count)


def _sym_from_entries(vals: np.ndarray, m: int) -> np.ndarray:
    out = np.zeros((vals.shape[0], m, m))
    iu = np.triu_indices(m)
    out[:, iu[0], iu[1]] = vals
    return out + np.transpose(out, (0, 2, 1)) - out * np.eye(m)


def random_b1_path(
    rng: np.random.Generator,
    n: int,
    sigma: float,
    scale: float = 1.0,
    psd: bool = False,
    knots: int = KNOTS,
) -> CoefficientPath:
    """Random symmetric ``B(t)`` on ``[0, sigma]`` with off-diagonal blocks vanishing at both ends.

    The off-diagonal blocks carry the factor ``sin(pi t / sigma)``.  With
    ``psd=True`` the path is ``L^T L`` for a block upper-triangular ``L`` whose
    off-diagonal block carries the same factor, so (B1) still holds exactly.
    """
    t = np.linspace(0.0, sigma, knots)
    phi = np.sin(np.pi * np.arange(knots) / (knots - 1))
    phi[[0, -1]] = 0.0
    if psd:
        L11 = _smooth_entries(rng, t, n * n, scale).reshape(knots, n, n)
        L22 = _smooth_entries(rng, t, n * n, scale).reshape(knots, n, n)
        L12 = _smooth_entries(rng, t, n * n, scale).reshape(knots, n, n) * phi[:, None, None]
        Z = np.zeros_like(L11)
        L = np.block([[L11, L12], [Z, L22]])
        values = np.transpose(L, (0, 2, 1)) @ L / math.sqrt(n)
    else:
        d = n * (n + 1) // 2
        B11 = _sym_from_entries(_smooth_entries(rng, t, d, scale), n)
        B22 = _sym_from_entries(_smooth_entries(rng, t, d, scale), n)
        B12 = _smooth_entries(rng, t, n * n, scale).reshape(knots, n, n) * phi[:, None, None]
        values = np.block([[B11, B12], [np.transpose(B12, (0, 2, 1)), B22]])
    values = 0.5 * (values + np.transpose(values, (0, 2, 1)))
    return CoefficientPath(t, values)


def suite_cases(seed: int, cases: int, n_max: int = 3, psd: bool = False) -> list[SuiteCase]:
    """Deterministic list of random (B1) cases; ``n`` cycles through ``1..n_max``."""
    root = np.random.SeedSequence(seed)
    out = []
    for i, child in enumerate(root.spawn(cases)):
        rng = np.random.default_rng(child)
        n = 1 + i % n_max
        sigma = float(rng.uniform(0.5, 2.0))
        out.append(SuiteCase(seed, i, n, sigma, random_b1_path(rng, n, sigma, psd=psd), psd))
    return out


# identity suites

IDENTITIES = (
    "signature-bare",
    "signature-nullity",
    "bott-L0",
    "bott-sqrt",
    "bott-periodic",
    "double-iterate",
    "oracle-L0",
    "oracle-sqrt",
    "difference-bound",
    "orthogonal-endpoint",
    "squeeze",
    "omega-bounds",
    "monotonicity",
    "psd-iterates",
    "psd-positivity",
)

K_MAX = 6
M_MAX = 6
Z_TURNS = (Fraction(0), Fraction(1, 2), Fraction(1, 3))
SQUEEZE_THETAS = tuple(math.pi * k / 6 for k in range(1, 6))


@dataclass
class CaseOutcome:
    case: int
    checks: dict[str, tuple[bool, dict]]


def _random_unitary_symplectic(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    Q, R = np.linalg.qr(Z)
    U = Q * (np.diag(R) / np.abs(np.diag(R)))
    A, Bm = U.real, U.imag
    return np.block([[A, -Bm], [Bm, A]])


def check_case(case: SuiteCase, psd_case: SuiteCase, families: tuple[str, ...] = IDENTITIES) -> CaseOutcome:
    """Evaluate every identity on one random (B1) path and one semipositive path."""
    from .galerkin import block_positivity, index_from_galerkin, monotonicity_suite
    from .iteration import (IndexCache, bott_L0, bott_periodic, bott_sqrt, iterate_brake,
                            monotonicity_check, double_iterate_relation)
    from .lagrangian import i_L, i_omega_L0, i_sqrt
    from .omega import check_omega_bounds
    from .paths import fundamental_solution, path_to
    from .signature import index_difference

    out: dict[str, tuple[bool, dict]] = {}
    n = case.n
    gamma = fundamental_solution(case.B)
    l0, l1, sq = i_L(gamma, 0), i_L(gamma, 1), i_sqrt(gamma)
    want = set(families)

    if "signature-bare" in want:
        d = index_difference(gamma, "bare")
        out["signature-bare"] = (d == l0.index - l1.index, {"signature_half": d, "i_L0": l0.index, "i_L1": l1.index})
    if "signature-nullity" in want:
        d = index_difference(gamma, "plus-nullity")
        rhs = l0.index + l0.nullity - l1.index - l1.nullity
        out["signature-nullity"] = (d == rhs, {"signature_half": d, "difference": rhs})
    cache = IndexCache(gamma)
    if "bott-L0" in want:
        reps = [bott_L0(gamma, k, cache) for k in range(1, K_MAX + 1)]
        bad = [r.to_dict() for r in reps if not r.agree]
        out["bott-L0"] = (not bad, {"mismatches": bad})
    if "bott-sqrt" in want:
        reps = [bott_sqrt(gamma, k, cache) for k in range(1, K_MAX + 1)]
        bad = [r.to_dict() for r in reps if not r.agree]
        out["bott-sqrt"] = (not bad, {"mismatches": bad})
    if "bott-periodic" in want:
        reps = [bott_periodic(gamma, z, m) for z in Z_TURNS for m in range(1, M_MAX + 1)]
        bad = [r.to_dict() for r in reps if not r.agree]
        out["bott-periodic"] = (not bad, {"mismatches": bad})
    if "double-iterate" in want:
        lhs, rhs = double_iterate_relation(gamma)
        out["double-iterate"] = (lhs == rhs, {"lhs": lhs, "rhs": rhs})
    if "oracle-L0" in want:
        g = index_from_galerkin(case.B, "L0")
        out["oracle-L0"] = (g.record.pair() == l0.pair(), {"galerkin": g.record.pair(), "path": l0.pair(),
                                                           "m": g.m_stable})
    if "oracle-sqrt" in want:
        g = index_from_galerkin(case.B, "sqrt")
        out["oracle-sqrt"] = (g.record.pair() == sq.pair(), {"galerkin": g.record.pair(), "path": sq.pair(),
                                                             "m": g.m_stable})
    if "difference-bound" in want:
        a = abs(l0.index - l1.index)
        b = abs(l0.index + l0.nullity - l1.index - l1.nullity)
        out["difference-bound"] = (a <= n and b <= n, {"bare": a, "with_nullity": b, "n": n})
    rng = np.random.default_rng(np.random.SeedSequence([case.seed, case.case, 7]))
    if "orthogonal-endpoint" in want:
        U = _random_unitary_symplectic(rng, n)
        p = path_to(U)
        a, b = i_L(p, 0), i_L(p, 1)
        out["orthogonal-endpoint"] = (a.index == b.index, {"i_L0": a.index, "i_L1": b.index})
    if "squeeze" in want:
        vals = [i_omega_L0(gamma, th).index for th in SQUEEZE_THETAS]
        ok = all(l0.index <= v <= l0.index + n for v in vals)
        out["squeeze"] = (ok, {"i_L0": l0.index, "i_omega": vals})
    if "omega-bounds" in want:
        two = cache.iterate(2)
        reps = [check_omega_bounds(two, w) for w in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))]
        out["omega-bounds"] = (all(r.holds for r in reps), {"reports": [r.to_dict() for r in reps]})
    if "monotonicity" in want:
        bump = random_b1_path(rng, n, case.sigma, scale=0.5, psd=True)
        grid = np.union1d(case.B.grid, bump.grid)
        upper = CoefficientPath(grid, case.B(grid) + bump(grid))
        reps = monotonicity_suite(upper, case.B)
        out["monotonicity"] = (all(r.holds for r in reps),
                               {"results": [vars(r) | {"holds": r.holds} for r in reps]})
    C = psd_case.B
    if "psd-iterates" in want:
        reps = [monotonicity_check(C, p, q, fam) for fam, p, q in
                (("sqrt", 2, 1), ("sqrt", 3, 2), ("sqrt", 4, 1), ("L0", 2, 1), ("L0", 3, 3), ("L1", 3, 2))]
        out["psd-iterates"] = (all(r.holds for r in reps), {"results": [vars(r) for r in reps]})
    if "psd-positivity" in want:
        gC = fundamental_solution(C)
        c0, c1, csq = i_L(gC, 0), i_L(gC, 1), i_sqrt(gC)
        strict = bool(np.min(np.linalg.eigvalsh(C.integral())) > 1e-12)
        ok = csq.index >= 0
        for r in (c0, c1):
            ok = ok and r.index + r.nullity >= 0 and r.index >= -n and (r.index >= 0 or not strict)
        blk = block_positivity(C)
        ok = ok and blk.holds
        out["psd-positivity"] = (ok, {"i_sqrt": csq.index, "L0": c0.pair(), "L1": c1.pair(),
                                      "strict": strict, "block": {"checked": blk.checked,
                                                                  "galerkin": blk.galerkin}})
    return CaseOutcome(case.case, out)


@dataclass
class SuiteReport:
    seed: int
    cases: int
    passed: dict[str, int]
    total: dict[str, int]
    first_failure: dict[str, dict]

    @property
    def ok(self) -> bool:
        return all(self.passed[k] == self.total[k] for k in self.total)

    def table(self) -> str:
        width = max(len(k) for k in self.total)
        lines = [f"{'identity':<{width}}  passed/total  status"]
        for k in self.total:
            status = "PASS" if self.passed[k] == self.total[k] else "FAIL"
            lines.append(f"{k:<{width}}  {self.passed[k]:>6}/{self.total[k]:<5}  {status}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"seed": self.seed, "cases": self.cases, "passed": self.passed, "total": self.total,
                "ok": self.ok, "first_failure": self.first_failure}


def _run_one(args):
    case, psd_case, families = args
    return case, check_case(case, psd_case, families)


def run_suite(seed: int, cases: int, n_max: int = 3, families: tuple[str, ...] = IDENTITIES,
              workers: int = 1) -> SuiteReport:
    """Run the identity suites; outcomes are merged in case order whatever ``workers`` is."""
    base = suite_cases(seed, cases, n_max)
    psd = suite_cases(seed + 1, cases, n_max, psd=True)
    jobs = [(c, p, families) for c, p in zip(base, psd)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    passed = {k: 0 for k in families}
    total = {k: 0 for k in families}
    first: dict[str, dict] = {}
    for (case, outcome), (_, psd_case, _) in zip(results, jobs):
        for name, (ok, detail) in outcome.checks.items():
            total[name] += 1
            passed[name] += int(ok)
            if not ok and name not in first:
                first[name] = {"case": case.case, "n": case.n, "detail": detail,
                               "B": case.B.to_dict(), "psd_B": psd_case.B.to_dict()}
    return SuiteReport(seed, cases, passed, total, first)
