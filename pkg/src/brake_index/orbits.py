"""
Reversible Hamiltonians, brake orbits found by shooting from ``L0``, their
minimal periods and associated symplectic paths, and spot checks of the
minimal-period bounds on the orbits found.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad, solve_ivp

from .lagrangian import IndexRecord, UndersampledPathError, i_L, i_sqrt
from .omega import i_nu_omega
from .iteration import iterate_brake
from .paths import CoefficientPath, SymplecticPath, fundamental_solution
from .symplectic import ValidationError, standard_J, standard_N

RTOL = 1e-12
ATOL = 1e-13
NEWTON_MAX = 50
RESIDUAL_TOL = 1e-10
STEP_TOL = 1e-8
SINGULAR_TOL = 1e-8
TRIVIAL_TOL = 1e-8
MOTION_TOL = 1e-4
PERIOD_TOL = 1e-6
K_MAX = 64
SYMMETRY_TOL = 1e-7
PSD_TOL = 1e-9


class NoOrbitFoundError(RuntimeError):
    pass


class TrivialOrbitWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """``H(x)`` on ``R^{2n}`` with gradient and optional analytic Hessian.

    ``B0`` is the quadratic part ``diag(B11, B22)`` when ``H = B0 x.x / 2 + Hhat(x)``.
    ``declared`` lists the global growth hypotheses (H2)-(H4) known to hold for
    ``Hhat``; they cannot be verified by sampling.
    """

    n: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian_fn: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = "custom"
    B0: np.ndarray | None = None
    declared: frozenset = frozenset()
    params: dict = field(default_factory=dict)

    def hessian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.hessian_fn is not None:
            return np.asarray(self.hessian_fn(x), dtype=float)
        h = 1e-5 * (1.0 + float(np.linalg.norm(x)))
        eye = np.eye(x.size)
        cols = [(self.gradient(x + h * e) - self.gradient(x - h * e)) / (2 * h) for e in eye]
        Hm = np.column_stack(cols)
        return 0.5 * (Hm + Hm.T)

    def quadratic_part(self) -> np.ndarray:
        return np.zeros((2 * self.n, 2 * self.n)) if self.B0 is None else np.asarray(self.B0, float)

    def _sample_points(self, rng: np.random.Generator, samples: int) -> np.ndarray:
        return rng.normal(scale=2.0, size=(samples, 2 * self.n))

    def is_reversible(self, rng: np.random.Generator | None = None, samples: int = 64) -> bool:
        """``|H(Nx) - H(x)| <= 1e-10 (1 + |H(x)|)`` on random points."""
        rng = rng or np.random.default_rng(0)
        N = standard_N(self.n)
        return all(abs(self.value(N @ x) - self.value(x)) <= 1e-10 * (1 + abs(self.value(x)))
                   for x in self._sample_points(rng, samples))

    def is_even(self, rng: np.random.Generator | None = None, samples: int = 64) -> bool:
        rng = rng or np.random.default_rng(1)
        return all(abs(self.value(-x) - self.value(x)) <= 1e-10 * (1 + abs(self.value(x)))
                   for x in self._sample_points(rng, samples))


# example library

def harmonic(n: int = 1) -> Hamiltonian:
    """``|x|^2 / 2``; every orbit is ``exp(tJ) x0`` with period ``2 pi``."""
    return Hamiltonian(n, lambda x: 0.5 * float(x @ x), lambda x: np.array(x, float),
                       lambda x: np.eye(2 * n), "harmonic", B0=np.eye(2 * n),
                       declared=frozenset({"H4"}), params={"n": n})


def radial_quartic(n: int = 1, a: float = 1.0) -> Hamiltonian:
    """``a |x|^2 / 2 + |x|^4 / 4``; orbits rotate with angular speed ``a + |x|^2``."""

    def hess(x):
        r2 = float(x @ x)
        return (a + r2) * np.eye(2 * n) + 2 * np.outer(x, x)

    return Hamiltonian(n, lambda x: 0.5 * a * float(x @ x) + 0.25 * float(x @ x) ** 2,
                       lambda x: (a + float(x @ x)) * np.asarray(x, float), hess,
                       "radial_quartic", B0=a * np.eye(2 * n),
                       declared=frozenset({"H2", "H3", "H4"}), params={"n": n, "a": a})


def anisotropic(a: float = 1.0, b: float = 4.0) -> Hamiltonian:
    """``(a x1^2 + b x2^2) / 2`` for ``n = 1``; frequency ``sqrt(a b)``."""
    if a < 0 or b < 0:
        raise ValidationError("a and b must be nonnegative")
    D = np.diag([a, b])
    return Hamiltonian(1, lambda x: 0.5 * float(x @ D @ x), lambda x: D @ x, lambda x: D.copy(),
                       "anisotropic", B0=D, declared=frozenset({"H4"}), params={"a": a, "b": b})


def even_quartic(n: int = 1, c: float = 0.5) -> Hamiltonian:
    """``sum_i (q_i^4 + p_i^4) / 4 + c q_i^2 p_i^2 / 2``, non-radial for ``c != 1``.

    The Hessian is semipositive for ``0 <= c <= 3``.
    """
    if not 0.0 <= c <= 3.0:
        raise ValidationError("c must lie in [0, 3] for a semipositive Hessian")

    def value(x):
        q, p = x[:n], x[n:]
        return float(np.sum(0.25 * (q**4 + p**4) + 0.5 * c * q**2 * p**2))

    def grad(x):
        q, p = x[:n], x[n:]
        return np.concatenate([q**3 + c * q * p**2, p**3 + c * p * q**2])

    def hess(x):
        q, p = x[:n], x[n:]
        Hm = np.zeros((2 * n, 2 * n))
        i = np.arange(n)
        Hm[i, i] = 3 * q**2 + c * p**2
        Hm[n + i, n + i] = 3 * p**2 + c * q**2
        Hm[i, n + i] = Hm[n + i, i] = 2 * c * q * p
        return Hm

    return Hamiltonian(n, value, grad, hess, "even_quartic",
                       declared=frozenset({"H2", "H3", "H4"}), params={"n": n, "c": c})


def duffing(k3: float = 1.0) -> Hamiltonian:
    """``x1^2 / 2 + x2^2 / 2 + k3 x2^4 / 4`` for ``n = 1``."""
    return Hamiltonian(1, lambda x: 0.5 * x[0] ** 2 + 0.5 * x[1] ** 2 + 0.25 * k3 * x[1] ** 4,
                       lambda x: np.array([x[0], x[1] + k3 * x[1] ** 3]),
                       lambda x: np.diag([1.0, 1.0 + 3 * k3 * x[1] ** 2]), "duffing",
                       B0=np.eye(2), declared=frozenset({"H2", "H3", "H4"}), params={"k3": k3})


def polynomial(n: int, terms: list[dict]) -> Hamiltonian:
    """Sum of monomials ``coef * prod x_i^{powers_i}``; Hessian by finite differences."""
    coefs = np.array([float(t["coef"]) for t in terms])
    powers = np.array([t["powers"] for t in terms], dtype=int)
    if powers.ndim != 2 or powers.shape[1] != 2 * n or np.any(powers < 0):
        raise ValidationError("each term needs 2n nonnegative integer powers")

    def value(x):
        return float(np.sum(coefs * np.prod(x[None, :] ** powers, axis=1)))

    def grad(x):
        out = np.zeros(2 * n)
        for i in range(2 * n):
            p = powers.copy()
            mask = p[:, i] > 0
            fac = p[:, i].astype(float)
            p[mask, i] -= 1
            out[i] = np.sum((coefs * fac * np.prod(x[None, :] ** p, axis=1))[mask])
        return out

    return Hamiltonian(n, value, grad, None, "polynomial", params={"n": n, "terms": terms})


LIBRARY = {
    "harmonic": harmonic,
    "radial_quartic": radial_quartic,
    "quartic": radial_quartic,
    "anisotropic": anisotropic,
    "even_quartic": even_quartic,
    "duffing": duffing,
    "polynomial": polynomial,
}


def from_spec(spec: dict) -> Hamiltonian:
    kind = spec.get("kind")
    if kind not in LIBRARY:
        raise ValidationError(f"unknown Hamiltonian kind {kind!r}")
    return LIBRARY[kind](**spec.get("params", {}))


# orbits

def _rhs(H: Hamiltonian, variational: bool):
    n2 = 2 * H.n
    J = standard_J(H.n)

    def f(t, y):
        x = y[:n2]
        dx = J @ H.gradient(x)
        if not variational:
            return dx
        Phi = y[n2:].reshape(n2, n2)
        return np.concatenate([dx, (J @ H.hessian(x) @ Phi).ravel()])

    return f


def _flow(H: Hamiltonian, x0: np.ndarray, t_end: float, variational: bool = False, dense: bool = False):
    n2 = 2 * H.n
    y0 = np.concatenate([x0, np.eye(n2).ravel()]) if variational else np.array(x0, float)
    sol = solve_ivp(_rhs(H, variational), (0.0, t_end), y0, method="DOP853", rtol=RTOL, atol=ATOL,
                    dense_output=dense)
    if not sol.success:
        raise NoOrbitFoundError(f"integration failed: {sol.message}")
    return sol


@dataclass(frozen=True, eq=False)
class BrakeOrbit:
    """``T``-periodic solution with ``x(-t) = N x(t)``, generated on ``[0, T/2]`` and reflected."""

    H: Hamiltonian
    T: float
    q0: np.ndarray
    t: np.ndarray = field(repr=False)
    x: np.ndarray = field(repr=False)
    residual: float
    energy_drift: float
    symmetric: bool
    newton_steps: int
    trivial: bool
    _dense: Callable = field(repr=False)

    @property
    def n(self) -> int:
        return self.H.n

    @property
    def amplitude(self) -> float:
        return float(np.max(np.linalg.norm(self.x, axis=1)))

    def at(self, t) -> np.ndarray:
        """Trajectory at arbitrary times, shape ``(len(t), 2n)``."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        s = np.mod(t, self.T)
        half = self.T / 2
        out = np.empty((t.size, 2 * self.n))
        lo = s <= half
        if np.any(lo):
            out[lo] = self._dense(s[lo]).T[:, : 2 * self.n]
        if np.any(~lo):
            N = standard_N(self.n)
            out[~lo] = (N @ self._dense(self.T - s[~lo])[: 2 * self.n]).T
        return out

    def to_csv(self) -> str:
        n2 = 2 * self.n
        head = "t," + ",".join(f"x{i + 1}" for i in range(n2))
        rows = [head] + [",".join([repr(float(a))] + [repr(float(v)) for v in row])
                         for a, row in zip(self.t, self.x)]
        return "\n".join(rows) + "\n"

    def to_dict(self) -> dict:
        return {"hamiltonian": self.H.name, "T": self.T, "q0": self.q0.tolist(),
                "residual": self.residual, "energy_drift": self.energy_drift,
                "symmetric": self.symmetric, "trivial": self.trivial, "amplitude": self.amplitude,
                "newton_steps": self.newton_steps}


def _newton_step(Jac: np.ndarray, F: np.ndarray) -> np.ndarray:
    # pseudo-inverse step; directions with singular value below SINGULAR_TOL are
    # families of solutions (e.g. the linear flow at a resonant T) and stay fixed
    U, s, Vt = np.linalg.svd(Jac)
    keep = s > SINGULAR_TOL
    return -(Vt[keep].T @ ((U[:, keep].T @ F) / s[keep]))


def shoot_brake(H: Hamiltonian, T: float, q0, samples: int = 1024) -> BrakeOrbit:
    """Newton shooting for ``x1(T/2) = 0`` from ``x(0) = (0, q0)``.

    Converged once ``|x1(T/2)| < 1e-10`` and the next Newton step is below
    ``1e-8 (1 + |q0|)``; the step test keeps degenerate near-roots (a slowly
    moving component close to the origin) from being accepted as orbits.

    Raises ``NoOrbitFoundError`` after 50 Newton steps; warns with
    ``TrivialOrbitWarning`` when the solution collapses to the origin.
    """
    if T <= 0:
        raise ValidationError("T must be positive")
    if not H.is_reversible():
        raise ValidationError("Hamiltonian is not reversible")
    n = H.n
    q = np.atleast_1d(np.asarray(q0, dtype=float)).copy()
    if q.shape != (n,) or not np.all(np.isfinite(q)):
        raise ValidationError(f"q0 must be a finite vector of length {n}")
    half = T / 2

    def residual(qv):
        sol = _flow(H, np.concatenate([np.zeros(n), qv]), half, variational=True)
        y = sol.y[:, -1]
        Phi = y[2 * n:].reshape(2 * n, 2 * n)
        return y[:n], Phi[:n, n:]

    F, Jac = residual(q)
    steps = 0
    while True:
        dq = _newton_step(Jac, F)
        base = np.linalg.norm(F)
        if base < RESIDUAL_TOL and (np.linalg.norm(dq) <= STEP_TOL * (1 + np.linalg.norm(q))
                                    or np.linalg.norm(q) < TRIVIAL_TOL):
            break
        if steps >= NEWTON_MAX:
            raise NoOrbitFoundError(f"Newton did not converge in {NEWTON_MAX} steps (|F|={base:.2e})")
        lam = 1.0
        for _ in range(12):
            trial = q + lam * dq
            Ft, Jt = residual(trial)
            if np.linalg.norm(Ft) < base or lam < 1e-3 or base < RESIDUAL_TOL:
                break
            lam *= 0.5
        q, F, Jac = trial, Ft, Jt
        steps += 1
        if not np.all(np.isfinite(q)) or np.linalg.norm(q) > 1e8:
            raise NoOrbitFoundError("Newton iterates diverged")
    x0 = np.concatenate([np.zeros(n), q])
    sol = _flow(H, x0, half, dense=True)
    t_half = np.linspace(0.0, half, samples // 2 + 1)
    xs = sol.sol(t_half).T
    N = standard_N(n)
    t_full = np.concatenate([t_half, T - t_half[-2::-1]])
    x_full = np.concatenate([xs, (N @ xs[-2::-1].T).T])
    E = np.array([H.value(v) for v in x_full])
    drift = float(np.max(np.abs(E - E[0])))
    res = float(np.linalg.norm(xs[0, :n]) + np.linalg.norm(xs[-1, :n]))
    amp = float(np.max(np.linalg.norm(x_full, axis=1)))
    motion = float(np.max(np.linalg.norm(x_full - x_full[0], axis=1)))
    trivial = bool(np.linalg.norm(q) < TRIVIAL_TOL or motion < MOTION_TOL * amp)
    if trivial:
        warnings.warn("shooting converged to a (numerically) constant solution", TrivialOrbitWarning,
                      stacklevel=2)
    orbit = BrakeOrbit(H, float(T), q, t_full, x_full, res, drift, False, steps, trivial, sol.sol)
    tt = np.linspace(0.0, T, 257)
    sym = float(np.max(np.abs(orbit.at(tt + half) + orbit.at(tt)))) < SYMMETRY_TOL * max(1.0, amp)
    object.__setattr__(orbit, "symmetric", bool(sym and not trivial))
    return orbit


def minimal_period(orbit: BrakeOrbit, k_max: int = K_MAX, checks: int = 512) -> tuple[float, int]:
    """Smallest ``T/k`` with ``max_t |x(t + T/k) - x(t)| < 1e-6 * amplitude``."""
    amp = orbit.amplitude
    if orbit.trivial:
        raise ValidationError("orbit is constant")
    t = np.linspace(0.0, orbit.T, checks, endpoint=False)
    xt = orbit.at(t)
    best = 1
    for k in range(2, k_max + 1):
        shift = orbit.at(t + orbit.T / k)
        if float(np.max(np.linalg.norm(shift - xt, axis=1))) < PERIOD_TOL * amp:
            best = k
    return orbit.T / best, best


def orbit_path(orbit: BrakeOrbit, length: float, per_unit: int | None = None) -> SymplecticPath:
    """Fundamental solution of ``y' = J H''(x(t)) y`` on ``[0, length]``, ``length <= T/2``."""
    if not 0 < length <= orbit.T / 2 + 1e-12:
        raise ValidationError("length must lie in (0, T/2]")
    n2 = 2 * orbit.n
    x0 = orbit.at(0.0)[0]
    sol = _flow(orbit.H, x0, length, variational=True, dense=True)
    hmax = max(np.linalg.norm(orbit.H.hessian(v), 2) for v in orbit.x)
    count = per_unit or int(max(64, 32 * (1 + hmax) * orbit.n))
    samples = max(129, int(math.ceil(count * length)) + 1)
    while True:
        grid = np.linspace(0.0, length, samples)
        mats = sol.sol(grid)[n2:].T.reshape(-1, n2, n2)
        path = SymplecticPath(grid, mats)
        try:
            i_L(path, 0)
            return path
        except UndersampledPathError:
            if samples > 1 << 16:
                raise
            samples = 2 * samples - 1


def hessian_path(orbit: BrakeOrbit, length: float, knots: int = 257) -> CoefficientPath:
    """Piecewise-linear ``B(t) = H''(x(t))`` on ``[0, length]`` with (B1) blocks projected at the ends."""
    t = np.linspace(0.0, length, knots)
    vals = np.array([orbit.H.hessian(v) for v in orbit.at(t)])
    n = orbit.n
    for idx in (0, -1):
        off = max(np.max(np.abs(vals[idx][:n, n:])), np.max(np.abs(vals[idx][n:, :n])))
        if off > 1e-6 * (1 + np.max(np.abs(vals[idx]))):
            raise ValidationError(f"off-diagonal Hessian block {off:.2e} at t={t[idx]}")
        vals[idx][:n, n:] = 0.0
        vals[idx][n:, :n] = 0.0
    return CoefficientPath(t, vals)


def orbit_index(orbit: BrakeOrbit, mode: str = "brake") -> IndexRecord:
    """``i_{L0}`` of the path on ``[0, T/2]`` (brake) or ``i_{sqrt(-1)}^{L0}`` on ``[0, T/4]`` (symmetric)."""
    if mode == "brake":
        return i_L(orbit_path(orbit, orbit.T / 2), 0)
    if mode == "symmetric":
        if not orbit.symmetric:
            raise ValidationError("orbit is not symmetric")
        return i_sqrt(orbit_path(orbit, orbit.T / 4))
    raise ValidationError("mode must be 'brake' or 'symmetric'")


def h22_integral(orbit: BrakeOrbit, length: float | None = None) -> np.ndarray:
    """``int_0^{T/2} H''_22(x(t)) dt`` by composite Simpson on a fine grid."""
    from scipy.integrate import simpson

    length = orbit.T / 2 if length is None else length
    t = np.linspace(0.0, length, 2049)
    n = orbit.n
    vals = np.array([orbit.H.hessian(v)[n:, n:] for v in orbit.at(t)])
    return simpson(vals, x=t, axis=0)


def mechanical_period(V: Callable[[float], float], q0: float) -> float:
    """Period of ``x1^2/2 + V(x2)`` from the turning point ``q0``, with ``V`` even and increasing on ``[0, q0]``."""
    E = V(q0)

    def integrand(phi):
        q = q0 * math.sin(phi)
        gap = E - V(q)
        return q0 * math.cos(phi) / math.sqrt(2 * gap) if gap > 0 else 0.0

    val, _ = quad(integrand, 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13, limit=200)
    return 4 * val


@dataclass
class SpotCheck:
    which: str
    applicable: bool
    k: int
    passed: bool | None
    bound: str
    notes: list[str] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"which": self.which, "applicable": self.applicable, "k": self.k,
                "passed": self.passed, "bound": self.bound, "notes": self.notes, "values": self.values}


def _psd_along(orbit: BrakeOrbit) -> bool:
    return all(np.min(np.linalg.eigvalsh(orbit.H.hessian(v))) >= -PSD_TOL for v in orbit.x)


def _const_index(B0: np.ndarray, length: float, family: str) -> tuple[int, int]:
    path = fundamental_solution(CoefficientPath.constant(B0, length))
    rec = i_sqrt(path) if family == "sqrt" else i_L(path, 0)
    return rec.pair()


def step_inequalities(orbit: BrakeOrbit, k: int) -> dict:
    """Index inequalities on ``gamma_{x_tau}`` for the minimal period ``tau = T/k``."""
    tau = orbit.T / k
    g = orbit_path(orbit, tau / 2)
    n = orbit.n
    l1 = i_L(g, 1)
    two = iterate_brake(g, 2)
    p1 = i_nu_omega(two, 0.0)
    return {"i_L1": l1.index, "nu_L1": l1.nullity, "i_1_sq": p1.index, "nu_1_sq": p1.nullity,
            "l1_bound": l1.index + l1.nullity >= 1, "double_bound": p1.index + p1.nullity - n >= 1}


def period_spotcheck(orbit: BrakeOrbit, which: str) -> SpotCheck:
    """Check a minimal-period conclusion on a found orbit.

    The bound is tested when the sampled hypotheses hold and the orbit satisfies
    the index bound ``i(x_T) <= i(B0) + nu(B0) + 1`` that the variational orbit
    carries; otherwise the report is marked inapplicable.

    ``which`` selects the bound on ``k = T / tau_min``:

    - ``brake``: ``k <= 2n + 2``, and ``k <= 2`` when ``int H''_22 > 0``
    - ``brake-planar``: ``n = 1``, ``k`` in ``{1, 2}``
    - ``brake-shifted``: ``k <= 2s + 2n + 2`` with ``s = i_L0(B0) + nu_L0(B0)``
    - ``symmetric``: ``k <= 3`` and odd
    - ``symmetric-shifted``: ``k <= 4s + 7`` (``4s + 3`` for even ``s``), odd
    """
    if which not in ("brake", "brake-planar", "brake-shifted", "symmetric", "symmetric-shifted"):
        raise ValidationError(f"unknown spot check {which!r}")
    H, n, T = orbit.H, orbit.n, orbit.T
    if orbit.trivial:
        return SpotCheck(which, False, 0, None, "", ["orbit is constant"])
    _, k = minimal_period(orbit)
    rep = SpotCheck(which, False, k, None, "")
    missing = {"H2", "H3", "H4"} - set(H.declared)
    if which in ("brake", "brake-planar", "symmetric") and np.any(H.quadratic_part()):
        missing.add("H3")
    if missing:
        rep.notes.append("declared growth hypotheses missing: " + ",".join(sorted(missing)))
    if not H.is_reversible():
        rep.notes.append("(H1) reversibility fails")
        return rep
    psd = _psd_along(orbit)
    if which != "brake-planar" and not psd:
        rep.notes.append("(H5) H'' not semipositive along the orbit")
        return rep
    symmetric_kind = which in ("symmetric", "symmetric-shifted")
    if symmetric_kind and not (H.is_even() and orbit.symmetric):
        rep.notes.append("(H6) or orbit symmetry fails")
        return rep
    if which == "brake-planar" and n != 1:
        rep.notes.append("requires n = 1")
        return rep
    B0 = H.quadratic_part() if which in ("brake-shifted", "symmetric-shifted") else np.zeros((2 * n, 2 * n))
    if psd:
        rep.values.update(step_inequalities(orbit, k))
    if symmetric_kind:
        i0, v0 = _const_index(B0, T / 4, "sqrt")
        i_orbit = orbit_index(orbit, "symmetric").index
    else:
        i0, v0 = _const_index(B0, T / 2, "L0")
        i_orbit = orbit_index(orbit, "brake").index
    rep.values.update({"i_B0": i0, "nu_B0": v0, "i_orbit": i_orbit})
    if i_orbit > i0 + v0 + 1:
        rep.notes.append(f"orbit index {i_orbit} exceeds i(B0)+nu(B0)+1 = {i0 + v0 + 1}")
        return rep
    rep.applicable = True
    s = i0 + v0
    if which in ("brake", "brake-shifted"):
        kmax = 2 * s + 2 * n + 2
        rep.bound, ok = f"k <= {kmax}", k <= kmax
        h22 = h22_integral(orbit)
        h22_pos = bool(np.min(np.linalg.eigvalsh(0.5 * (h22 + h22.T))) > 0)
        rep.values["h22_positive"] = h22_pos
        if h22_pos:
            sharp = 2 * s + 2 if which == "brake-shifted" else 2
            rep.bound += f" and k <= {sharp}"
            ok = ok and k <= sharp
    elif which == "brake-planar":
        rep.bound, ok = "k in {1, 2}", k in (1, 2)
    else:
        if which == "symmetric":
            s = 0
        kmax = 4 * s + (3 if s % 2 == 0 else 7)
        rep.bound = f"k <= {kmax}" + (" and k odd" if kmax == 3 else "")
        ok = k <= kmax and (k % 2 == 1)
    rep.passed = bool(ok and rep.values.get("l1_bound", True) and rep.values.get("double_bound", True))
    return rep


@dataclass
class LinearBoundReport:
    applicable: bool
    notes: list[str] = field(default_factory=list)
    values: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.applicable and all(v for k, v in self.values.items() if k.startswith("ok_"))

    def to_dict(self) -> dict:
        return {"applicable": self.applicable, "holds": self.holds, "notes": self.notes, "values": self.values}


def linear_bound_check(B0: np.ndarray, T: float) -> LinearBoundReport:
    """Ingredients of the small-``T`` corollaries for a constant block-diagonal ``B0 >= 0``."""
    B0 = np.asarray(B0, dtype=float)
    n = B0.shape[0] // 2
    if np.max(np.abs(B0[:n, n:])) > 0 or np.min(np.linalg.eigvalsh(B0)) < -PSD_TOL:
        raise ValidationError("B0 must be semipositive and block diagonal")
    norm = float(np.linalg.norm(B0, 2))
    rep = LinearBoundReport(False)
    if norm == 0.0:
        rep.notes.append("B0 = 0: the corollaries assume B0 != 0; reporting i + nu per family")
        rep.applicable = True
        i0, v0 = _const_index(B0, T / 2, "L0")
        rep.values.update({"i_L0": i0, "nu_L0": v0, "ok_sum": i0 + v0 == 0})
        return rep
    if T >= math.pi / norm:
        rep.notes.append(f"T = {T} >= pi/||B0|| = {math.pi / norm}")
        return rep
    rep.applicable = True
    c = 0.5 * (math.pi / T + norm)
    cI = c * np.eye(2 * n)
    g = fundamental_solution(CoefficientPath.constant(cI, T / 2))
    from .symplectic import nu_lagrangian

    nus = [nu_lagrangian(M, 0) for M in g.samples[1:]]
    iL0_c = i_L(g, 0)
    isq_c = i_sqrt(fundamental_solution(CoefficientPath.constant(cI, T / 4)))
    iL0, vL0 = _const_index(B0, T / 2, "L0")
    isq, vsq = _const_index(B0, T / 4, "sqrt")
    rep.values.update({
        "c": c, "i_L0_cI": iL0_c.index, "i_sqrt_cI": isq_c.index, "i_L0": iL0, "nu_L0": vL0,
        "i_sqrt": isq, "nu_sqrt": vsq,
        "ok_no_crossings": max(nus) == 0,
        "ok_cI": iL0_c.index == 0 and isq_c.index == 0,
        "ok_squeeze_L0": 0 <= iL0 + vL0 <= iL0_c.index,
        "ok_squeeze_sqrt": 0 <= isq + vsq <= isq_c.index,
    })
    return rep


# multistart suite

SUITE_SYSTEMS = (
    ("radial_quartic", {"n": 1, "a": 0.0}),
    ("radial_quartic", {"n": 2, "a": 0.0}),
    ("even_quartic", {"n": 1, "c": 0.5}),
    ("even_quartic", {"n": 2, "c": 1.0}),
    ("duffing", {"k3": 1.0}),
)
SUITE_PERIODS = (2 * math.pi, 3.0)


@dataclass
class OrbitSuiteEntry:
    system: str
    T: float
    q0: list[float]
    found: bool
    trivial: bool = False
    k: int = 0
    checks: list[SpotCheck] = field(default_factory=list)
    note: str = ""

    @property
    def violations(self) -> list[str]:
        return [c.which for c in self.checks if c.passed is False]


def orbit_suite(seed: int = 0, starts: int = 3, systems=SUITE_SYSTEMS, periods=SUITE_PERIODS,
                theorems=("brake", "symmetric")) -> list[OrbitSuiteEntry]:
    """Shoot from random starts and spot-check every nonconstant orbit found.

    Non-convergence is recorded, never counted as a failure.
    """
    rng = np.random.default_rng(seed)
    out = []
    for kind, params in systems:
        H = from_spec({"kind": kind, "params": params})
        label = f"{kind}({', '.join(f'{k}={v}' for k, v in params.items())})"
        for T in periods:
            for _ in range(starts):
                q0 = rng.uniform(0.3, 2.0, size=H.n) * rng.choice([-1.0, 1.0], size=H.n)
                entry = OrbitSuiteEntry(label, float(T), q0.tolist(), False)
                try:
                    with warnings.catch_warnings():
                        warnings.simplefilter("ignore", TrivialOrbitWarning)
                        orbit = shoot_brake(H, T, q0)
                except NoOrbitFoundError as exc:
                    entry.note = str(exc)
                    out.append(entry)
                    continue
                entry.found, entry.trivial = True, orbit.trivial
                if not orbit.trivial:
                    entry.k = minimal_period(orbit)[1]
                    entry.checks = [period_spotcheck(orbit, w) for w in theorems]
                out.append(entry)
    return out
