"""
Coefficient paths B(t), symplectic paths gamma(t) and the fundamental
solution of ``gamma' = J B(t) gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import expm, schur

from .symplectic import (
    ValidationError,
    half_dim,
    standard_J,
    standard_N,
    symplectic_defect,
)

STEPS_PER_UNIT = 2048
B1_TOL = 1e-10
SYM_TOL = 1e-12


class IntegrationError(RuntimeError):
    """Symplectic drift exceeded tolerance; retry with more steps."""


@dataclass(frozen=True, eq=False)
class CoefficientPath:
    """Piecewise-linear path of symmetric 2n x 2n matrices on ``[0, tau]``.

    With ``periodic=True`` the path is evaluated modulo ``tau``.
    """

    grid: np.ndarray
    values: np.ndarray
    periodic: bool = False

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2:
            raise ValidationError("grid needs at least two points")
        if grid[0] != 0.0:
            raise ValidationError("grid must start at 0")
        if np.any(np.diff(grid) <= 0):
            raise ValidationError("grid must be strictly increasing")
        if values.shape[0] != grid.size or values.ndim != 3 or values.shape[1] != values.shape[2]:
            raise ValidationError("values must have shape (len(grid), 2n, 2n)")
        half_dim(values[0])
        asym = np.max(np.abs(values - np.transpose(values, (0, 2, 1))))
        if asym > SYM_TOL * max(1.0, float(np.max(np.abs(values)))):
            raise ValidationError(f"coefficient samples are not symmetric (defect {asym:.2e})")
        values = 0.5 * (values + np.transpose(values, (0, 2, 1)))
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        grid.setflags(write=False)
        values.setflags(write=False)

    @property
    def tau(self) -> float:
        return float(self.grid[-1])

    @property
    def n(self) -> int:
        return self.values.shape[1] // 2

    @classmethod
    def constant(cls, B: np.ndarray, tau: float) -> "CoefficientPath":
        B = np.asarray(B, dtype=float)
        return cls(np.array([0.0, tau]), np.stack([B, B]))

    @classmethod
    def from_function(cls, f, tau: float, knots: int = 65) -> "CoefficientPath":
        grid = np.linspace(0.0, tau, knots)
        return cls(grid, np.stack([np.asarray(f(t), dtype=float) for t in grid]))

    def __call__(self, t):
        """Evaluate at scalar or array ``t`` (returns ``(2n, 2n)`` or ``(len(t), 2n, 2n)``)."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        if self.periodic:
            t_arr = np.mod(t_arr, self.tau)
        else:
            t_arr = np.clip(t_arr, 0.0, self.tau)
        idx = np.clip(np.searchsorted(self.grid, t_arr, side="right") - 1, 0, self.grid.size - 2)
        t0 = self.grid[idx]
        h = self.grid[idx + 1] - t0
        w = ((t_arr - t0) / h)[:, None, None]
        out = (1.0 - w) * self.values[idx] + w * self.values[idx + 1]
        return out[0] if np.ndim(t) == 0 else out

    def b1_defect(self) -> float:
        n = self.n
        ends = self.values[[0, -1]]
        return float(max(np.max(np.abs(ends[:, :n, n:])), np.max(np.abs(ends[:, n:, :n]))))

    def satisfies_b1(self, tol: float = B1_TOL) -> bool:
        return self.b1_defect() <= tol

    def min_eigenvalue(self) -> float:
        return float(np.min(np.linalg.eigvalsh(self.values)))

    def is_semipositive(self, tol: float = 1e-12) -> bool:
        # piecewise-linear interpolation of PSD knots stays PSD
        return self.min_eigenvalue() >= -tol

    def restrict(self, t_end: float) -> "CoefficientPath":
        if not 0 < t_end <= self.tau + 1e-15:
            raise ValidationError("restriction end must lie in (0, tau]")
        inner = self.grid[(self.grid > 0) & (self.grid < t_end - 1e-14)]
        grid = np.concatenate([[0.0], inner, [t_end]])
        return CoefficientPath(grid, self(grid))

    def integral(self) -> np.ndarray:
        h = np.diff(self.grid)[:, None, None]
        return np.sum(0.5 * h * (self.values[1:] + self.values[:-1]), axis=0)

    def shifted(self, delta: np.ndarray) -> "CoefficientPath":
        return CoefficientPath(self.grid, self.values + np.asarray(delta)[None], self.periodic)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "n": self.n,
            "grid": self.grid.tolist(),
            "B": self.values.tolist(),
            "periodic": self.periodic,
        }


@dataclass(frozen=True, eq=False)
class SymplecticPath:
    """Samples of a continuous symplectic path on ``[0, tau]``."""

    grid: np.ndarray
    samples: np.ndarray
    source: CoefficientPath | None = field(default=None, repr=False)
    start_at_identity: bool = True

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        samples = np.asarray(self.samples, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValidationError("grid must be strictly increasing with >= 2 points")
        if samples.shape[0] != grid.size:
            raise ValidationError("one sample per grid point required")
        half_dim(samples[0])
        if self.start_at_identity:
            if np.max(np.abs(samples[0] - np.eye(samples.shape[1]))) > 1e-12:
                raise ValidationError("path must start at the identity")
            samples = samples.copy()
            samples[0] = np.eye(samples.shape[1])
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "samples", samples)
        grid.setflags(write=False)
        samples.setflags(write=False)

    @property
    def tau(self) -> float:
        return float(self.grid[-1] - self.grid[0])

    @property
    def t0(self) -> float:
        return float(self.grid[0])

    @property
    def n(self) -> int:
        return self.samples.shape[1] // 2

    @property
    def end(self) -> np.ndarray:
        return self.samples[-1]

    def max_defect(self) -> float:
        J = standard_J(self.n)
        S = self.samples
        E = np.einsum("kji,jl,klm->kim", S, J, S) - J
        scale = np.maximum(1.0, np.einsum("kij,kij->k", S, S))
        return float(np.max(np.linalg.norm(E, axis=(1, 2)) / scale))

    def at(self, t: float) -> np.ndarray:
        """Matrix at time ``t``; re-integrates from the nearest sample when a source exists."""
        if t <= self.grid[0]:
            return self.samples[0]
        if t >= self.grid[-1]:
            return self.samples[-1]
        i = int(np.searchsorted(self.grid, t, side="right") - 1)
        if self.grid[i] == t:
            return self.samples[i]
        if self.source is not None:
            return _integrate_segment(self.source, self.grid[i], t, self.samples[i], 16)
        return _hermite(self, i, t)

    def restrict(self, t_end: float) -> "SymplecticPath":
        """Restriction to ``[t0, t_end]`` with the endpoint inserted exactly."""
        keep = self.grid < t_end - 1e-13
        grid = np.concatenate([self.grid[keep], [t_end]])
        samples = np.concatenate([self.samples[keep], [self.at(t_end)]])
        return SymplecticPath(grid, samples, self.source, self.start_at_identity)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "n": self.n,
            "grid": self.grid.tolist(),
            "samples": self.samples.tolist(),
        }

    def to_csv(self) -> str:
        k = self.samples.shape[1]
        header = ["t"] + [f"m{i}{j}" for i in range(k) for j in range(k)]
        lines = [",".join(header)]
        for t, M in zip(self.grid, self.samples):
            lines.append(",".join([repr(float(t))] + [repr(float(v)) for v in M.ravel()]))
        return "\n".join(lines) + "\n"


def _hermite(path: SymplecticPath, i: int, t: float) -> np.ndarray:
    g, S = path.grid, path.samples
    d = np.gradient(S, g, axis=0)
    h = g[i + 1] - g[i]
    s = (t - g[i]) / h
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    M = h00 * S[i] + h10 * h * d[i] + h01 * S[i + 1] + h11 * h * d[i + 1]
    return symplectic_correct(M)


def symplectic_correct(M: np.ndarray) -> np.ndarray:
    """First-order projection toward Sp(2n): ``M (I + J E / 2)`` with ``E = M^T J M - J``."""
    J = standard_J(M.shape[0] // 2)
    E = M.T @ J @ M - J
    return M @ (np.eye(M.shape[0]) + 0.5 * J @ E)


def _rk4_steps(B: CoefficientPath, t_nodes: np.ndarray, Y0: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Classical RK4 through ``t_nodes``; returns the state at each node."""
    h = np.diff(t_nodes)
    # evaluate B just inside each step so that knot kinks never straddle a stage
    left = B(np.minimum(t_nodes[:-1] + 1e-14 * h, t_nodes[1:]))
    mid = B(t_nodes[:-1] + 0.5 * h)
    right = B(np.maximum(t_nodes[1:] - 1e-14 * h, t_nodes[:-1]))
    JL, JM, JR = J @ left, J @ mid, J @ right
    I = np.eye(J.shape[0])
    out = np.empty((t_nodes.size,) + Y0.shape)
    out[0] = Y = Y0
    for k in range(h.size):
        hk = h[k]
        k1 = JL[k] @ Y
        k2 = JM[k] @ (Y + 0.5 * hk * k1)
        k3 = JM[k] @ (Y + 0.5 * hk * k2)
        k4 = JR[k] @ (Y + hk * k3)
        Y = Y + (hk / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        E = Y.T @ J @ Y - J
        Y = Y @ (I + 0.5 * J @ E)
        out[k + 1] = Y
    return out


def _integrate_segment(B, ta, tb, Ya, substeps):
    J = standard_J(B.n)
    nodes = _aligned_nodes(B, ta, tb, max(substeps, 1) / max(tb - ta, 1e-300))
    return _rk4_steps(B, nodes, Ya, J)[-1]


def _aligned_nodes(B: CoefficientPath, ta: float, tb: float, per_unit: float) -> np.ndarray:
    """Integration nodes on [ta, tb] that contain every coefficient knot inside it."""
    if B.periodic:
        P = B.tau
        k0, k1 = math.floor(ta / P), math.ceil(tb / P)
        knots = np.concatenate([B.grid[:-1] + j * P for j in range(k0, k1 + 1)])
    else:
        knots = B.grid
    inner = knots[(knots > ta) & (knots < tb)]
    breaks = np.concatenate([[ta], inner, [tb]])
    nodes = [np.array([ta])]
    for a, b in zip(breaks[:-1], breaks[1:]):
        m = max(1, int(math.ceil((b - a) * per_unit - 1e-9)))
        nodes.append(np.linspace(a, b, m + 1)[1:])
    return np.concatenate(nodes)


def fundamental_solution(
    B: CoefficientPath,
    steps: int | None = None,
    tau: float | None = None,
    stabilize_tol: float = 1e-9,
    max_doublings: int = 4,
) -> SymplecticPath:
    """Integrate ``gamma' = J B(t) gamma``, ``gamma(0) = I`` on ``[0, tau]``.

    Parameters
    ----------
    B : CoefficientPath
        Generator; periodic paths may be integrated beyond one period via ``tau``.
    steps : int, optional
        Total number of RK4 steps (at least 64). When omitted, start from
        2048 steps per unit time and double until the endpoint changes by
        less than ``stabilize_tol``; the coarser of the last agreeing pair
        is returned.
    """
    tau = B.tau if tau is None else float(tau)
    if tau <= 0:
        raise ValidationError("tau must be positive")
    if steps is not None:
        if steps < 64:
            raise ValidationError("steps must be >= 64")
        return _solve(B, tau, steps / tau)
    per_unit = float(STEPS_PER_UNIT)
    path = _solve(B, tau, per_unit)
    for _ in range(max_doublings):
        per_unit *= 2
        finer = _solve(B, tau, per_unit)
        diff = float(np.max(np.abs(finer.end - path.end))) / max(1.0, float(np.max(np.abs(finer.end))))
        if diff < stabilize_tol:
            # the coarser grid already meets the tolerance
            return path
        path = finer
    return path


def _solve(B: CoefficientPath, tau: float, per_unit: float) -> SymplecticPath:
    n = B.n
    J = standard_J(n)
    nodes = _aligned_nodes(B, 0.0, tau, per_unit)
    S = _rk4_steps(B, nodes, np.eye(2 * n), J)
    path = SymplecticPath(nodes, S, source=B)
    drift = path.max_defect()
    if drift > 1e-6:
        raise IntegrationError(f"symplectic drift {drift:.2e}; increase steps")
    return path


def reversible_extend(B: CoefficientPath, mode: str = "half") -> CoefficientPath:
    """Extend ``B`` on ``[0, s]`` to ``[0, 2s]`` by ``B(s + t) = N B(s - t) N``.

    ``mode="full"`` marks the result ``2s``-periodic.
    """
    if mode not in ("half", "full"):
        raise ValidationError("mode must be 'half' or 'full'")
    if not B.satisfies_b1():
        raise ValidationError(f"(B1) violated (off-diagonal end blocks {B.b1_defect():.2e})")
    N = standard_N(B.n)
    s = B.tau
    refl_grid = 2 * s - B.grid[::-1][1:]
    refl_vals = N @ B.values[::-1][1:] @ N
    grid = np.concatenate([B.grid, refl_grid])
    values = np.concatenate([B.values, refl_vals])
    return CoefficientPath(grid, values, periodic=(mode == "full"))


def refine_near(path: SymplecticPath, t_star: float, radius: float) -> SymplecticPath:
    """Double the sample density inside ``[t_star - radius, t_star + radius]``."""
    if radius <= 0:
        return path
    lo, hi = t_star - radius, t_star + radius
    g = path.grid
    inside = np.nonzero((g[:-1] < hi) & (g[1:] > lo))[0]
    if inside.size == 0:
        return path
    mids = 0.5 * (g[inside] + g[inside + 1])
    new_samples = np.stack([path.at(float(t)) for t in mids])
    grid = np.concatenate([g, mids])
    samples = np.concatenate([path.samples, new_samples])
    order = np.argsort(grid, kind="stable")
    return SymplecticPath(grid[order], samples[order], path.source, path.start_at_identity)


def sampled_path(fn, tau: float, samples: int = 2049) -> SymplecticPath:
    """Path from a closed-form ``t -> gamma(t)`` sampled uniformly."""
    grid = np.linspace(0.0, tau, samples)
    return SymplecticPath(grid, np.stack([fn(t) for t in grid]))


def rotation_path(tau: float, n: int = 1, per_unit: int = 256) -> SymplecticPath:
    """``t -> exp(tJ)``, the fundamental solution of ``B = I``."""
    J = standard_J(n)
    samples = max(65, int(math.ceil(tau * per_unit)) + 1)
    return sampled_path(lambda t: np.cos(t) * np.eye(2 * n) + np.sin(t) * J, tau, samples)


def constant_path(n: int, tau: float = 1.0, samples: int = 65) -> SymplecticPath:
    grid = np.linspace(0.0, tau, samples)
    return SymplecticPath(grid, np.broadcast_to(np.eye(2 * n), (samples, 2 * n, 2 * n)))


def symplectic_log_factors(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hamiltonian generators ``X, Y`` with ``M = expm(X) @ expm(Y)``.

    ``expm(X)`` is the positive symplectic polar factor, ``expm(Y)`` the orthogonal one.
    """
    n = half_dim(M)
    J = standard_J(n)
    w, V = np.linalg.eigh(M @ M.T)
    X = 0.5 * (V * np.log(w)) @ V.T  # log of the positive factor (MM^T)^(1/2)
    P_inv = (V * w**-0.5) @ V.T
    O = P_inv @ M
    U = O[:n, :n] + 1j * O[n:, :n]
    T, Z = schur(U, output="complex")
    logU = (Z * (1j * np.angle(np.diag(T)))) @ Z.conj().T
    Y = np.block([[logU.real, -logU.imag], [logU.imag, logU.real]])
    return 0.5 * (X + X.T), Y


def path_to(M: np.ndarray, samples: int = 1025, tau: float = 1.0) -> SymplecticPath:
    """A smooth path from ``I`` to the symplectic matrix ``M``."""
    X, Y = symplectic_log_factors(M)
    grid = np.linspace(0.0, tau, samples)
    S = np.stack([expm(s / tau * X) @ expm(s / tau * Y) for s in grid])
    S[-1] = M
    return SymplecticPath(grid, S)


def concatenate(first: SymplecticPath, second_tail: SymplecticPath) -> SymplecticPath:
    """Join ``first`` with a path that starts where ``first`` ends (time-shifted)."""
    if np.max(np.abs(second_tail.samples[0] - first.end)) > 1e-8:
        raise ValidationError("paths do not join")
    g2 = second_tail.grid[1:] - second_tail.grid[0] + first.grid[-1]
    return SymplecticPath(
        np.concatenate([first.grid, g2]),
        np.concatenate([first.samples, second_tail.samples[1:]]),
        None,
        first.start_at_identity,
    )


def with_source(path: SymplecticPath, source: CoefficientPath | None) -> SymplecticPath:
    return replace(path, source=source)
