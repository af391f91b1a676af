"""Implicit RK stepping for canonical Hamiltonian systems and error diagnostics.

State layout is ``z = (p_1..p_d, q_1..q_d)`` and the vector field is
``p' = -dH/dq, q' = dH/dp``.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .tableau import ButcherTableau

NEWTON_TOL = 1e-13
NEWTON_MAXITER = 50
FD_STEP = 1e-7


class IntegrationError(RuntimeError):
    def __init__(self, message, residual=float("nan"), index=None, trajectory=None):
        super().__init__(message)
        self.residual = residual
        self.index = index
        self.trajectory = trajectory


def structure_matrix(d: int) -> np.ndarray:
    """Canonical J with ``J @ grad H`` equal to the vector field."""
    I = np.eye(d)
    Z = np.zeros((d, d))
    return np.block([[Z, -I], [I, Z]])


@dataclass(frozen=True)
class HamiltonianSystem:
    name: str
    d: int
    H: Callable[[np.ndarray], float]
    gradH: Callable[[np.ndarray], np.ndarray]
    hessH: Optional[Callable[[np.ndarray], np.ndarray]] = None
    exact: Optional[Callable[[float], np.ndarray]] = None
    z0: Optional[np.ndarray] = None
    J: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "J", structure_matrix(self.d))

    def f(self, z: np.ndarray) -> np.ndarray:
        return self.J @ self.gradH(z)

    def jac_f(self, z: np.ndarray) -> np.ndarray:
        if self.hessH is not None:
            return self.J @ self.hessH(z)
        n = 2 * self.d
        out = np.empty((n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = FD_STEP * max(1.0, abs(z[k]))
            out[:, k] = (self.f(z + e) - self.f(z - e)) / (2 * e[k])
        return out


def kepler() -> HamiltonianSystem:
    def H(z):
        p, q = z[:2], z[2:]
        return 0.5 * p @ p - 1.0 / np.sqrt(q @ q)

    def gradH(z):
        p, q = z[:2], z[2:]
        r3 = (q @ q) ** 1.5
        return np.concatenate([p, q / r3])

    def hessH(z):
        q = z[2:]
        r2 = q @ q
        r = np.sqrt(r2)
        Hqq = np.eye(2) / r**3 - 3 * np.outer(q, q) / r**5
        out = np.zeros((4, 4))
        out[:2, :2] = np.eye(2)
        out[2:, 2:] = Hqq
        return out

    def exact(t):
        return np.array([-np.sin(t), np.cos(t), np.cos(t), np.sin(t)])

    return HamiltonianSystem("kepler", 2, H, gradH, hessH, exact, np.array([0.0, 1.0, 1.0, 0.0]))


def harmonic_oscillator(z0=(0.0, 1.0)) -> HamiltonianSystem:
    z0 = np.asarray(z0, dtype=float)

    def exact(t):
        p0, q0 = z0
        return np.array([p0 * np.cos(t) - q0 * np.sin(t), q0 * np.cos(t) + p0 * np.sin(t)])

    return HamiltonianSystem(
        "harmonic",
        1,
        lambda z: 0.5 * (z @ z),
        lambda z: np.array(z, dtype=float),
        lambda z: np.eye(2),
        exact,
        z0,
    )


def pendulum(z0=(0.0, 1.0)) -> HamiltonianSystem:
    return HamiltonianSystem(
        "pendulum",
        1,
        lambda z: 0.5 * z[0] ** 2 - np.cos(z[1]),
        lambda z: np.array([z[0], np.sin(z[1])]),
        lambda z: np.array([[1.0, 0.0], [0.0, np.cos(z[1])]]),
        None,
        np.asarray(z0, dtype=float),
    )


SYSTEMS = {"kepler": kepler, "harmonic": harmonic_oscillator, "pendulum": pendulum}


def stage_residual(t: ButcherTableau, sys: HamiltonianSystem, z0, h, Z) -> float:
    F = np.array([sys.f(Zj) for Zj in Z])
    return float(np.max(np.abs(Z - z0 - h * t.A @ F)))


def solve_stages(t: ButcherTableau, sys: HamiltonianSystem, z0, h, tol=NEWTON_TOL, max_iter=NEWTON_MAXITER):
    """Newton iteration on the stacked stage equations; returns (Z, F, residual)."""
    s, n = t.s, len(z0)
    Z = np.tile(z0, (s, 1))
    hA = h * t.A
    eye = np.eye(s * n)
    for _ in range(max_iter + 1):
        F = np.array([sys.f(Zj) for Zj in Z])
        G = Z - z0 - hA @ F
        res = float(np.max(np.abs(G)))
        if res <= tol:
            return Z, F, res
        jacs = np.array([sys.jac_f(Zj) for Zj in Z])
        M = eye - np.einsum("ij,jab->iajb", hA, jacs).reshape(s * n, s * n)
        Z = Z - np.linalg.solve(M, G.reshape(-1)).reshape(s, n)
    raise IntegrationError(
        f"Newton did not reach {tol:.1e} in {max_iter} iterations (residual {res:.3e})", res
    )


def rk_step(t: ButcherTableau, sys: HamiltonianSystem, z0, t0: float, h: float, tol=NEWTON_TOL):
    """One step of the implicit RK method. ``t0`` is unused for autonomous systems."""
    z0 = np.asarray(z0, dtype=float)
    if h == 0:
        return z0.copy()
    _, F, _ = solve_stages(t, sys, z0, h, tol)
    return z0 + h * (t.b @ F)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    energy_error: np.ndarray
    solution_error: Optional[np.ndarray] = None

    def to_csv(self, path) -> None:
        n = self.states.shape[1]
        header = ["t"] + [f"z_{k + 1}" for k in range(n)] + ["energy_err"]
        if self.solution_error is not None:
            header.append("sol_err")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for k in range(len(self.times)):
                row = [self.times[k], *self.states[k], self.energy_error[k]]
                if self.solution_error is not None:
                    row.append(self.solution_error[k])
                writer.writerow([format(float(v), ".17g") for v in row])


def integrate(t: ButcherTableau, sys: HamiltonianSystem, z0, t0: float, h: float, n_steps: int, tol=NEWTON_TOL) -> Trajectory:
    z = np.asarray(z0, dtype=float)
    H0 = sys.H(z)
    states = np.empty((n_steps + 1, len(z)))
    states[0] = z
    times = t0 + h * np.arange(n_steps + 1)
    for k in range(1, n_steps + 1):
        try:
            z = rk_step(t, sys, z, times[k - 1], h, tol)
        except IntegrationError as exc:
            partial = _finish(sys, times[:k], states[:k], H0, t0)
            raise IntegrationError(str(exc), exc.residual, k, partial) from exc
        states[k] = z
    return _finish(sys, times, states, H0, t0)


def _finish(sys, times, states, H0, t0) -> Trajectory:
    energy = np.array([abs(sys.H(z) - H0) for z in states])
    sol = None
    if sys.exact is not None:
        sol = np.array([np.linalg.norm(z - sys.exact(tk - t0)) for tk, z in zip(times, states)])
    return Trajectory(times, states, energy, sol)


@dataclass(frozen=True)
class OrderEstimate:
    slope: float
    hs: tuple
    errors: tuple
    flagged: bool


ERROR_FLOOR = 1e-13


def measured_order(t: ButcherTableau, sys: HamiltonianSystem, h_list, T: float = 1.0, z0=None) -> OrderEstimate:
    """Least-squares slope of log(global error at T) against log h."""
    if sys.exact is None:
        raise ValueError("system has no exact solution")
    if len(h_list) < 3:
        raise ValueError("need at least three step sizes")
    z0 = sys.z0 if z0 is None else np.asarray(z0, dtype=float)
    errors = []
    for h in h_list:
        n = int(round(T / h))
        traj = integrate(t, sys, z0, 0.0, T / n, n)
        errors.append(float(traj.solution_error[-1]))
    errors = np.array(errors)
    hs = np.asarray(h_list, dtype=float)
    slope = float(np.polyfit(np.log(hs), np.log(errors), 1)[0])
    order = np.argsort(hs)
    flagged = bool(np.min(errors) < ERROR_FLOOR or np.any(np.diff(errors[order]) <= 0))
    return OrderEstimate(slope, tuple(hs), tuple(errors), flagged)


def flow_symplecticity(t: ButcherTableau, sys: HamiltonianSystem, z0, h: float, delta: float = 2.0**-20, tol: float = 1e-14) -> float:
    """max |psi^T J psi - J| with psi the central-difference Jacobian of one step.

    The default ``delta`` is a power of two so that differencing the identity
    map is exact.
    """
    z0 = np.asarray(z0, dtype=float)
    n = len(z0)
    psi = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = delta
        psi[:, k] = (rk_step(t, sys, z0 + e, 0.0, h, tol) - rk_step(t, sys, z0 - e, 0.0, h, tol)) / (2 * delta)
    J = sys.J
    return float(np.max(np.abs(psi.T @ J @ psi - J)))
