"""Reference integrator for ``i dU/dt = H(t) U`` in 2 or 4 dimensions.

Every closed-form propagator in the package is checked against this module,
so it deliberately shares no code with them: it only sees a Hamiltonian
callable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, StepUnderflowError
from .su2 import sigma_dot

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class HamiltonianFn:
    dimension: int
    evaluate: Callable[[float], np.ndarray]

    def __post_init__(self):
        if self.dimension not in (2, 4):
            raise DomainError(f"dimension must be 2 or 4, got {self.dimension}")

    def __call__(self, t: float) -> np.ndarray:
        h = np.asarray(self.evaluate(t), dtype=complex)
        if h.shape != (self.dimension, self.dimension):
            raise DomainError(f"H({t}) has shape {h.shape}, expected {self.dimension}x{self.dimension}")
        if not np.all(np.isfinite(h)):
            raise DomainError(f"H({t}) has non-finite entries")
        defect = np.max(np.abs(h - h.conj().T))
        if defect > HERMITIAN_TOL * max(1.0, np.max(np.abs(h))):
            raise DomainError(f"H({t}) is not Hermitian (defect {defect:.3e})")
        return h

    @classmethod
    def from_field(cls, field: Callable[[float], tuple]) -> "HamiltonianFn":
        """Two-level Hamiltonian ``sigma . field(t)``."""
        return cls(2, lambda t: sigma_dot(field(t)))


@dataclass(frozen=True)
class PropagatorTrajectory:
    times: np.ndarray
    matrices: np.ndarray
    tolerance_achieved: float

    def at(self, index: int) -> np.ndarray:
        return self.matrices[index]


@dataclass(frozen=True)
class StateTrajectory:
    times: np.ndarray
    states: np.ndarray
    norm_defect: float


def _check_tol(rel_tol):
    if not 1e-13 <= rel_tol <= 1e-3:
        raise DomainError(f"rel_tol must lie in [1e-13, 1e-3], got {rel_tol}")


def _solve(h: HamiltonianFn, y0: np.ndarray, t0, t1, rel_tol, times):
    """Integrate ``y' = -i H y`` for a (n, m) block of columns."""
    _check_tol(rel_tol)
    if t1 == t0:
        raise DomainError("t1 must differ from t0")
    shape = y0.shape

    def rhs(t, y):
        return (-1j * (h(t) @ y.reshape(shape))).ravel()

    if times is None:
        times = np.array([t0, t1], dtype=float)
    times = np.asarray(times, dtype=float)
    if np.any(times < min(t0, t1)) or np.any(times > max(t0, t1)):
        raise DomainError("requested times must lie between t0 and t1")
    sol = solve_ivp(
        rhs,
        (t0, t1),
        y0.ravel().astype(complex),
        method="DOP853",
        dense_output=True,
        rtol=rel_tol,
        atol=rel_tol * 1e-2,
    )
    if sol.status != 0:
        raise StepUnderflowError(f"integration stopped: {sol.message}", float(sol.t[-1]))
    # solve_ivp's t_eval uses the same dense interpolant; exact endpoints are kept
    ys = sol.sol(times).T
    ys[times == t1] = sol.y[:, -1]
    ys[times == t0] = sol.y[:, 0]
    return times, ys.reshape((len(times),) + shape)


def integrate_propagator(h: HamiltonianFn, t0: float, t1: float, rel_tol: float = 1e-10, times=None) -> PropagatorTrajectory:
    """Propagator ``U(t, t0)`` sampled at ``times`` (default ``[t0, t1]``).

    ``t1 < t0`` integrates backwards in time.  ``times`` must lie in the
    closed interval and be monotone in the direction of integration.
    """
    ts, us = _solve(h, np.eye(h.dimension, dtype=complex), t0, t1, rel_tol, times)
    eye = np.eye(h.dimension)
    defect = max(float(np.max(np.abs(u.conj().T @ u - eye))) for u in us)
    return PropagatorTrajectory(ts, us, defect)


def integrate_state(h: HamiltonianFn, v0, t0: float, t1: float, rel_tol: float = 1e-10, times=None) -> StateTrajectory:
    v0 = np.asarray(v0, dtype=complex)
    if v0.shape != (h.dimension,):
        raise DomainError(f"initial state must have {h.dimension} components")
    ts, vs = _solve(h, v0.reshape(-1, 1), t0, t1, rel_tol, times)
    vs = vs[..., 0]
    norms = np.sum(np.abs(vs) ** 2, axis=1)
    defect = float(np.max(np.abs(norms - np.sum(np.abs(v0) ** 2))))
    return StateTrajectory(ts, vs, defect)
