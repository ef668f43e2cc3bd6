"""Angle trajectories and the external fields they generate.

Choosing three smooth angles ``(theta, phi, alpha)(t)`` fixes both the
solution ``R = R_3(-phi) R_2(theta) R_3(alpha)`` and the field for which it is
exact:

    F1 = theta'/2 sin(phi) + alpha'/2 sin(theta) cos(phi)
    F2 = alpha'/2 sin(theta) sin(phi) - theta'/2 cos(phi)
    F3 = phi'/2 - alpha'/2 cos(theta)

Pulses that are constant outside a window therefore give fields that are
switched on only inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import su2
from .errors import DomainError
from .quadrature import cumulative
from .su2 import FieldVector3


def _scalarize(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class SineInterp:
    """``v0`` for t <= -T, ``v1`` for t >= T, half a sine period in between."""

    v0: float
    v1: float
    T: float

    def __post_init__(self):
        if not self.T > 0:
            raise DomainError(f"SineInterp needs T > 0, got {self.T}")

    @property
    def breakpoints(self):
        return (-self.T, self.T)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        inside = (self.v1 - self.v0) / 2 * np.sin(np.pi * t / (2 * self.T)) + (self.v1 + self.v0) / 2
        out = np.where(t <= -self.T, self.v0, np.where(t >= self.T, self.v1, inside))
        return _scalarize(out)

    def deriv(self, t):
        t = np.asarray(t, dtype=float)
        slope = (self.v1 - self.v0) / 2 * np.pi / (2 * self.T) * np.cos(np.pi * t / (2 * self.T))
        return _scalarize(np.where(np.abs(t) < self.T, slope, 0.0))


@dataclass(frozen=True)
class GaussDeriv:
    """``v0 * (t/T) * exp(-(t/T)^2) + v1``: a bump returning to ``v1``."""

    v0: float
    v1: float
    T: float

    def __post_init__(self):
        if self.T == 0:
            raise DomainError("GaussDeriv needs T != 0")

    breakpoints = ()

    def value(self, t):
        s = np.asarray(t, dtype=float) / self.T
        return _scalarize(self.v0 * s * np.exp(-s * s) + self.v1)

    def deriv(self, t):
        s = np.asarray(t, dtype=float) / self.T
        return _scalarize(self.v0 / self.T * (1 - 2 * s * s) * np.exp(-s * s))


@dataclass(frozen=True)
class LinearPeriodic:
    """Uniformly advancing angle ``rate * t + offset`` (periodic fields)."""

    rate: float
    offset: float = 0.0

    breakpoints = ()

    def value(self, t):
        return _scalarize(self.rate * np.asarray(t, dtype=float) + self.offset)

    def deriv(self, t):
        return _scalarize(np.full(np.shape(t), float(self.rate)))


@dataclass(frozen=True)
class Constant:
    v: float

    breakpoints = ()

    def value(self, t):
        return _scalarize(np.full(np.shape(t), float(self.v)))

    def deriv(self, t):
        return _scalarize(np.zeros(np.shape(t)))


Pulse = Union[SineInterp, GaussDeriv, LinearPeriodic, Constant]

PULSE_FAMILIES = {
    "sine": SineInterp,
    "gauss": GaussDeriv,
    "linear": LinearPeriodic,
    "constant": Constant,
}


def pulse_from_dict(spec: dict) -> Pulse:
    """Build a pulse from config keys ``family, v0, v1, T, rate``.

    ``Constant`` reads its value from ``v0``; ``LinearPeriodic`` reads
    ``rate`` and uses ``v0`` (default 0) as the offset.
    """
    family = str(spec.get("family", "")).lower()
    try:
        if family == "sine":
            return SineInterp(float(spec["v0"]), float(spec["v1"]), float(spec["T"]))
        if family == "gauss":
            return GaussDeriv(float(spec["v0"]), float(spec["v1"]), float(spec["T"]))
        if family == "linear":
            return LinearPeriodic(float(spec["rate"]), float(spec.get("v0", 0.0)))
        if family == "constant":
            return Constant(float(spec.get("v0", spec.get("v", 0.0))))
    except KeyError as exc:
        raise DomainError(f"pulse family {family!r} is missing key {exc.args[0]!r}") from None
    raise DomainError(f"unknown pulse family {family!r}; expected one of {sorted(PULSE_FAMILIES)}")


@dataclass(frozen=True)
class EulerTrajectory:
    theta: Pulse
    phi: Pulse
    alpha: Pulse

    @property
    def support_window(self):
        """Half-width T of the window outside which all angles are frozen.

        ``None`` when some angle never stops moving.
        """
        widths = []
        for pulse in (self.theta, self.phi, self.alpha):
            if isinstance(pulse, Constant):
                continue
            if not isinstance(pulse, SineInterp):
                return None
            widths.append(pulse.T)
        return max(widths, default=0.0)

    @property
    def breakpoints(self):
        return tuple(sorted({b for p in (self.theta, self.phi, self.alpha) for b in p.breakpoints}))


class TrajectorySample(NamedTuple):
    theta: float
    phi: float
    alpha: float
    theta_dot: float
    phi_dot: float
    alpha_dot: float


def eval_trajectory(traj: EulerTrajectory, t) -> TrajectorySample:
    return TrajectorySample(
        traj.theta.value(t),
        traj.phi.value(t),
        traj.alpha.value(t),
        traj.theta.deriv(t),
        traj.phi.deriv(t),
        traj.alpha.deriv(t),
    )


def field_from_angles(traj: EulerTrajectory, t) -> FieldVector3:
    th, ph, al, dth, dph, dal = eval_trajectory(traj, t)
    f1 = dth / 2 * np.sin(ph) + dal / 2 * np.sin(th) * np.cos(ph)
    f2 = dal / 2 * np.sin(th) * np.sin(ph) - dth / 2 * np.cos(ph)
    f3 = dph / 2 - dal / 2 * np.cos(th)
    return FieldVector3(_scalarize(f1), _scalarize(f2), _scalarize(f3))


def propagator(traj: EulerTrajectory, t: float) -> su2.Su2Propagator:
    s = eval_trajectory(traj, t)
    return su2.Su2Propagator(su2.euler_params_from_angles(s.theta, s.phi, s.alpha), float(t))


def evolution(traj: EulerTrajectory, t: float, t0: float = 0.0) -> np.ndarray:
    """Exact evolution operator ``R(t) R(t0)^{-1}`` in the synthesised field."""
    return su2.evolution_from_R(propagator(traj, t), propagator(traj, t0))


class ReconstructedAngle:
    """Third angle fixed by the F2 = 0 constraint.

    ``alpha' = theta' cos(phi) / (sin(theta) sin(phi))`` is analytic; the
    value is its quadrature from ``t_ref`` where ``alpha = alpha_ref``.
    """

    def __init__(self, theta: Pulse, phi: Pulse, t_ref: float, alpha_ref: float = 0.0):
        self.theta = theta
        self.phi = phi
        self.t_ref = float(t_ref)
        self.alpha_ref = float(alpha_ref)
        self.breakpoints = tuple(sorted(set(theta.breakpoints) | set(phi.breakpoints)))

    def deriv(self, t):
        th, ph = self.theta.value(t), self.phi.value(t)
        return _scalarize(self.theta.deriv(t) * np.cos(ph) / (np.sin(th) * np.sin(ph)))

    def value(self, t):
        vals = self.alpha_ref + cumulative(self.deriv, self.t_ref, t, self.breakpoints)
        return _scalarize(vals if np.ndim(t) else vals[0])


class ConstrainedField(NamedTuple):
    k1: np.ndarray
    k3: np.ndarray
    alpha: ReconstructedAngle


def constrained_two_spin_field(theta: Pulse, phi: Pulse, t_grid, alpha0: float = 0.0) -> ConstrainedField:
    """Effective field ``K = (K1, 0, K3)`` generated by ``theta`` and ``phi``.

    With ``eta = ln(cos(phi) sin(theta))``::

        K1 = theta' / (2 sin(phi)),    K3 = -eta' / (2 tan(phi))

    and the third angle follows from the F2 = 0 constraint (see
    :class:`ReconstructedAngle`), anchored at ``alpha0`` on the first grid
    time.

    Raises
    ------
    DomainError
        If the grid has fewer than two points, or ``sin(phi)`` vanishes, or
        ``cos(phi) sin(theta) <= 0`` somewhere on it.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise DomainError("constrained_two_spin_field needs a grid of at least two times")
    if np.any(np.diff(t_grid) <= 0):
        raise DomainError("time grid must be strictly increasing")

    th, ph = np.asarray(theta.value(t_grid)), np.asarray(phi.value(t_grid))
    dth, dph = np.asarray(theta.deriv(t_grid)), np.asarray(phi.deriv(t_grid))
    sin_ph = np.sin(ph)
    bad = np.flatnonzero(np.abs(sin_ph) < 1e-12)
    if bad.size:
        raise DomainError(f"sin(phi) vanishes at t = {float(t_grid[bad[0]])!r}")
    arg = np.cos(ph) * np.sin(th)
    bad = np.flatnonzero(arg <= 0)
    if bad.size:
        raise DomainError(
            f"cos(phi) sin(theta) = {float(arg[bad[0]]):.3e} <= 0 at t = {float(t_grid[bad[0]])!r}; ln undefined"
        )

    eta_dot = -dph * np.tan(ph) + dth * np.cos(th) / np.sin(th)
    k1 = dth / (2 * sin_ph)
    k3 = -eta_dot / (2 * np.tan(ph))
    return ConstrainedField(k1, k3, ReconstructedAngle(theta, phi, t_grid[0], alpha0))
