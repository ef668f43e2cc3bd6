"""SU(2) evolution operators of the one-spin equation ``i dv/dt = (sigma.F) v``.

A 2x2 solution matrix is stored through its Euler parameters
``R = p0*I - i*(sigma . p)``.  For a real field the parameters stay real and
``Delta = p0**2 + |p|**2`` is conserved; we always work with ``Delta = 1``.

Conventions
-----------
* Pauli matrices are the standard ones, ``sigma3 = diag(1, -1)``.
* ``R_i(beta) = exp(i*sigma_i*beta/2)`` and the angle parametrisation is
  ``R = R_3(-phi) R_2(theta) R_3(alpha)``.
* hbar = 1, fields are angular frequencies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NormalizationDriftError, NumericalError

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)
IDENTITY_2 = np.eye(2, dtype=complex)

# |Delta - 1| above this is treated as a bug upstream, not rounding.
DRIFT_TOLERANCE = 1e-8


class Spinor2(NamedTuple):
    c_up: complex
    c_down: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c_up, self.c_down], dtype=complex)

    @property
    def norm2(self) -> float:
        return abs(self.c_up) ** 2 + abs(self.c_down) ** 2


class EulerParams(NamedTuple):
    p0: float
    p1: float
    p2: float
    p3: float

    @property
    def delta(self):
        """``det R = p0^2 + p1^2 + p2^2 + p3^2``."""
        return self.p0**2 + self.p1**2 + self.p2**2 + self.p3**2


class FieldVector3(NamedTuple):
    """Real 3-vector field (external F or effective K), angular frequency units.

    Components may be scalars or equally shaped arrays (time samples).
    """

    f1: float
    f2: float
    f3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.f1, self.f2, self.f3], dtype=float)


def sigma_dot(field) -> np.ndarray:
    """``sigma . field`` for a single 3-vector."""
    f1, f2, f3 = field
    return np.array([[f3, f1 - 1j * f2], [f1 + 1j * f2, -f3]], dtype=complex)


def euler_params_from_angles(theta, phi, alpha) -> EulerParams:
    """Euler parameters of ``R_3(-phi) R_2(theta) R_3(alpha)``.

    Works elementwise on arrays.  The signs of ``p1`` and ``p2`` are the ones
    that make the product above hold exactly (and hence make the field
    formulas of :func:`spinprop.synthesis.field_from_angles` solve the spin
    equation).
    """
    theta, phi, alpha = (np.asarray(x, dtype=float) for x in (theta, phi, alpha))
    if not (np.all(np.isfinite(theta)) and np.all(np.isfinite(phi)) and np.all(np.isfinite(alpha))):
        raise DomainError("Euler angles must be finite")
    ch, sh = np.cos(theta / 2), np.sin(theta / 2)
    dif, tot = (phi - alpha) / 2, (phi + alpha) / 2
    p = EulerParams(
        np.cos(dif) * ch,
        np.sin(tot) * sh,
        -np.cos(tot) * sh,
        np.sin(dif) * ch,
    )
    if p.p0.ndim == 0:
        p = EulerParams(*(float(x) for x in p))
    return p


def as_matrix(p: EulerParams) -> np.ndarray:
    """``I*p0 - i*(sigma1*p1 + sigma2*p2 + sigma3*p3)``."""
    p0, p1, p2, p3 = p
    return np.array(
        [[p0 - 1j * p3, -1j * p1 - p2], [-1j * p1 + p2, p0 + 1j * p3]],
        dtype=complex,
    )


def rotation(axis: int, beta: float) -> np.ndarray:
    """Elementary rotation ``exp(i*sigma_axis*beta/2)`` for axis in {1, 2, 3}."""
    return np.cos(beta / 2) * IDENTITY_2 + 1j * np.sin(beta / 2) * PAULI[axis - 1]


@dataclass(frozen=True)
class Su2Propagator:
    """Solution matrix ``R(t)`` held as unit Euler parameters."""

    params: EulerParams
    reference_time: float = 0.0

    def __post_init__(self):
        delta = float(EulerParams(*self.params).delta)
        if abs(delta - 1.0) > DRIFT_TOLERANCE:
            raise NormalizationDriftError(
                f"Euler parameters not normalised: Delta = {delta!r}", delta
            )

    @classmethod
    def from_angles(cls, theta, phi, alpha, reference_time=0.0):
        return cls(euler_params_from_angles(theta, phi, alpha), reference_time)

    @property
    def matrix(self) -> np.ndarray:
        return as_matrix(self.params)


def _inverse(p: EulerParams) -> np.ndarray:
    delta = p.delta
    if abs(delta) < 1e-12:
        raise NumericalError(f"R0 is singular: Delta = {delta!r}")
    p0, p1, p2, p3 = p
    # (p0 + i sigma.p) / Delta
    return as_matrix(EulerParams(p0, -p1, -p2, -p3)) / delta


def evolution_from_R(r_t: Su2Propagator, r_0: Su2Propagator) -> np.ndarray:
    """Evolution operator ``u(t) = R(t) R0^{-1}`` with ``u(t0) = I``."""
    return as_matrix(r_t.params) @ _inverse(EulerParams(*r_0.params))


def apply(u: np.ndarray, v0) -> Spinor2:
    out = np.asarray(u) @ np.asarray(v0, dtype=complex)
    return Spinor2(complex(out[0]), complex(out[1]))


def euler_ode_residual(p: EulerParams, p_dot: EulerParams, field) -> float:
    """Max-norm residual of ``p0' + p.F = 0`` and ``p' + p x F - p0 F = 0``.

    Only used to verify trajectories; a correct pair gives a residual at the
    level of the error in ``p_dot``.
    """
    f = np.asarray(tuple(field), dtype=float)
    vec = np.array(p[1:], dtype=float)
    vec_dot = np.array(p_dot[1:], dtype=float)
    r0 = p_dot[0] + vec @ f
    rv = vec_dot + np.cross(vec, f) - p[0] * f
    return float(max(abs(r0), np.max(np.abs(rv))))
