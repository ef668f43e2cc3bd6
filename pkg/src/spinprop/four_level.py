"""Two coupled spins: ``H = (rho.G) + (Sigma.F) + J/2 (Sigma.rho)``.

``rho = sigma (x) I`` acts on the first spin (field G) and
``Sigma = I (x) sigma`` on the second (field F).  Basis order is
``|uu>, |ud>, |du>, |dd>`` (first factor = first spin); every index map in
the package goes through :data:`BASIS_INDEX`.

For parallel fields along z the evolution factorises as::

    U(t) = exp(-i/2 [(Sigma3 + rho3) Gamma(t) + Sigma3 rho3 Phi(t)]) M(t)

where ``Gamma`` and ``Phi`` are the time integrals of ``B_plus`` and ``J``
and ``M`` embeds the 2x2 evolution ``u`` in the field
``K = (J, 0, B_minus)`` into the ``|ud>, |du>`` block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import units
from .errors import DomainError, NumericalError
from .oracle import HamiltonianFn, integrate_propagator
from .quadrature import integrate
from .su2 import PAULI, FieldVector3, IDENTITY_2

BASIS = ("uu", "ud", "du", "dd")
BASIS_INDEX = {name: i for i, name in enumerate(BASIS)}

# eigenvalues of Sigma3 + rho3 and Sigma3 rho3 in BASIS order
_SUM_EIG = np.array([2.0, 0.0, 0.0, -2.0])
_PROD_EIG = np.array([1.0, -1.0, -1.0, 1.0])


def _const(value):
    return lambda t: value


@dataclass(frozen=True)
class TwoSpinFields:
    """Time-dependent fields ``G(t)``, ``F(t)`` (3-vectors) and coupling ``J(t)``."""

    G: Callable[[float], tuple]
    F: Callable[[float], tuple]
    J: Callable[[float], float]

    @classmethod
    def constant(cls, G=(0.0, 0.0, 0.0), F=(0.0, 0.0, 0.0), J=0.0):
        return cls(_const(tuple(G)), _const(tuple(F)), _const(float(J)))


def hamiltonian_4(fields: TwoSpinFields, t: float) -> np.ndarray:
    """The 4x4 Hamiltonian written out entry by entry."""
    g1, g2, g3 = fields.G(t)
    f1, f2, f3 = fields.F(t)
    j = fields.J(t)
    fm, fp = f1 - 1j * f2, f1 + 1j * f2
    gm, gp = g1 - 1j * g2, g1 + 1j * g2
    return np.array(
        [
            [f3 + g3 + j / 2, fm, gm, 0],
            [fp, g3 - f3 - j / 2, j, gm],
            [gp, j, f3 - g3 - j / 2, fm],
            [0, gp, fp, j / 2 - g3 - f3],
        ],
        dtype=complex,
    )


def hamiltonian_4_tensor(fields: TwoSpinFields, t: float) -> np.ndarray:
    """Same Hamiltonian assembled from Kronecker products."""
    g, f, j = fields.G(t), fields.F(t), fields.J(t)
    h = np.zeros((4, 4), dtype=complex)
    for k, s in enumerate(PAULI):
        h += g[k] * np.kron(s, IDENTITY_2) + f[k] * np.kron(IDENTITY_2, s)
        h += j / 2 * np.kron(s, s)
    return h


@dataclass(frozen=True)
class ParallelFieldSpec:
    """Fields ``B1(t), B2(t)`` (tesla) along z with g-factors, and ``J(t)``.

    ``J`` is already an angular frequency; Zeeman terms are converted with
    ``mu_B / hbar`` into rad per ``time_unit_s`` (ns by default).
    """

    B1: Callable[[float], float]
    B2: Callable[[float], float]
    g1: float
    g2: float
    J: Callable[[float], float]
    time_unit_s: float = units.NS
    breakpoints: tuple = field(default=(), compare=False)

    def _scale(self):
        return units.zeeman_to_angular(1.0, 1.0, self.time_unit_s)

    def b_plus(self, t: float) -> float:
        return self._scale() * (self.g1 * self.B1(t) + self.g2 * self.B2(t))

    def b_minus(self, t: float) -> float:
        return self._scale() * (self.g1 * self.B1(t) - self.g2 * self.B2(t))

    def two_spin_fields(self) -> TwoSpinFields:
        s = self._scale()
        return TwoSpinFields(
            G=lambda t: (0.0, 0.0, s * self.g1 * self.B1(t)),
            F=lambda t: (0.0, 0.0, s * self.g2 * self.B2(t)),
            J=self.J,
        )

    @classmethod
    def from_angular(cls, b_plus, b_minus, J, g1=2.0, g2=2.0, time_unit_s=units.NS, breakpoints=()):
        """Spec whose ``B_plus``/``B_minus`` equal the given angular-frequency functions."""
        s = units.zeeman_to_angular(1.0, 1.0, time_unit_s)
        return cls(
            B1=lambda t: (b_plus(t) + b_minus(t)) / (2 * s * g1),
            B2=lambda t: (b_plus(t) - b_minus(t)) / (2 * s * g2),
            g1=g1,
            g2=g2,
            J=J,
            time_unit_s=time_unit_s,
            breakpoints=tuple(breakpoints),
        )


def gamma_phi(spec: ParallelFieldSpec, t: float):
    """``(Gamma(t), Phi(t)) = (int_0^t B_plus, int_0^t J)``."""
    return (
        integrate(spec.b_plus, 0.0, t, spec.breakpoints),
        integrate(spec.J, 0.0, t, spec.breakpoints),
    )


def effective_field(spec: ParallelFieldSpec, t: float) -> FieldVector3:
    return FieldVector3(spec.J(t), 0.0, spec.b_minus(t))


@dataclass(frozen=True)
class FourLevelPropagator:
    matrix: np.ndarray
    time: float = 0.0


def reduced_evolution(u2, gamma: float, phi: float, time: float = 0.0) -> FourLevelPropagator:
    """Assemble ``U`` from the 2x2 block evolution and the two phase integrals."""
    u2 = np.asarray(u2, dtype=complex)
    defect = np.max(np.abs(u2.conj().T @ u2 - IDENTITY_2))
    if defect > 1e-8:
        raise NumericalError(f"2x2 block is not unitary (defect {defect:.3e})")
    m = np.eye(4, dtype=complex)
    m[1:3, 1:3] = u2
    phases = np.exp(-0.5j * (_SUM_EIG * gamma + _PROD_EIG * phi))
    return FourLevelPropagator(phases[:, None] * m, time)


def block_evolution_ode(spec: ParallelFieldSpec, t: float, rel_tol: float = 1e-11) -> np.ndarray:
    """2x2 evolution in ``K = (J, 0, B_minus)`` from the reference integrator."""
    if t == 0:
        return IDENTITY_2.copy()
    h = HamiltonianFn.from_field(lambda s: effective_field(spec, s))
    return integrate_propagator(h, 0.0, t, rel_tol).matrices[-1]


def evolve_parallel(spec: ParallelFieldSpec, t: float, u2=None, rel_tol: float = 1e-11) -> FourLevelPropagator:
    """Full 4x4 evolution for parallel fields.

    ``u2`` is the block evolution at ``t`` (e.g. a closed form); when omitted
    it is integrated numerically.
    """
    if u2 is None:
        u2 = block_evolution_ode(spec, t, rel_tol)
    gamma, phi = gamma_phi(spec, t)
    return reduced_evolution(u2, gamma, phi, t)


def transition_amplitude(U, frm: str, to: str) -> complex:
    """``<to| U |frm>`` for basis labels ``'uu', 'ud', 'du', 'dd'``."""
    matrix = U.matrix if isinstance(U, FourLevelPropagator) else np.asarray(U)
    try:
        return complex(matrix[BASIS_INDEX[to], BASIS_INDEX[frm]])
    except KeyError as exc:
        raise DomainError(f"unknown basis label {exc.args[0]!r}; expected one of {BASIS}") from None
