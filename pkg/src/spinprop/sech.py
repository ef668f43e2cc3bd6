"""Closed-form evolution in the effective field ``K(t) = (a, 0, c / cosh(omega t))``.

The solution is built from two functions on the unit circle::

    G1(z) = i (2c + omega) z^mu (1-z)^nu F(gamma + nu, nu; gamma; z)
    G2(z) = 2a z^(mu+1/2) (1-z)^nu F(gamma + nu, nu + 1; gamma + 1; z)

    z = ((e^(omega t) + i) / (e^(omega t) - i))^2
    mu = c / (2 omega),  nu = i |a| / omega,  gamma = 1/2 + 2 mu

As t runs over the real line, z goes once round the unit circle, starting
near 1 (t -> -inf), passing -1 at t = 0 and returning to 1.  Powers of z
are taken with ``arg z`` in ``(0, 2 pi)``, i.e. continuously in t:
``arg z = 4 atan(exp(-omega t))``.  The principal branch would jump at
t = 0.

Times are in units of 1/omega's time unit; the functions here take
``t`` in the same unit as ``1/omega`` (dimensionless when omega = 1).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NumericalError
from .hyp2f1 import complex_log_gamma, hyp2f1


class SechDerived(NamedTuple):
    mu: float
    nu: complex
    gamma: float
    alpha: complex


@dataclass(frozen=True)
class SechPulseParams:
    """``J = a`` and ``B_minus(t) = c / cosh(omega t)``, all angular frequencies."""

    a: float
    c: float
    omega: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.c) and math.isfinite(self.omega)):
            raise DomainError("sech pulse parameters must be finite")
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega}")
        g = 0.5 + self.c / self.omega
        if g <= 0 and g == round(g):
            raise DomainError(f"gamma = 1/2 + c/omega = {g} is a non-positive integer")

    @property
    def derived(self) -> SechDerived:
        mu = self.c / (2 * self.omega)
        nu = 1j * abs(self.a) / self.omega
        gamma = 0.5 + 2 * mu
        return SechDerived(mu, nu, gamma, gamma + nu)

    def field(self, t: float):
        """Effective field ``(a, 0, c / cosh(omega t))``."""
        return (self.a, 0.0, self.c / math.cosh(self.omega * t))


def z_angle(p: SechPulseParams, t: float) -> float:
    """Continuous argument of ``z(t)``, in ``(0, 2 pi)``."""
    x = p.omega * t
    if x >= 0:
        return 4 * math.atan(math.exp(-x))
    return 2 * math.pi - 4 * math.atan(math.exp(x))


def z_of_time(p: SechPulseParams, t: float) -> complex:
    """``((e^(omega t) + i)/(e^(omega t) - i))^2``, computed as ``exp(i arg z)``."""
    return cmath.exp(1j * z_angle(p, t))


def _angle_of(z: complex) -> float:
    th = cmath.phase(z)
    return th + 2 * math.pi if th < 0 else th


def _g_pair(p: SechPulseParams, theta: float):
    mu, nu, gamma, alpha = p.derived
    z = cmath.exp(1j * theta)
    # 1 - e^{i theta} = 2 sin(theta/2) e^{i (theta - pi)/2}, principal for theta in (0, 2pi)
    log_1mz = math.log(2 * math.sin(theta / 2)) + 1j * (theta - math.pi) / 2
    try:
        one_minus_z_nu = cmath.exp(nu * log_1mz)
    except OverflowError:
        raise NumericalError(f"(1-z)^nu overflows for |a|/omega = {abs(nu):.4g}") from None
    g1 = 1j * (2 * p.c + p.omega) * cmath.exp(1j * mu * theta) * one_minus_z_nu * hyp2f1(alpha, nu, gamma, z)
    if p.a == 0:
        return g1, 0j
    g2 = 2 * p.a * cmath.exp(1j * (mu + 0.5) * theta) * one_minus_z_nu * hyp2f1(alpha, nu + 1, gamma + 1, z)
    return g1, g2


def g_functions(p: SechPulseParams, z: complex):
    """``(G1(z), G2(z))`` for ``z`` on the unit circle, ``z != 1``.

    The argument of ``z`` is read in ``(0, 2 pi)`` (upper half circle is
    t > 0, lower half t < 0).
    """
    z = complex(z)
    if abs(abs(z) - 1) > 1e-12:
        raise DomainError(f"z must lie on the unit circle, |z| = {abs(z)}")
    theta = _angle_of(z)
    if theta == 0:
        raise DomainError("z = 1 corresponds to t = +-infinity")
    return _g_pair(p, theta)


def _initial(p: SechPulseParams):
    g10, g20 = _g_pair(p, math.pi)
    norm = abs(g10) ** 2 + abs(g20) ** 2
    if norm < 1e-12:
        raise NumericalError(f"degenerate normalisation |G1(-1)|^2 + |G2(-1)|^2 = {norm}")
    return g10, g20, norm


def evolution_u(p: SechPulseParams, t: float) -> np.ndarray:
    """Evolution operator ``u(t)`` with ``u(0) = I``."""
    g10, g20, norm = _initial(p)
    if t == 0:
        return np.eye(2, dtype=complex)
    g1, g2 = _g_pair(p, z_angle(p, t))
    left = np.array([[g1, -g2.conjugate()], [g2, g1.conjugate()]])
    right = np.array([[g10.conjugate(), g20.conjugate()], [-g20, g10]])
    return left @ right / norm


def swap_amplitude(p: SechPulseParams, t: float) -> complex:
    """``<down| u(t) |up>``."""
    g10, g20, norm = _initial(p)
    if t == 0:
        return 0j
    g1, g2 = _g_pair(p, z_angle(p, t))
    return (g2 * g10.conjugate() - g1.conjugate() * g20) / norm


def swap_probability(p: SechPulseParams, t: float) -> float:
    """``|<down| u(t) |up>|^2``, the Swap probability of the two-spin gate."""
    return abs(swap_amplitude(p, t)) ** 2


class SwapAsymptote(NamedTuple):
    """Late-time law ``P(t) ~ A1 sin^2(|a| t + delta) + A2``."""

    A1: float
    A2: float
    delta: float

    def __call__(self, t, a):
        return self.A1 * np.sin(abs(a) * np.asarray(t) + self.delta) ** 2 + self.A2


def _connection_coeffs(a, b, c):
    """Coefficients of ``F(a,b;c;z) -> C1 + C2 (1-z)^(c-a-b)`` as z -> 1."""
    s = c - a - b
    lg = complex_log_gamma
    c1 = cmath.exp(lg(c) + lg(s) - lg(c - a) - lg(c - b))
    c2 = cmath.exp(lg(c) + lg(-s) - lg(a) - lg(b))
    return c1, c2


def swap_asymptote(p: SechPulseParams) -> SwapAsymptote:
    """Exact t -> +inf limit of the Swap probability oscillation.

    Near z = 1, ``(1-z)^nu F -> C1 (1-z)^nu + C2 (1-z)^(-nu)`` and
    ``(1-z)^nu ~ L exp(-i |a| t)``, so each ``G`` becomes a sum of two
    counter-rotating exponentials and ``|u21|^2`` a pure ``sin^2`` law.
    """
    if p.a == 0:
        return SwapAsymptote(0.0, 0.0, 0.0)
    mu, nu, gamma, alpha = p.derived
    g10, g20, norm = _initial(p)
    big_l = cmath.exp(nu * (math.log(4) - 0.5j * math.pi))
    c1, c2 = _connection_coeffs(alpha, nu, gamma)
    d1, d2 = _connection_coeffs(alpha, nu + 1, gamma + 1)
    pre1 = 1j * (2 * p.c + p.omega)
    x1, y1 = pre1 * c1 * big_l, pre1 * c2 / big_l
    x2, y2 = 2 * p.a * d1 * big_l, 2 * p.a * d2 / big_l
    # amplitude -> P exp(-i|a|t) + Q exp(i|a|t)
    pp = x2 * g10.conjugate() - y1.conjugate() * g20
    qq = y2 * g10.conjugate() - x1.conjugate() * g20
    psi = cmath.phase(pp * qq.conjugate())
    a1 = 4 * abs(pp) * abs(qq) / norm**2
    a2 = (abs(pp) - abs(qq)) ** 2 / norm**2
    delta = (math.pi / 2 - psi / 2) % math.pi
    return SwapAsymptote(a1, a2, delta)


def swap_probability_asymptotic(p: SechPulseParams, t):
    """Late-time Swap probability from :func:`swap_asymptote`."""
    return swap_asymptote(p)(t, p.a)


def fit_sin2_law(t, prob, a):
    """Least-squares fit of ``A1 sin^2(a t + delta) + A2`` to samples.

    The model is linear in ``(1, cos 2at, sin 2at)``; ``A1 >= 0`` and
    ``delta`` is reduced to ``[0, pi)``.  Returns ``(SwapAsymptote, rms)``.
    """
    t = np.asarray(t, dtype=float)
    prob = np.asarray(prob, dtype=float)
    design = np.column_stack([np.ones_like(t), np.cos(2 * a * t), np.sin(2 * a * t)])
    (k0, k1, k2), *_ = np.linalg.lstsq(design, prob, rcond=None)
    amp = math.hypot(k1, k2)
    a1 = 2 * amp
    a2 = k0 - amp
    # -amp cos(2at + 2 delta) = k1 cos 2at + k2 sin 2at
    delta = (0.5 * math.atan2(k2, -k1)) % math.pi
    fit = SwapAsymptote(a1, a2, delta)
    rms = float(np.sqrt(np.mean((fit(t, a) - prob) ** 2)))
    return fit, rms
