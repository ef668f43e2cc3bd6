"""Gauss hypergeometric function for complex parameters, ``|z| <= 1``.

Evaluation strategies
---------------------
``series``      Gauss series in z, used when ``|z|`` is small.
``pfaff``       ``(1-z)^(-a) F(a, c-b; c; z/(z-1))`` (or the a<->b twin).
``connection``  two-term expansion in ``1 - z``; handles the neighbourhood
                of ``z = 1`` and needs complex log-gamma.
``taylor``      re-expansion of the hypergeometric ODE about an interior
                point; covers the arcs near ``exp(+-i pi/3)`` where none of
                the three transforms shrinks the argument.

:func:`hyp2f1` picks the strategy with the smallest expansion ratio.  Every
strategy can also be requested explicitly, which the tests use to check
that the paths agree where their domains overlap.
"""

from __future__ import annotations

import cmath
import warnings

from scipy.special import loggamma

from .errors import DomainError, PoleError, PrecisionError

MAX_TERMS = 100_000
SERIES_EPS = 1e-16
# expansion ratio accepted by the direct strategies
DIRECT_RADIUS = 0.75
# |c - a - b - n| below this makes the connection formula degenerate
DEGENERATE_TOL = 1e-6
# closest approach to z = 1 when the connection formula is unavailable
DEGENERATE_MIN_DIST = 1e-3

METHODS = ("series", "pfaff", "connection", "taylor")


class AccuracyWarning(UserWarning):
    """Evaluation fell back to a slower, less accurate route."""


def _is_nonpositive_integer(x: complex, tol: float = 0.0) -> bool:
    x = complex(x)
    if abs(x.imag) > tol:
        return False
    r = round(x.real)
    return r <= 0 and abs(x.real - r) <= tol


def complex_log_gamma(z) -> complex:
    """Principal branch of ``log Gamma(z)``.

    Imaginary part is continuous off the negative real axis (not reduced to
    ``(-pi, pi]``), matching the usual definition of the principal branch.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log-gamma pole at z = {z}")
    return complex(loggamma(z))


def _rgamma_log(z: complex):
    """``log(1/Gamma(z))``, or ``None`` where ``1/Gamma`` vanishes."""
    if _is_nonpositive_integer(z):
        return None
    return -complex(loggamma(z))


def principal_power(base, exponent) -> complex:
    """``exp(exponent * Log(base))`` with the principal logarithm."""
    base, exponent = complex(base), complex(exponent)
    if base == 0:
        if exponent.real > 0:
            return 0j
        raise DomainError(f"0 ** {exponent} is undefined")
    return cmath.exp(exponent * cmath.log(base))


def _series(a, b, c, z, max_terms=MAX_TERMS) -> complex:
    """Sum of ``(a)_n (b)_n / ((c)_n n!) z^n``.

    Stops after three consecutive terms fall below ``SERIES_EPS`` relative to
    the partial sum, or when the series terminates.
    """
    term = 1 + 0j
    total = 1 + 0j
    small = 0
    for n in range(max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
        if term == 0:
            return total
        if abs(term) <= SERIES_EPS * abs(total):
            small += 1
            if small == 3:
                return total
        else:
            small = 0
    raise PrecisionError(
        f"hypergeometric series did not converge in {max_terms} terms (z = {z})", total
    )


def _pfaff(a, b, c, z) -> complex:
    w = z / (z - 1)
    # choose the twin whose numerator parameters are smaller
    if abs(a * (c - b)) <= abs(b * (c - a)):
        return principal_power(1 - z, -a) * _series(a, c - b, c, w)
    return principal_power(1 - z, -b) * _series(c - a, b, c, w)


def _connection_degenerate(a, b, c) -> bool:
    s = complex(c - a - b)
    return abs(s.imag) <= DEGENERATE_TOL and abs(s.real - round(s.real)) <= DEGENERATE_TOL


def _gamma_ratio(num, den):
    """``prod Gamma(num) / prod Gamma(den)`` via log-gamma; poles in ``den`` give 0."""
    acc = 0j
    for x in den:
        r = _rgamma_log(x)
        if r is None:
            return 0j
        acc += r
    for x in num:
        acc += complex_log_gamma(x)
    return cmath.exp(acc)


def _connection(a, b, c, z) -> complex:
    if _connection_degenerate(a, b, c):
        raise DomainError(
            f"connection formula is degenerate for c - a - b = {c - a - b} (near an integer)"
        )
    w = 1 - z
    s = c - a - b
    first = _gamma_ratio((c, s), (c - a, c - b))
    second = _gamma_ratio((c, -s), (a, b))
    out = 0j
    if first != 0:
        out += first * _series(a, b, 1 - s, w)
    if second != 0:
        out += second * principal_power(w, s) * _series(c - a, c - b, 1 + s, w)
    return out


def _taylor_step(a, b, c, z0, f0, f1, h):
    """Advance ``(F, F')`` from ``z0`` to ``z0 + h`` with the ODE's Taylor series.

    ``z(1-z) F'' + (c - (a+b+1) z) F' - ab F = 0`` gives the recurrence for
    the Taylor coefficients ``f_n`` about ``z0``::

        z0(1-z0)(n+2)(n+1) f_{n+2}
            = (n+a)(n+b) f_n - (n+1)((1-2 z0) n + c - (a+b+1) z0) f_{n+1}
    """
    q = z0 * (1 - z0)
    p0 = c - (a + b + 1) * z0
    p1 = 1 - 2 * z0
    val = f0 + f1 * h
    der = f1
    fm, fn = f0, f1
    hpow = h  # h^(n+1)
    small = 0
    for n in range(MAX_TERMS):
        fnext = ((n + a) * (n + b) * fm - (n + 1) * (p1 * n + p0) * fn) / (q * (n + 2) * (n + 1))
        dterm = (n + 2) * fnext * hpow
        hpow *= h
        term = fnext * hpow
        val += term
        der += dterm
        fm, fn = fn, fnext
        if abs(term) <= SERIES_EPS * abs(val) and abs(dterm) <= SERIES_EPS * abs(der):
            small += 1
            if small == 3:
                return val, der
        else:
            small = 0
    raise PrecisionError(f"Taylor re-expansion did not converge (z0 = {z0}, h = {h})", val)


def _taylor(a, b, c, z) -> complex:
    """Analytic continuation from ``|z| = 1/2`` by stepping the ODE.

    Each step stays within half the distance to the nearest singular point
    (0 or 1), so the local series converge geometrically with ratio <= 1/2.
    """
    mod = abs(z)
    if mod <= 0.5:
        return _series(a, b, c, z)
    zk = z * (0.5 / mod)
    f = _series(a, b, c, zk)
    fp = a * b / c * _series(a + 1, b + 1, c + 1, zk)
    for _ in range(10_000):
        remaining = z - zk
        reach = 0.5 * min(abs(zk), abs(1 - zk))
        if abs(remaining) <= reach:
            f, fp = _taylor_step(a, b, c, zk, f, fp, remaining)
            return f
        h = remaining * (reach / abs(remaining))
        f, fp = _taylor_step(a, b, c, zk, f, fp, h)
        zk = zk + h
    raise PrecisionError(f"Taylor continuation to z = {z} needed too many steps", f)


def _validate(a, b, c, z):
    if _is_nonpositive_integer(c):
        raise PoleError(f"c = {c} is a non-positive integer")
    if abs(z) > 1 + 1e-12:
        raise DomainError(f"|z| = {abs(z)} > 1 is outside the supported domain")
    if z.imag == 0 and z.real >= 1:
        raise DomainError(f"z = {z} lies on the branch cut [1, inf)")


def ratios(z: complex) -> dict:
    """Expansion ratio of each strategy at ``z`` (smaller converges faster)."""
    return {
        "series": abs(z),
        "pfaff": abs(z / (z - 1)),
        "connection": abs(1 - z),
    }


def hyp2f1(a, b, c, z, method: str | None = None) -> complex:
    """Gauss hypergeometric function ``F(a, b; c; z)``.

    Parameters
    ----------
    a, b, c : complex
        Parameters; ``c`` must not be a non-positive integer.
    z : complex
        Argument with ``|z| <= 1``, ``z`` not in ``[1, inf)``.
    method : {None, 'series', 'pfaff', 'connection', 'taylor'}
        Force a strategy.  ``None`` picks the fastest converging one.

    Raises
    ------
    PoleError, DomainError, PrecisionError
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _validate(a, b, c, z)
    # canonical order makes F(a,b;c;z) == F(b,a;c;z) bit for bit
    if (b.real, b.imag) < (a.real, a.imag):
        a, b = b, a
    if z == 0:
        return 1 + 0j
    if method is not None:
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        return {"series": _series, "pfaff": _pfaff, "connection": _connection, "taylor": _taylor}[method](a, b, c, z)

    # terminating series are exact polynomials
    if _is_nonpositive_integer(a) or _is_nonpositive_integer(b):
        return _series(a, b, c, z)

    r = ratios(z)
    if _connection_degenerate(a, b, c):
        if r["connection"] < DEGENERATE_MIN_DIST:
            raise PrecisionError(
                f"z = {z} too close to 1 for degenerate parameters (c - a - b = {c - a - b})"
            )
        del r["connection"]
    best = min(r, key=r.get)
    if r[best] <= DIRECT_RADIUS:
        return {"series": _series, "pfaff": _pfaff, "connection": _connection}[best](a, b, c, z)
    if "connection" not in r and abs(1 - z) < DIRECT_RADIUS:
        warnings.warn(
            f"degenerate connection formula; continuing towards z = 1 with reduced accuracy (z = {z})",
            AccuracyWarning,
            stacklevel=2,
        )
    return _taylor(a, b, c, z)
