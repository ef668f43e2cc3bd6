import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from spinprop.errors import DomainError, PoleError, PrecisionError
from spinprop.hyp2f1 import AccuracyWarning, complex_log_gamma, hyp2f1, principal_power


def _mp(a, b, c, z):
    return complex(mpmath.hyp2f1(a, b, c, z))


def test_value_at_origin():
    for a, b, c in [(1, 2, 3), (0.5 + 2j, -1.3j, 2.2 - 1j), (7, 7, 0.5)]:
        assert hyp2f1(a, b, c, 0) == 1


def test_log_closed_form():
    assert abs(hyp2f1(1, 1, 2, 0.3) - (-math.log(0.7) / 0.3)) < 1e-12
    assert hyp2f1(1, 1, 2, 0.3).real == pytest.approx(1.1889164797957748, rel=1e-14)


def test_elementary_closed_forms():
    z = 0.4 - 0.7j
    # (1 - z)^(-a) = F(a, b; b; z)
    assert abs(hyp2f1(0.3 + 1j, 2.5, 2.5, z) - (1 - z) ** (-(0.3 + 1j))) < 1e-13
    # asin(z)/z = F(1/2, 1/2; 3/2; z^2)
    w = 0.6 + 0.5j
    assert abs(hyp2f1(0.5, 0.5, 1.5, w * w) - cmath.asin(w) / w) < 1e-13


def test_sech_point_pfaff_vs_continuation():
    # mu = 0.5, nu = 3i, gamma = 1.5: c - a - b = -6i, so the plain series
    # does not converge at z = -1 and the two usable routes are compared
    a, b, c = 1.5 + 3j, 3j, 1.5
    pf = hyp2f1(a, b, c, -1, method="pfaff")
    ty = hyp2f1(a, b, c, -1, method="taylor")
    assert abs(pf - ty) / abs(pf) < 1e-10
    assert abs(pf - _mp(a, b, c, -1)) / abs(pf) < 1e-12


def test_series_nonconvergence_reports_estimate():
    with pytest.raises(PrecisionError) as err:
        hyp2f1(1.5 + 3j, 3j, 1.5, -1, method="series")
    assert err.value.estimate is not None


def test_unit_circle_against_mpmath():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(60):
        a_w, c_w = rng.uniform(0.1, 10), rng.uniform(0.1, 12)
        mu, nu = c_w / 2, 1j * a_w
        gamma = 0.5 + 2 * mu
        z = cmath.exp(1j * rng.uniform(0.02, 2 * math.pi - 0.02))
        for a, b, c in [(gamma + nu, nu, gamma), (gamma + nu, nu + 1, gamma + 1)]:
            ref = _mp(a, b, c, z)
            worst = max(worst, abs(hyp2f1(a, b, c, z) - ref) / abs(ref))
    assert worst < 1e-10


@pytest.mark.parametrize(
    "z",
    [0.3, -0.45 + 0.2j, 0.7j, -0.9, 0.95 * cmath.exp(1j * math.pi / 3), 0.8 + 0.55j, 0.99, cmath.exp(2.5j)],
)
def test_generic_points_against_mpmath(z):
    for a, b, c in [(0.5 + 1j, -0.3 + 0.2j, 1.7), (2.2, 1.1 - 2j, 0.6 + 1j), (-1.5 + 0.5j, 0.8, 2.4 - 0.3j)]:
        ref = _mp(a, b, c, z)
        assert abs(hyp2f1(a, b, c, z) - ref) <= 1e-10 * abs(ref)


def test_terminating_series():
    # F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
    b, c, z = 1.5 + 0.5j, 2.5, 0.9 + 0.3j
    z = z / abs(z)
    exact = 1 - 2 * b * z / c + b * (b + 1) * z * z / (c * (c + 1))
    assert abs(hyp2f1(-2, b, c, z) - exact) < 1e-14


def test_errors():
    with pytest.raises(PoleError):
        hyp2f1(1, 1, -2, 0.3)
    with pytest.raises(PoleError):
        hyp2f1(1, 1, 0, 0.3)
    with pytest.raises(DomainError, match="outside"):
        hyp2f1(1, 1, 2, 1.5j)
    with pytest.raises(DomainError, match="cut"):
        hyp2f1(1, 1, 2, 1.0)
    with pytest.raises(ValueError):
        hyp2f1(1, 1, 2, 0.3, method="magic")


def test_degenerate_connection_policy():
    # c - a - b = 0: the two-term connection formula is singular
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hyp2f1(1, 1, 2, -0.5)
    with pytest.warns(AccuracyWarning):
        v = hyp2f1(1, 1, 2, 0.6 + 0.6j)
    z = 0.6 + 0.6j
    assert abs(v - (-cmath.log(1 - z) / z)) < 1e-10
    with pytest.raises(PrecisionError):
        hyp2f1(1, 1, 2, 0.9995)


def test_contiguous_and_derivative_relations():
    rng = np.random.default_rng(11)
    for _ in range(100):
        a = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
        b = complex(rng.uniform(-2, 2), rng.uniform(-3, 3))
        c = complex(rng.uniform(0.2, 3), rng.uniform(-2, 2))
        z = 0.9 * math.sqrt(rng.uniform()) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        terms = (c * (1 - z) * hyp2f1(a, b, c, z), -c * hyp2f1(a - 1, b, c, z), (c - b) * z * hyp2f1(a, b, c + 1, z))
        assert abs(sum(terms)) <= 1e-9 * max(abs(x) for x in terms)
        h = 1e-5
        fd = (hyp2f1(a, b, c, z + h) - hyp2f1(a, b, c, z - h)) / (2 * h)
        exact = a * b / c * hyp2f1(a + 1, b + 1, c + 1, z)
        assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


_param = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))
_cparam = st.builds(complex, st.floats(0.2, 3), st.floats(-2, 2))
_small_z = st.builds(cmath.rect, st.floats(0, 0.45), st.floats(-math.pi, math.pi))


@pytest.mark.filterwarnings("ignore::spinprop.hyp2f1.AccuracyWarning")
@settings(max_examples=200, deadline=None)
@given(_param, _param, _cparam, st.builds(cmath.rect, st.floats(0, 1), st.floats(-3.1, 3.1)))
def test_symmetry_exact(a, b, c, z):
    assume(abs(1 - z) > 1e-2)
    assert hyp2f1(a, b, c, z) == hyp2f1(b, a, c, z)


@settings(max_examples=200, deadline=None)
@given(_param, _param, _cparam, _small_z)
def test_series_and_pfaff_agree(a, b, c, z):
    s = hyp2f1(a, b, c, z, method="series")
    p = hyp2f1(a, b, c, z, method="pfaff")
    assert abs(s - p) <= 1e-10 * max(abs(s), 1e-8) or abs(s) < 1e-8


def test_complex_log_gamma():
    assert complex_log_gamma(1) == 0
    assert complex_log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-15)
    ref = complex(mpmath.loggamma(2 + 3j))
    assert abs(complex_log_gamma(2 + 3j) - ref) < 1e-12 * abs(ref)
    # recurrence log Gamma(z+1) = log Gamma(z) + log z, modulo 2 pi i
    for z in (2 + 3j, -3.5 + 0.2j, 0.1 - 20j, 40 + 10j):
        d = complex_log_gamma(z + 1) - complex_log_gamma(z) - cmath.log(z)
        assert abs(d.real) < 1e-12 * max(1, abs(complex_log_gamma(z)))
        k = d.imag / (2 * math.pi)
        assert abs(k - round(k)) < 1e-12
    with pytest.raises(PoleError):
        complex_log_gamma(-3)


def test_principal_power():
    assert abs(principal_power(-1, 0.5) - 1j) < 1e-16
    nu = 0.7
    for th in (-3.0, -0.5, 1.2, math.pi):
        v = principal_power(cmath.exp(1j * th), 1j * nu)
        assert abs(v - math.exp(-nu * th)) < 1e-14
    assert abs(principal_power(2, 3j) - cmath.exp(3j * math.log(2))) < 1e-15
    assert principal_power(0, 2) == 0
    with pytest.raises(DomainError):
        principal_power(0, -1)
