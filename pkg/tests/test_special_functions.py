import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from scatsize.errors import DomainError
from scatsize.special_functions import (
    LogComplex, ScaledAccumulator, legendre_real, legendre_scaled, log_spherical_hankel1,
    log_spherical_jn, log_spherical_yn, log_sum, miller_start, spherical_bessel_j,
    spherical_bessel_y, spherical_derivatives, spherical_hankel1, wrap_phase,
)

from . import oracle_values as ref

complexes = st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3,
                               allow_nan=False, allow_infinity=False)


# --- LogComplex -----------------------------------------------------------

def test_wrap_phase_interval():
    assert wrap_phase(-math.pi) == math.pi
    assert wrap_phase(math.pi) == math.pi
    assert wrap_phase(3 * math.pi) == pytest.approx(math.pi)
    assert -math.pi < wrap_phase(-7.0) <= math.pi


@settings(max_examples=100, deadline=None)
@given(complexes, complexes)
def test_logcomplex_arithmetic_matches_complex(a, b):
    la, lb = LogComplex.from_complex(a), LogComplex.from_complex(b)
    assert (la * lb).to_complex() == pytest.approx(a * b, rel=1e-12)
    assert (la / lb).to_complex() == pytest.approx(a / b, rel=1e-12)
    s = a + b
    assert (la + lb).to_complex() == pytest.approx(s, rel=1e-12, abs=1e-12 * (abs(a) + abs(b)))
    assert -math.pi < (la * lb).phase <= math.pi


def test_logcomplex_zero_and_huge():
    z = LogComplex.zero()
    x = LogComplex(5000.0, 1.0)
    assert (z * x).zero_flag
    assert (z + x) == x
    assert (x - x).zero_flag
    big = LogComplex(1e4, 0.3) + LogComplex(1e4 - math.log(3), 0.3)
    assert big.logmag == pytest.approx(1e4 + math.log(4 / 3), rel=1e-15)
    assert LogComplex.from_complex(0).zero_flag
    assert math.isinf(abs(x.to_complex()))
    with pytest.raises(OverflowError):
        LogComplex.from_complex(complex(math.inf, 0))


def test_scaled_accumulator_handles_wide_range():
    acc = ScaledAccumulator()
    terms = [LogComplex(700.0 * j, 0.0) for j in range(6)]
    for t in terms:
        acc.add(t)
    assert acc.value.logmag == pytest.approx(3500.0 + math.log1p(math.exp(-700)), abs=1e-12)
    lm = np.array([1000.0, 998.0, -5.0])
    out = log_sum(lm, np.array([0.0, math.pi, 0.0]))
    assert out.logmag == pytest.approx(1000.0 + math.log1p(-math.exp(-2.0)), abs=1e-12)
    assert out.phase == pytest.approx(0.0, abs=1e-15)


# --- spherical Bessel -------------------------------------------------------

def test_j0_zero_at_pi():
    assert abs(spherical_bessel_j(0, math.pi)[0]) < 1e-14


def test_j1_at_one():
    assert spherical_bessel_j(1, 1.0)[1] == pytest.approx(ref.J1_AT_1, rel=1e-14)
    assert ref.J1_AT_1 == pytest.approx(math.sin(1) - math.cos(1), rel=1e-15)


def test_j50_at_one_is_tiny_and_positive():
    sign, logabs = log_spherical_jn(50, 1.0)
    assert sign[50] > 0
    assert logabs[50] == pytest.approx(ref.LOG_J50_AT_1, rel=1e-13)
    assert logabs[50] < math.log(1e-60)
    assert np.all(np.isfinite(logabs))


def test_h40_at_one_is_huge_without_overflow():
    logabs, phase = log_spherical_hankel1(40, 1.0)
    assert logabs[40] == pytest.approx(ref.LOG_ABS_H40_AT_1, rel=1e-13)
    assert logabs[40] > math.log(1e50)
    assert np.all(np.isfinite(logabs)) and np.all(np.isfinite(phase))
    # a degree whose modulus exceeds the double range stays representable
    big, _ = log_spherical_hankel1(300, 0.5)
    assert big[-1] > 800 and math.isfinite(big[-1])


def test_h0_closed_form():
    h = spherical_hankel1(0, 1.0)[0]
    assert h == pytest.approx(-1j * cmath.exp(1j), rel=1e-15)
    assert abs(h) == pytest.approx(1.0, rel=1e-15)


@pytest.mark.parametrize("x", [0.3, 1.0, 2.7, 10.0, 55.5, 100.0])
def test_bessel_against_scipy(x):
    L = 60
    l = np.arange(L + 1)
    j = spherical_bessel_j(L, x)
    y = spherical_bessel_y(L, x)
    jr = special.spherical_jn(l, x)
    yr = special.spherical_yn(l, x)
    ok = np.abs(jr) > 1e-280
    np.testing.assert_allclose(j[ok], jr[ok], rtol=1e-12, atol=1e-300)
    ok = np.isfinite(yr)
    np.testing.assert_allclose(y[ok], yr[ok], rtol=1e-12)


def test_wronskian():
    x = 2.7
    L = 21
    j = spherical_bessel_j(L, x)
    h = spherical_hankel1(L, x)
    dj = spherical_derivatives(j, x)
    dh = spherical_derivatives(h, x)
    w = j[:21] * dh[:21] - dj[:21] * h[:21]
    np.testing.assert_allclose(w, 1j / x ** 2, rtol=1e-12)


@pytest.mark.parametrize("x", [0.05, 0.7, 3.0, 20.0, 99.0])
def test_three_term_recurrence_residual(x):
    L = 101
    for sign, logabs in (log_spherical_jn(L, x), log_spherical_yn(L, x)):
        l = np.arange(1, L)
        # f_{l-1}/f_l + f_{l+1}/f_l - (2l+1)/x, formed from ratios in log space
        lo = sign[:-2] * sign[1:-1] * np.exp(logabs[:-2] - logabs[1:-1])
        hi = sign[2:] * sign[1:-1] * np.exp(logabs[2:] - logabs[1:-1])
        scale = np.maximum.reduce([np.abs(lo), np.abs(hi), (2 * l + 1) / x])
        resid = np.abs(lo + hi - (2 * l + 1) / x) / scale
        assert resid.max() < 1e-11


def test_hankel_dominates_j():
    for x in (0.1, 1.0, 7.5, 40.0):
        lj = log_spherical_jn(80, x)[1]
        lh = log_spherical_hankel1(80, x)[0]
        assert np.all(lh >= lj - 1e-14)


def test_bessel_domain_errors():
    with pytest.raises(DomainError):
        spherical_bessel_j(3, 0.0)
    with pytest.raises(DomainError):
        spherical_hankel1(3, -1.0)
    with pytest.raises(DomainError):
        spherical_bessel_j(-1, 1.0)


def test_miller_start_margin():
    assert miller_start(100, 1.0) == 100 + 64
    assert miller_start(0, 0.5) == 1 + 20
    assert miller_start(5, 80.0) >= 80 + 20


# --- Legendre ---------------------------------------------------------------

def test_legendre_seeds_and_small_degrees():
    for z in (0.3, 3.0, 2 - 5j, 1e6j):
        P = legendre_scaled(3, z).to_complex()
        assert P[0] == 1
        assert P[1] == pytest.approx(z, rel=1e-15)
    P = legendre_scaled(3, 3.0).to_complex()
    np.testing.assert_allclose(P.real, [1, 3, 13, 63], rtol=1e-15)


def test_legendre_complex_against_extended_precision():
    seq = legendre_scaled(200, 1 + 50j)
    assert len(seq) == 201
    for l, (logmag, phase) in ref.LEGENDRE_1P50I.items():
        assert seq[l].logmag == pytest.approx(logmag, rel=1e-10)
        assert abs(wrap_phase(seq[l].phase - phase)) < 1e-8


def test_legendre_no_overflow_at_extreme_arguments():
    seq = legendre_scaled(2000, 1e6 + 1e6j)
    assert np.all(np.isfinite(seq.logmag))
    assert seq[2000].logmag > 2000 * math.log(1e6)


def test_legendre_real_bounded_and_matches_scipy():
    mu = np.linspace(-1, 1, 201)
    P = legendre_real(60, mu)
    assert np.all(np.abs(P) <= 1 + 1e-12)
    np.testing.assert_allclose(P[37], special.eval_legendre(37, mu), atol=1e-13)
    for z in (-1.0, -0.31, 0.5, 1.0):
        vals = legendre_scaled(500, z).to_complex()
        assert np.all(np.abs(vals) <= 1 + 1e-12)
