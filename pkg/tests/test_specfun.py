import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcattack import specfun
from pcattack.specfun import DomainError

mpmath.mp.dps = 40

# Frozen from mpmath.quad at 30 digits on the defining integrals:
#   E_n(x) = int_1^inf e^{-xt} t^{-n} dt,  K_1(x) = int_0^inf e^{-x cosh t} cosh t dt,
#   erfc(x) = 2/sqrt(pi) int_x^inf e^{-t^2} dt.
E1_AT_1 = 0.21938393439552027367716377546
E1_AT_2 = 0.0489005107080611195672398352281
E3_AT_HALF = 0.221604364275178457369299376162
E2_AT_3 = 0.0106419250852728307418401781641
K1_AT_1 = 0.601907230197234574737540001535
K1_AT_2 = 0.139865881816522427284598807036
ERFC_AT_1 = 0.157299207050285130658779364917


def rel(a, b):
    return abs(a - b) / abs(b)


class TestExpIntegral:
    def test_small_argument_limit(self):
        assert specfun.exp_integral_en(2, 1e-300) == pytest.approx(1.0, rel=1e-12)
        for n in range(2, 10):
            assert specfun.exp_integral_en(n, 1e-14) == pytest.approx(1 / (n - 1), rel=1e-12)

    @pytest.mark.parametrize(
        "n, x, expected",
        [(1, 1.0, E1_AT_1), (1, 2.0, E1_AT_2), (3, 0.5, E3_AT_HALF), (2, 3.0, E2_AT_3)],
    )
    def test_quadrature_oracle(self, n, x, expected):
        assert rel(specfun.exp_integral_en(n, x), expected) <= 1e-12

    def test_recurrence_at_3_2(self):
        e2 = specfun.exp_integral_en(2, 2.0)
        e3 = specfun.exp_integral_en(3, 2.0)
        assert rel(e3, (math.exp(-2.0) - 2.0 * e2) / 2) <= 1e-12

    @pytest.mark.parametrize("n", range(1, 17))
    @pytest.mark.parametrize("x", [0.01, 0.1, 1.0, 10.0])
    def test_recurrence_grid(self, n, x):
        lhs = specfun.exp_integral_en(n + 1, x)
        rhs = (math.exp(-x) - x * specfun.exp_integral_en(n, x)) / n
        assert rel(lhs, rhs) <= 1e-12

    def test_against_mpmath_over_range(self):
        xs = np.logspace(-8, math.log10(700), 120)
        worst = 0.0
        for n in (1, 2, 3, 5, 9, 16):
            for x in xs:
                worst = max(worst, rel(specfun.exp_integral_en(n, x), float(mpmath.expint(n, x))))
        assert worst <= 1e-12

    def test_scaled_matches_at_large_argument(self):
        for x in (50.0, 700.0, 5000.0, 1e8):
            ref = float(mpmath.exp(x) * mpmath.expint(3, x))
            assert rel(specfun.exp_integral_en_scaled(3, x), ref) <= 1e-12

    def test_underflow_to_zero(self):
        assert specfun.exp_integral_en(1, 1000.0) == 0.0

    @pytest.mark.parametrize("n, x", [(1, 0.0), (1, -1.0), (0, 1.0), (1.5, 1.0)])
    def test_domain(self, n, x):
        with pytest.raises(DomainError):
            specfun.exp_integral_en(n, x)


class TestIncompleteGamma:
    def test_zero_order_is_e1(self):
        assert rel(specfun.upper_incomplete_gamma_negint(0, 1.0), E1_AT_1) <= 1e-12

    def test_examples(self):
        assert rel(specfun.upper_incomplete_gamma_negint(2, 0.5), 0.5 ** -2 * E3_AT_HALF) <= 1e-12
        assert rel(specfun.upper_incomplete_gamma_negint(1, 3.0), E2_AT_3 / 3) <= 1e-12

    def test_identity_grid(self):
        for n in range(0, 17):
            for x in (0.01, 0.1, 1.0, 10.0):
                lhs = specfun.upper_incomplete_gamma_negint(n, x) * x ** n
                assert rel(lhs, specfun.exp_integral_en(n + 1, x)) <= 1e-12

    def test_against_mpmath(self):
        for n in (0, 1, 4, 8):
            for x in (1e-3, 0.7, 3.0, 40.0):
                assert rel(specfun.upper_incomplete_gamma_negint(n, x),
                           float(mpmath.gammainc(-n, x))) <= 1e-12

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.upper_incomplete_gamma_negint(1, 0.0)
        with pytest.raises(DomainError):
            specfun.upper_incomplete_gamma_negint(-1, 1.0)


class TestBesselK1:
    def test_small_argument_law(self):
        for x in (1e-8, 1e-6, 1e-4):
            assert x * specfun.bessel_k1(x) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("x, expected", [(1.0, K1_AT_1), (2.0, K1_AT_2)])
    def test_integral_oracle(self, x, expected):
        assert rel(specfun.bessel_k1(x), expected) <= 1e-12

    def test_against_mpmath_over_range(self):
        worst = max(rel(specfun.bessel_k1(x), float(mpmath.besselk(1, x)))
                    for x in np.logspace(-8, math.log10(700), 200))
        assert worst <= 1e-12

    def test_monotone_and_bounded(self):
        xs = np.logspace(-8, 2.5, 400)
        vals = np.array([specfun.bessel_k1(x) for x in xs])
        assert np.all(np.diff(vals) < 0)
        xk = xs * vals
        assert np.all((xk > 0) & (xk <= 1.0))

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.bessel_k1(0.0)


class TestErfc:
    def test_values(self):
        assert specfun.erfc(0.0) == 1.0
        assert rel(specfun.erfc(1.0), ERFC_AT_1) <= 1e-12
        assert specfun.erfc(-1.0) == pytest.approx(2 - ERFC_AT_1, rel=1e-15)

    def test_relative_accuracy(self):
        for x in np.linspace(-27, 27, 109):
            assert rel(specfun.erfc(x), float(mpmath.erfc(x))) <= 1e-12

    @given(st.floats(min_value=0, max_value=30))
    def test_reflection(self, x):
        assert abs(specfun.erfc(x) + specfun.erfc(-x) - 2.0) <= 1e-15

    @settings(max_examples=60)
    @given(st.floats(min_value=-5, max_value=26))
    def test_open_range(self, x):
        # below x = -5.9 erfc rounds to exactly 2.0 in double precision
        assert 0.0 < specfun.erfc(x) < 2.0


def test_ierfc_continuous_across_branches():
    for u in (1e-6, 0.3, 1.9999, 2.0, 2.0001, 5.0, 20.0):
        ref = mpmath.exp(-u * u) - mpmath.sqrt(mpmath.pi) * u * mpmath.erfc(u)
        assert rel(specfun.ierfc_sqrtpi(u), float(ref)) <= 1e-12
