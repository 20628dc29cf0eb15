"""Kernel contracts: frozen oracle values, dual-path consistency, bounds."""

import math

import numpy as np
import pytest

from casorb.specfun import (
    FnEval,
    UnsupportedOrderError,
    bessel_k,
    bessel_k1_asymptotic,
    bessel_y,
    csch_k1,
    csch_k1_array,
    polylog,
    sech2_moment,
    struve_h,
    struve_k,
    upper_incomplete_gamma_half,
)

# frozen with mpmath at 40 digits
H1_AT_1 = 0.1984573362019444
H2_AT_2 = 0.28031806035385379
Y1_AT_1 = -0.78121282130028872
Y2_AT_5 = 0.36766288260552452
K1_STRUVE_AT_PI = 0.69085480644049455
K2_STRUVE_AT_PI = 0.91701938411356474
K1_BESSEL_AT_1 = 0.60190723019723457
POLYLOG_32 = 0.0049957731592184196   # Li_{3/2}(1/(51 log 51))
SECH2_5 = 2.8410984884917378
GAMMA_HALF_1 = 0.27880558528066198   # sqrt(pi) erfc(1)


class TestFnEval:
    def test_invariants(self):
        with pytest.raises(ValueError):
            FnEval(float("nan"), 0.0, "series")
        with pytest.raises(ValueError):
            FnEval(1.0, -1e-30, "series")
        with pytest.raises(ValueError):
            FnEval(1.0, 0.0, "magic")
        with pytest.raises(ValueError):
            FnEval(1.0, 1e-10, "closed_form")   # > 4 ulp

    def test_rigor_flag(self):
        assert FnEval(1.0, 1e-13, "series").bound_is_rigorous
        assert not FnEval(1.0, 1e-13, "integral_rep").bound_is_rigorous


class TestStruveH:
    def test_frozen_values(self):
        assert struve_h(1, 1.0).value == pytest.approx(H1_AT_1, abs=1e-14)
        assert struve_h(2, 2.0).value == pytest.approx(H2_AT_2, abs=1e-14)

    def test_small_z_quadratic_growth(self):
        # H_1(theta) = (2/(3 pi)) theta^2 (1 + o(1)) as theta -> 0
        for theta in (1e-2, 1e-3, 1e-4):
            lead = 2.0 * theta * theta / (3.0 * math.pi)
            assert struve_h(1, theta).value == pytest.approx(lead, rel=1e-3)

    def test_bound_contract_z_le_12(self):
        for z in np.geomspace(1e-3, 12.0, 40):
            for nu in (1, 2):
                e = struve_h(nu, float(z))
                assert e.abs_error_bound <= 1e-12 * max(1.0, abs(e.value))

    def test_cross_method_at_large_z(self):
        # composition route H = K + Y must match the series at the window edge
        lo = struve_h(2, 12.0)
        hi = struve_h(2, 12.0 + 1e-9)
        assert abs(lo.value - hi.value) < 1e-8

    def test_errors(self):
        with pytest.raises(UnsupportedOrderError):
            struve_h(3, 1.0)
        with pytest.raises(ValueError):
            struve_h(1, -1.0)


class TestBesselY:
    def test_frozen_values(self):
        assert bessel_y(1, 1.0).value == pytest.approx(Y1_AT_1, abs=1e-14)
        assert bessel_y(2, 5.0).value == pytest.approx(Y2_AT_5, abs=1e-13)

    def test_small_z_divergence(self):
        # Y_1(theta) ~ -2/(pi theta): negative blow-up like -c/theta
        for theta in (1e-2, 1e-3):
            v = bessel_y(1, theta).value
            assert v == pytest.approx(-2.0 / (math.pi * theta), rel=1e-3)

    def test_mpmath_sweep(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        for z in np.geomspace(1e-2, 150.0, 40):
            for nu in (1, 2):
                e = bessel_y(nu, float(z))
                want = float(mp.bessely(nu, float(z)))
                assert abs(e.value - want) <= max(e.abs_error_bound, 1e-15), (nu, z)

    def test_errors(self):
        with pytest.raises(UnsupportedOrderError):
            bessel_y(0, 1.0)
        with pytest.raises(ValueError):
            bessel_y(1, 0.0)


class TestStruveK:
    def test_frozen_values(self):
        assert struve_k(1, math.pi).value == pytest.approx(K1_STRUVE_AT_PI, rel=1e-12)
        assert struve_k(2, math.pi).value == pytest.approx(K2_STRUVE_AT_PI, rel=1e-12)

    def test_half_integer_closed_forms(self):
        for z in (0.1, 1.0, 10.0, 100.0):
            assert struve_k(0.5, z).value == pytest.approx(
                math.sqrt(2.0 / (math.pi * z)), rel=1e-14)
            assert struve_k(1.5, z).value == pytest.approx(
                math.sqrt(z / (2.0 * math.pi)) * (1.0 + 2.0 / z**2), rel=1e-14)
            assert struve_k(0.5, z).method == "closed_form"

    def test_tri_method_consistency(self):
        # any two applicable routes agree within the sum of their bounds
        for z in np.geomspace(1e-3, 200.0, 200):
            z = float(z)
            for nu in (0.5, 1.0, 1.5, 2.0):
                evals = [struve_k(nu, z)]
                if nu in (1.0, 2.0) and z <= 12.0:
                    evals.append(struve_k(nu, z, "series"))
                if nu in (1.0, 2.0) and z >= 40.0:
                    evals.append(struve_k(nu, z, "asymptotic"))
                for i in range(len(evals)):
                    for j in range(i + 1, len(evals)):
                        gap = abs(evals[i].value - evals[j].value)
                        allow = evals[i].abs_error_bound + evals[j].abs_error_bound
                        assert gap <= allow, (nu, z, gap, allow)

    def test_bound_contract(self):
        for z in np.geomspace(1e-3, 200.0, 50):
            for nu in (1, 2):
                e = struve_k(nu, float(z))
                assert e.abs_error_bound <= 1e-11 * max(1.0, abs(e.value))

    def test_asymptotic_leading_term(self):
        # K_2(z) -> (2/(3 pi)) z at large z
        e = struve_k(2, 192.0)
        assert e.value == pytest.approx(2.0 * 192.0 / (3.0 * math.pi), rel=1e-3)

    def test_method_windows(self):
        with pytest.raises(ValueError):
            struve_k(1, 13.0, "series")
        with pytest.raises(ValueError):
            struve_k(1, 39.0, "asymptotic")
        with pytest.raises(UnsupportedOrderError):
            struve_k(2.5, 1.0)

    def test_small_angle_blowup(self):
        # pi K_1(theta)/(4 theta) grows like C/theta^2, bounded constant
        for theta in np.geomspace(1e-4, 1e-1, 20):
            ratio = (math.pi * struve_k(1, float(theta)).value
                     / (4.0 * theta)) * 8.0 * theta * theta
            assert 3.5 <= ratio <= 4.5


class TestBesselK:
    def test_half_order_closed_forms(self):
        assert bessel_k(0.5, 1.0).value == pytest.approx(
            math.sqrt(math.pi / 2.0) / math.e, rel=1e-14)
        assert bessel_k(1.5, 1.0).value == pytest.approx(
            2.0 * math.sqrt(math.pi / 2.0) / math.e, rel=1e-14)
        assert bessel_k(1, 1.0).value == pytest.approx(K1_BESSEL_AT_1, rel=1e-13)

    def test_k32_closed_form_consistency(self):
        for z in np.geomspace(0.1, 100.0, 60):
            want = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z) * (1.0 + 1.0 / z)
            assert bessel_k(1.5, float(z)).value == pytest.approx(want, rel=1e-13)

    def test_order_monotonicity(self):
        # K_1(z) <= K_{3/2}(z) for all z
        for z in np.geomspace(1e-3, 300.0, 60):
            assert bessel_k(1, float(z)).value <= bessel_k(1.5, float(z)).value

    def test_series_vs_cephes_seam(self):
        lo = bessel_k(1, 4.0 - 1e-12).value
        hi = bessel_k(1, 4.0).value
        assert lo == pytest.approx(hi, rel=1e-11)

    def test_relative_accuracy_sweep(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        for z in np.geomspace(1e-3, 100.0, 50):
            got = bessel_k(1, float(z)).value
            want = float(mp.besselk(1, float(z)))
            assert got == pytest.approx(want, rel=1e-12)

    def test_asymptotic_check_route(self):
        for z in (18.0, 30.0, 80.0):
            a = bessel_k1_asymptotic(z)
            b = bessel_k(1, z)
            assert abs(a.value - b.value) <= a.abs_error_bound + 1e-12 * b.value
        with pytest.raises(ValueError):
            bessel_k1_asymptotic(10.0)

    def test_errors(self):
        with pytest.raises(UnsupportedOrderError):
            bessel_k(2.0, 1.0)
        with pytest.raises(ValueError):
            bessel_k(1, 0.0)


class TestCschK1:
    def test_matches_components(self):
        for z in (0.1, 0.5, 1.0, 3.0, 10.0):
            want = bessel_k(1, z).value / math.sinh(z)
            assert csch_k1(z) == pytest.approx(want, rel=1e-12)

    def test_strictly_decreasing(self):
        z = np.linspace(1e-3, 50.0, 10000)
        vals = csch_k1_array(z)
        assert np.all(np.diff(vals) < 0)

    def test_k32_majorant(self):
        # csch(z) K_1(z) <= csch(z) K_{3/2}(z) = sqrt(2 pi/z)(1+z)/(z e^{2z} - z)
        for z in np.geomspace(0.05, 40.0, 60):
            z = float(z)
            major = (math.sqrt(2.0 * math.pi / z) * (1.0 + z)
                     / (z * math.exp(2.0 * z) - z))
            assert csch_k1(z) <= major

    def test_array_matches_scalar(self):
        z = np.array([0.25, 1.0, 2.0, 7.5])
        vals = csch_k1_array(z)
        for zi, vi in zip(z, vals):
            assert vi == pytest.approx(csch_k1(float(zi)), rel=1e-15)

    def test_domain(self):
        with pytest.raises(ValueError):
            csch_k1(0.0)
        with pytest.raises(ValueError):
            csch_k1_array(np.array([1.0, -1.0]))


class TestMoments:
    def test_sech2_moment_values(self):
        assert sech2_moment(1.0) == pytest.approx(1.0, rel=1e-14)
        assert sech2_moment(3.0) == pytest.approx(math.pi**2 / 12.0, rel=1e-14)
        assert sech2_moment(5.0) == pytest.approx(SECH2_5, rel=1e-14)

    def test_sech2_moment_fractional_b(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        for b in (0.5, 1.5, 2.5, 3.7):
            want = float(mp.quad(lambda x: x ** (b - 1) / mp.cosh(x) ** 2,
                                 [0, mp.inf]))
            assert sech2_moment(b) == pytest.approx(want, rel=1e-11)

    def test_sech2_moment_pole(self):
        with pytest.raises(ValueError):
            sech2_moment(2.0)
        with pytest.raises(ValueError):
            sech2_moment(0.0)

    def test_gamma_half(self):
        assert upper_incomplete_gamma_half(0.0) == pytest.approx(
            math.sqrt(math.pi), rel=1e-15)
        assert upper_incomplete_gamma_half(1.0) == pytest.approx(
            GAMMA_HALF_1, rel=1e-13)

    def test_gamma_half_quadrature_oracle(self):
        from casorb.quadrature import adaptive_quadrature

        for a in (0.3, 1.0, math.log(50.0)):
            res = adaptive_quadrature(
                lambda t: math.exp(-t) / math.sqrt(t), a, a + 60.0)
            assert upper_incomplete_gamma_half(a) == pytest.approx(
                res.value, rel=1e-11)


class TestPolylog:
    def test_values(self):
        assert polylog(1.5, 0.0) == 0.0
        x = 1.0 / (51.0 * math.log(51.0))
        assert polylog(1.5, x) == pytest.approx(POLYLOG_32, rel=1e-14)

    def test_li1_exact(self):
        for x in (0.0, 0.1, 0.9, 0.999):
            assert polylog(1.0, x) == pytest.approx(-math.log1p(-x), rel=1e-15)

    def test_order_inequality(self):
        # Li_{3/2}(x) <= Li_1(x) on (0, 1)
        for x in (0.01, 0.3, 0.9):
            assert polylog(1.5, x) <= polylog(1.0, x)

    def test_domain(self):
        with pytest.raises(ValueError):
            polylog(1.5, 1.0)
        with pytest.raises(ValueError):
            polylog(1.5, -0.1)
        with pytest.raises(UnsupportedOrderError):
            polylog(2.0, 0.5)
