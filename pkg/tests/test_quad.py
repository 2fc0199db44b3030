import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focklab.focknorm import normalized_kernel
from focklab.funcrep import FnExpr, constant, monomial
from focklab.quad import (
    CutoffError,
    GrowthBound,
    QuadratureSpec,
    auto_center,
    cutoff_radius,
    fock_integral,
    gauss_legendre,
    plane_integral,
    radial_gaussian_integral,
)
from focklab.sharp import extremal_thm1

TIGHT = QuadratureSpec(target_tol=1e-16)


class TestGaussLegendre:
    def test_small_rules(self):
        one = gauss_legendre(1)
        np.testing.assert_array_equal(one.nodes, [0.0])
        np.testing.assert_array_equal(one.weights, [2.0])
        two = gauss_legendre(2)
        np.testing.assert_allclose(two.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], rtol=1e-15)
        np.testing.assert_allclose(two.weights, [1.0, 1.0], rtol=1e-15)
        three = gauss_legendre(3)
        np.testing.assert_allclose(three.nodes, [-math.sqrt(0.6), 0.0, math.sqrt(0.6)], atol=1e-15)
        np.testing.assert_allclose(three.weights, [5 / 9, 8 / 9, 5 / 9], rtol=1e-14)

    @pytest.mark.parametrize("n", [4, 17, 96, 192, 512])
    def test_structure(self, n):
        nw = gauss_legendre(n)
        assert np.all(np.diff(nw.nodes) > 0)
        assert np.all(nw.weights > 0)
        np.testing.assert_allclose(nw.weights.sum(), 2.0, rtol=1e-13)
        np.testing.assert_allclose(nw.nodes, -nw.nodes[::-1], atol=1e-15)

    @pytest.mark.parametrize("n", [5, 20, 64])
    def test_against_mpmath_roots(self, n):
        """Nodes are the correctly rounded roots of P_n (within 2 ulp of a 40-digit Newton refinement)."""
        mpmath.mp.dps = 40
        nw = gauss_legendre(n)
        for x in nw.nodes:
            r = mpmath.mpf(float(x))
            for _ in range(3):
                r -= mpmath.legendre(n, r) / mpmath.diff(lambda t: mpmath.legendre(n, t), r)
            assert abs(float(x - r)) <= 2 * np.spacing(max(abs(float(r)), 1e-300))
            # residual relative to the slope: absolute 1e-14 is below double resolution near +-1
            slope = abs(float(mpmath.diff(lambda t: mpmath.legendre(n, t), r)))
            assert abs(float(mpmath.legendre(n, float(x)))) <= 1e-14 * max(1.0, slope)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 60), st.data())
    def test_exact_for_degree_2n_minus_1(self, n, data):
        k = data.draw(st.integers(0, 2 * n - 1))
        nw = gauss_legendre(n)
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        np.testing.assert_allclose(np.sum(nw.weights * nw.nodes**k), exact, atol=1e-13)

    @pytest.mark.parametrize("bad", [0, 513, 2.5, True])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            gauss_legendre(bad)


class TestQuadratureSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(angular_nodes=3), dict(angular_nodes=2), dict(angular_nodes=65), dict(radial_nodes=7),
         dict(radial_nodes=600), dict(cutoff=0.0), dict(target_tol=0.0), dict(target_tol=0.1)],
    )
    def test_invariants(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)

    def test_doubled(self):
        s = QuadratureSpec(64, 300).doubled()
        assert (s.angular_nodes, s.radial_nodes) == (128, 512)


class TestRadialIntegral:
    @pytest.mark.parametrize("p, alpha", [(1.0, 0.5), (2.0, 1.0), (3.0, 2.0), (1.7, 1.3)])
    def test_constant(self, p, alpha):
        res = radial_gaussian_integral(lambda r: np.ones_like(r), p, alpha, TIGHT)
        np.testing.assert_allclose(res.value, 1 / (p * alpha), rtol=1e-13)
        assert res.error < 1e-11

    def test_r_squared(self):
        res = radial_gaussian_integral(lambda r: r**2, 2.0, 1.0, TIGHT, growth=GrowthBound(0.0, 2.0, 0.0))
        np.testing.assert_allclose(res.value, 0.5, rtol=1e-13)

    @pytest.mark.parametrize("n, p, alpha", [(2, 3.0, 1.0), (1, 1.0, 2.0), (4, 1.5, 0.5)])
    def test_monomial_moment(self, n, p, alpha):
        """p alpha int r^{np} e^{-p alpha r^2/2} r dr = 2^{np/2} (alpha p)^{-np/2} Gamma(1 + np/2)."""
        x = n * p
        res = radial_gaussian_integral(lambda r: r**x, p, alpha, TIGHT, growth=GrowthBound(0.0, x, 0.0))
        expected = 2 ** (x / 2) * (alpha * p) ** (-x / 2) * math.gamma(1 + x / 2)
        np.testing.assert_allclose(p * alpha * res.value, expected, rtol=1e-12)

    def test_cutoff_error(self):
        with pytest.raises(CutoffError):
            cutoff_radius(GrowthBound(0.0, 0.0, 1e6), 0.5, math.log(1e-12), 50.0)

    def test_explicit_cutoff(self):
        res = radial_gaussian_integral(lambda r: np.ones_like(r), 2.0, 1.0, QuadratureSpec(cutoff=1.0))
        np.testing.assert_allclose(res.value, (1 - math.exp(-1.0)) / 2, rtol=1e-13)
        np.testing.assert_allclose(res.tail, math.exp(-1.0) / 2, rtol=1.0)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.0, 3.0), st.floats(0.0, 3.0), st.floats(0.1, 4.0), st.floats(-5.0, 5.0))
    def test_tail_certificate_is_an_upper_bound(self, m, b, kappa, log_c):
        g = GrowthBound(log_c, m, b)
        R = cutoff_radius(g, kappa, math.log(1e-10), 1e3)
        tail = mpmath.quad(
            lambda r: mpmath.e**log_c * (1 + r) ** m * mpmath.e ** (b * r - kappa * r * r) * r, [R, mpmath.inf]
        )
        assert float(tail) <= 1e-10 * (1 + 1e-9)


class TestFockIntegral:
    @pytest.mark.parametrize("p, alpha", [(1.0, 0.5), (2.0, 1.0), (3.0, 2.0)])
    def test_constant_function(self, p, alpha):
        res = fock_integral(constant(1.0), p, alpha, TIGHT)
        np.testing.assert_allclose(res.value, 1.0, rtol=1e-13)

    def test_offset_only(self):
        res = fock_integral(FnExpr(), 2.0, 1.0, TIGHT, offset=1.0)
        np.testing.assert_allclose(res.value, 1.0, rtol=1e-13)

    def test_monomial_p2(self):
        np.testing.assert_allclose(fock_integral(monomial(1), 2.0, 1.0, TIGHT).value, 1.0, rtol=1e-13)

    @pytest.mark.parametrize("z, alpha, p", [(0.7 + 0.3j, 1.3, 1.7), (1.5j, 2.0, 3.0), (-1 + 1j, 0.5, 1.0)])
    def test_normalized_kernel(self, z, alpha, p):
        res = fock_integral(normalized_kernel(z, alpha), p, alpha, TIGHT)
        np.testing.assert_allclose(res.value, 1.0, rtol=1e-12)

    def test_auto_center(self):
        assert auto_center(extremal_thm1(2, 1.0, 1 + 1j), 1.0) == 1 + 1j
        np.testing.assert_allclose(auto_center(normalized_kernel(0.5 - 1j, 2.0), 2.0), 0.5 - 1j)
        assert auto_center(monomial(1) + normalized_kernel(1.0, 1.0), 1.0) == 0j
        assert auto_center(constant(2.0), 1.0) == 0j

    def test_error_estimate_covers_reference(self):
        """Independent mpmath polar integral for |w^3 + 1| with p = 1 (kinks at the cube roots of -1)."""
        f = monomial(3) + constant(1.0)
        res = fock_integral(f, 1.0, 1.0)
        mpmath.mp.dps = 20
        kinks = [0, mpmath.pi / 3, mpmath.pi, 5 * mpmath.pi / 3, 2 * mpmath.pi]

        def inner(r):
            return mpmath.quad(lambda t: abs((r * mpmath.expj(t)) ** 3 + 1), kinks)

        ref = float(1 / (2 * mpmath.pi) * mpmath.quad(lambda r: inner(r) * mpmath.e ** (-r * r / 2) * r, [0, 1, 12]))
        assert abs(res.value - ref) <= res.error + 1e-12 * ref


class TestPlaneIntegral:
    def test_probability_measure(self):
        res = plane_integral(lambda w: np.ones_like(w), 1.5, GrowthBound(), TIGHT)
        np.testing.assert_allclose(res.value, 1.0, rtol=1e-13)

    def test_second_moment(self):
        """(alpha/pi) int |w|^2 e^{-alpha|w|^2} dA = 1/alpha."""
        res = plane_integral(lambda w: np.abs(w) ** 2, 2.0, GrowthBound(0.0, 2.0, 0.0), TIGHT)
        np.testing.assert_allclose(res.value, 0.5, rtol=1e-13)
