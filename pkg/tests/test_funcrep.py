import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focklab.focknorm import normalized_kernel
from focklab.funcrep import (
    CoeffSeries,
    FnExpr,
    KernelMonomial,
    UnsupportedOrderError,
    constant,
    derivative,
    evaluate,
    monomial,
    nth_derivative_at,
    scale,
    series_derivative,
    shift_argument,
    subtract_taylor,
    taylor_coeffs_at,
)
from focklab.sharp import extremal_thm1, random_fnexpr

small = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False)
points = st.builds(complex, small, small)


@st.composite
def fnexprs(draw, max_terms=4):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_fnexpr(np.random.default_rng(seed), max_terms=max_terms)


def _mp_series(f, w):
    w = mpmath.mpc(w)
    total = mpmath.mpc(0)
    for t in f.terms:
        d = w - mpmath.mpc(t.root)
        total += mpmath.mpc(t.amplitude) * d**t.degree * mpmath.exp(mpmath.mpc(t.rate) * d)
    return total


def _mp_eval(f, w):
    return complex(_mp_series(f, w))


class TestKernelMonomial:
    @pytest.mark.parametrize(
        "kwargs",
        [dict(amplitude=math.nan), dict(amplitude=1, root=complex(math.inf, 0)), dict(amplitude=1, degree=-1),
         dict(amplitude=1, degree=1.5), dict(amplitude=1, rate=complex(0, math.nan))],
    )
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            KernelMonomial(**kwargs)

    def test_fnexpr_rejects_foreign_terms(self):
        with pytest.raises(TypeError):
            FnExpr((1.0,))


class TestEvaluate:
    def test_zero_function(self):
        assert evaluate(FnExpr(), 3 + 4j) == 0

    def test_kernel_value(self):
        np.testing.assert_allclose(evaluate(normalized_kernel(1.0, 1.0), 1.0), math.exp(0.5), rtol=1e-15)

    def test_extremal_vanishes_at_root(self):
        assert evaluate(extremal_thm1(2, 1.3, 0.4 - 0.2j), 0.4 - 0.2j) == 0

    def test_vectorized(self):
        f = monomial(2) + constant(1.0)
        w = np.array([0, 1j, 2])
        np.testing.assert_allclose(evaluate(f, w), w**2 + 1)

    def test_large_exponent_uses_log_space(self):
        # exponent 705 is past the direct-evaluation threshold; the value is e^5
        f = FnExpr((KernelMonomial(math.exp(-700.0), 0j, 0, 1.0),))
        np.testing.assert_allclose(evaluate(f, 705.0), math.exp(5.0), rtol=1e-12)
        assert evaluate(FnExpr((KernelMonomial(0.0, 0j, 0, 1.0),)), 800.0) == 0
        with pytest.raises(OverflowError):
            evaluate(FnExpr((KernelMonomial(1.0, 0j, 0, 1.0),)), 800.0)

    @settings(max_examples=50, deadline=None)
    @given(fnexprs(), points)
    def test_matches_mpmath(self, f, w):
        ref = _mp_eval(f, w)
        assert abs(complex(evaluate(f, w)) - ref) <= 1e-13 * (1 + sum(abs(_mp_eval(FnExpr((t,)), w)) for t in f.terms))


class TestArithmetic:
    @settings(max_examples=40, deadline=None)
    @given(fnexprs(), fnexprs(), points)
    def test_sum_and_difference(self, f, g, w):
        fw, gw = complex(evaluate(f, w)), complex(evaluate(g, w))
        np.testing.assert_allclose(complex(evaluate(f + g, w)), fw + gw, atol=1e-12)
        np.testing.assert_allclose(complex(evaluate(f - g, w)), fw - gw, atol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(fnexprs(), points)
    def test_simplify_preserves_values(self, f, w):
        doubled = f + f
        np.testing.assert_allclose(evaluate(doubled.simplify(), w), evaluate(doubled, w), atol=1e-12)
        assert len(doubled.simplify()) <= len(f)

    def test_simplify_cancels(self):
        assert (monomial(3) - monomial(3)).simplify().terms == ()

    def test_scale_examples(self):
        f = monomial(1)
        assert scale(f, 1) == f
        assert scale(f, 0).terms == ()
        np.testing.assert_allclose(evaluate(scale(f, 2j), 3.0), 6j)


class TestDerivative:
    def test_linear_factor(self):
        f = FnExpr((KernelMonomial(2.5, 1 + 1j, 1, 0j),))
        d = derivative(f)
        assert d.terms == (KernelMonomial(2.5, 1 + 1j, 0, 0j),)

    def test_exponential(self):
        lam = 0.3 - 0.8j
        d = derivative(FnExpr((KernelMonomial(1.0, 0j, 0, lam),)))
        np.testing.assert_allclose(evaluate(d, 0.7), lam * cmath.exp(lam * 0.7))

    def test_product_rule_at_root(self):
        z, lam = 0.4 + 0.2j, -1.1 + 0.5j
        f = FnExpr((KernelMonomial(1.0, z, 1, lam),))
        np.testing.assert_allclose(evaluate(derivative(f), z), 1.0)
        h = 1e-6
        fd = (evaluate(f, z + h) - evaluate(f, z - h)) / (2 * h)
        np.testing.assert_allclose(fd, 1.0, atol=1e-9)

    def test_nth_derivative_examples(self):
        np.testing.assert_allclose(nth_derivative_at(monomial(3), 0, 3), 6.0)
        z, alpha = 0.6 - 0.9j, 1.4
        np.testing.assert_allclose(
            nth_derivative_at(normalized_kernel(z, alpha), z, 0), math.exp(alpha * abs(z) ** 2 / 2), rtol=1e-14
        )

    @settings(max_examples=30, deadline=None)
    @given(fnexprs(max_terms=3), points, st.integers(0, 5))
    def test_against_mpmath_diff(self, f, z, n):
        ref = complex(mpmath.diff(lambda w: _mp_series(f, w), z, n))
        got = nth_derivative_at(f, z, n)
        scale_ = 1 + sum(abs(t.amplitude) for t in f.terms) * 10.0**n
        assert abs(got - ref) <= 1e-10 * scale_

    def test_order_cap(self):
        with pytest.raises(UnsupportedOrderError):
            nth_derivative_at(monomial(2), 0, 13)
        with pytest.raises(ValueError):
            nth_derivative_at(monomial(2), 0, -1)


class TestTaylor:
    def test_binomial(self):
        s = taylor_coeffs_at(monomial(2), 1.0, 3)
        np.testing.assert_allclose(s.coeffs, [1, 2, 1])
        assert s.tail_bound == 0.0

    def test_kernel_series(self):
        alpha, z = 1.3, 0.5 - 0.7j
        lam = alpha * z.conjugate()
        s = taylor_coeffs_at(FnExpr((KernelMonomial(1.0, 0j, 0, lam),)), 0j, 20)
        np.testing.assert_allclose(s.coeffs, [lam**k / math.factorial(k) for k in range(20)], rtol=1e-14)

    def test_extremal_has_zero_of_order_n(self):
        for n in range(1, 6):
            s = taylor_coeffs_at(extremal_thm1(n, 1.0, 0.7 + 0.3j), 0.7 + 0.3j, n)
            np.testing.assert_array_equal(s.coeffs, 0)

    @settings(max_examples=40, deadline=None)
    @given(fnexprs(), points, st.integers(4, 30), st.floats(0.1, 1.5))
    def test_tail_bound_certifies_truncation(self, f, z, m, radius):
        s = taylor_coeffs_at(f, z, m, radius)
        for theta in np.linspace(0, 2 * np.pi, 7):
            w = z + radius * cmath.exp(1j * theta)
            err = abs(complex(s.evaluate(w)) - complex(evaluate(f, w)))
            assert err <= s.tail_bound * (1 + 1e-9) + 1e-12 * (1 + abs(complex(evaluate(f, w))))

    def test_length_validation(self):
        with pytest.raises(ValueError):
            taylor_coeffs_at(monomial(1), 0, 0)
        with pytest.raises(ValueError):
            taylor_coeffs_at(monomial(1), 0, 501)


class TestSubtractTaylor:
    def test_n0_identity(self):
        f = monomial(2) + constant(3)
        assert subtract_taylor(f, 1.0, 0) is f

    def test_extremal_unchanged(self):
        f = extremal_thm1(3, 1.0, 1 + 1j)
        assert subtract_taylor(f, 1 + 1j, 3).simplify() == f.simplify()

    def test_exponential_minus_one(self):
        f = FnExpr((KernelMonomial(1.0, 0j, 0, 1.0),))
        g = subtract_taylor(f, 0j, 1)
        assert abs(complex(evaluate(g, 0.0))) == 0.0
        np.testing.assert_allclose(evaluate(g, 0.8), math.exp(0.8) - 1)

    @settings(max_examples=30, deadline=None)
    @given(fnexprs(), points, st.integers(1, 6))
    def test_remainder_vanishes_to_order_n(self, f, z, n):
        g = subtract_taylor(f, z, n)
        scale_ = 1 + max(abs(nth_derivative_at(f, z, k)) for k in range(n + 1))
        for k in range(n):
            assert abs(nth_derivative_at(g, z, k)) <= 1e-12 * scale_
        np.testing.assert_allclose(nth_derivative_at(g, z, n), nth_derivative_at(f, z, n), atol=1e-12 * scale_)


class TestShift:
    def test_identity(self):
        f = monomial(2)
        assert shift_argument(f, 0) is f

    def test_examples(self):
        np.testing.assert_allclose(evaluate(shift_argument(monomial(2), 1.0), 1.0), 4.0)
        g = shift_argument(FnExpr((KernelMonomial(1.0, 0j, 0, 1.0),)), 2.0)
        rng = np.random.default_rng(3)
        w = rng.normal(size=20) + 1j * rng.normal(size=20)
        np.testing.assert_allclose(evaluate(g, w), math.exp(2.0) * np.exp(w), rtol=1e-13)

    @settings(max_examples=40, deadline=None)
    @given(fnexprs(), points, points)
    def test_translation(self, f, z, w):
        np.testing.assert_allclose(evaluate(shift_argument(f, z), w), evaluate(f, z + w), atol=1e-12)


class TestCoeffSeries:
    def test_validation(self):
        with pytest.raises(ValueError):
            CoeffSeries(0j, [1.0, math.nan])
        with pytest.raises(ValueError):
            CoeffSeries(0j, [1.0], tail_bound=-1.0)
        with pytest.raises(ValueError):
            CoeffSeries(0j, [1.0, 2.0], log_scale=[0.0])

    def test_log_scale_values(self):
        s = CoeffSeries(0j, [1.0, 2.0], log_scale=[0.0, math.log(3.0)])
        np.testing.assert_allclose(s.values(), [1.0, 6.0])
        np.testing.assert_allclose(s.evaluate(2.0), 13.0)

    def test_series_derivative(self):
        s = CoeffSeries(0j, [5.0, 1.0, 1.0, 1.0])
        d = series_derivative(s)
        np.testing.assert_allclose(d.values(), [1.0, 2.0, 3.0])
        assert d.tail_bound == 0.0
        truncated = CoeffSeries(0j, [1.0, 1.0], tail_bound=0.1)
        assert series_derivative(truncated).tail_bound == math.inf
        scaled = series_derivative(CoeffSeries(0j, [0.0, 1.0, 1.0], log_scale=[0.0, 0.0, 0.0]))
        np.testing.assert_allclose(scaled.values(), [1.0, 2.0])
