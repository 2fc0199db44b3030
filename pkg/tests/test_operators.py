import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focklab.focknorm import norm2_exact_squared
from focklab.operators import (
    CoeffVector,
    adjoint_D,
    adjoint_M,
    adjoint_M_printed,
    apply_D,
    apply_M,
    counterexample_partial,
    dbound_general_p,
    dbound_pointwise_slack,
    dnorm2_exact,
    dnorm2_paper,
    inner,
    log_basis_norms,
    mnorm2_claimed,
    mnorm2_exact,
    to_series,
)

pairs = st.tuples(st.floats(0.2, 3.0), st.floats(1.01, 6.0)).map(lambda t: (t[0], t[0] * t[1]))


def _random_vector(rng, weight, size):
    return CoeffVector(weight, rng.normal(size=size) + 1j * rng.normal(size=size))


def _brute_sup(alpha, beta, K=1000):
    """max over 1 <= k <= K of ||D z^k||^2 / ||z^k||^2 = k^2 (k-1)!/beta^{k-1} / (k!/alpha^k)."""
    k = np.arange(1, K + 1)
    return float(np.max(np.exp(np.log(k) + math.log(beta) - k * math.log(beta / alpha))))


class TestBasis:
    def test_log_norms(self):
        np.testing.assert_allclose(np.exp(2 * log_basis_norms(2.0, 4)), [1, 0.5, 0.5, 0.75, 1.5], rtol=1e-14)

    def test_to_series_round_trip(self):
        v = CoeffVector(1.5, [1.0, 2.0, -1j])
        np.testing.assert_allclose(norm2_exact_squared(to_series(v), 1.5), v.norm() ** 2, rtol=1e-14)


class TestNorms:
    def test_examples(self):
        d = dnorm2_exact(1.0, 2.0)
        assert (d.value, d.argmax) == (1.0, 1)
        m = mnorm2_exact(1.0, 2.0)
        assert (m.value, m.argmax) == (0.5, 0)
        assert mnorm2_exact(2.0, 4.0).value == 0.25
        # gamma = 1.1: k 1.1^{-k} peaks at k = 10 (1/ln 1.1 = 10.49)
        d = dnorm2_exact(1.0, 1.1)
        assert d.argmax == 10
        np.testing.assert_allclose(d.value, 1.1 * 10 * 1.1**-10, rtol=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(pairs)
    def test_matches_brute_force(self, pair):
        alpha, beta = pair
        K = max(1000, int(10 / math.log(beta / alpha)))
        np.testing.assert_allclose(dnorm2_exact(alpha, beta).value, _brute_sup(alpha, beta, K), rtol=1e-13)

    @settings(max_examples=40, deadline=None)
    @given(pairs)
    def test_attaining_monomial(self, pair):
        alpha, beta = pair
        d = dnorm2_exact(alpha, beta)
        e = np.zeros(d.argmax + 1, complex)
        e[d.argmax] = 1.0
        np.testing.assert_allclose(apply_D(CoeffVector(alpha, e), beta).norm() ** 2, d.value, rtol=1e-12)
        m = mnorm2_exact(alpha, beta)
        e = np.zeros(m.argmax + 1, complex)
        e[m.argmax] = 1.0
        np.testing.assert_allclose(apply_M(CoeffVector(alpha, e), beta).norm() ** 2, m.value, rtol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(pairs, st.integers(0, 2**32 - 1))
    def test_random_vectors_bounded(self, pair, seed):
        alpha, beta = pair
        v = _random_vector(np.random.default_rng(seed), alpha, 60)
        assert apply_D(v, beta).norm() ** 2 <= dnorm2_exact(alpha, beta).value * v.norm() ** 2 * (1 + 1e-12)
        assert apply_M(v, beta).norm() ** 2 <= mnorm2_exact(alpha, beta).value * v.norm() ** 2 * (1 + 1e-12)

    def test_printed_formula_table(self):
        for gamma in (2.0, math.e):
            f = dnorm2_paper(1.0, gamma)
            assert f.m == 0 and f.degenerate
            np.testing.assert_allclose(f.value, 1 / gamma)
        f = dnorm2_paper(1.0, 1.01)
        assert f.m == 36 and not f.degenerate
        np.testing.assert_allclose(f.value, 36 * 1.01**-36, rtol=1e-14)
        # the printed max omits the factor beta and so differs from the exact value at gamma = 2
        assert dnorm2_paper(1.0, 2.0).value != dnorm2_exact(1.0, 2.0).value

    def test_claimed_relation(self):
        np.testing.assert_allclose(mnorm2_claimed(1.0, 2.0), 1.0)
        assert mnorm2_claimed(1.0, 2.0) != mnorm2_exact(1.0, 2.0).value

    def test_pair_validation(self):
        with pytest.raises(ValueError):
            dnorm2_exact(1.0, 1.0)
        with pytest.raises(ValueError):
            mnorm2_exact(0.0, 1.0)
        with pytest.raises(ValueError):
            dbound_general_p(1.0, 2.0, 0.5)


class TestAdjoints:
    def test_basis_examples(self):
        e0 = CoeffVector(2.0, [1.0])
        np.testing.assert_allclose(adjoint_D(e0, 1.0, 2.0).entries, [0.0, 1.0])
        e1 = CoeffVector(2.0, [0.0, 1.0])
        np.testing.assert_allclose(adjoint_M(e1, 1.0, 2.0).entries, [math.sqrt(0.5)])
        np.testing.assert_allclose(adjoint_M_printed(e1, 1.0, 2.0).entries, [0.0, math.sqrt(0.5)])
        assert adjoint_M(e0, 1.0, 2.0).norm() == 0.0
        assert adjoint_D(CoeffVector(2.0, [0.0, 0.0]), 1.0, 2.0).norm() == 0.0

    @settings(max_examples=50, deadline=None)
    @given(pairs, st.integers(0, 2**32 - 1), st.integers(1, 40))
    def test_identities(self, pair, seed, size):
        alpha, beta = pair
        rng = np.random.default_rng(seed)
        f = _random_vector(rng, alpha, size)
        g = _random_vector(rng, beta, size + 1)
        for T, Tstar in ((apply_D, adjoint_D), (apply_M, adjoint_M)):
            lhs = inner(T(f, beta), g)
            rhs = inner(f, Tstar(g, alpha, beta))
            assert abs(lhs - rhs) <= 1e-12 * max(1.0, T(f, beta).norm() * g.norm())

    def test_printed_index_pattern_fails(self):
        f = CoeffVector(1.0, [1.0])
        g = CoeffVector(2.0, [0.0, 1.0])
        assert abs(inner(apply_M(f, 2.0), g) - inner(f, adjoint_M_printed(g, 1.0, 2.0))) > 0.5

    def test_space_mismatch(self):
        with pytest.raises(ValueError):
            adjoint_D(CoeffVector(3.0, [1.0]), 1.0, 2.0)
        with pytest.raises(ValueError):
            adjoint_M(CoeffVector(1.0, [1.0]), 1.0, 2.0)
        with pytest.raises(ValueError):
            inner(CoeffVector(1.0, [1.0]), CoeffVector(2.0, [1.0]))


class TestGeneralP:
    def test_values(self):
        np.testing.assert_allclose(dbound_general_p(1.0, 2.0), math.e, rtol=1e-15)
        np.testing.assert_allclose(dbound_general_p(1.0, 1e9, 3.0), math.exp(0.5), rtol=1e-8)

    def test_dominates_hilbert_norm(self):
        for alpha, beta in ((1.0, 2.0), (1.0, 1.1), (0.5, 3.0)):
            assert dnorm2_exact(alpha, beta).value <= dbound_general_p(alpha, beta) ** 2

    @settings(max_examples=50, deadline=None)
    @given(pairs, st.floats(-3, 3), st.floats(-3, 3), st.floats(0, 2 * math.pi))
    def test_pointwise_slack_nonnegative_on_unit_circle(self, pair, x, y, theta):
        alpha, beta = pair
        slack = dbound_pointwise_slack(alpha, beta, complex(x, y), complex(math.cos(theta), math.sin(theta)))
        assert slack >= -1e-9 * max(1.0, beta * (x * x + y * y))


class TestCounterexample:
    @pytest.mark.parametrize("N", [2, 3, 10, 57])
    def test_exact_rationals(self, N):
        first, second = counterexample_partial(N)
        harmonic = sum(Fraction(1, k) for k in range(1, N))
        np.testing.assert_allclose(first, float(1 - Fraction(1, N)), rtol=1e-14)
        np.testing.assert_allclose(second, float(harmonic), rtol=1e-14)

    def test_divergence(self):
        first, second = counterexample_partial(10_000)
        np.testing.assert_allclose(first, 1 - 1e-4, rtol=1e-12)
        np.testing.assert_allclose(second, math.fsum(1 / k for k in range(1, 10_000)), rtol=1e-12)
        assert second > 9 and first < 1

    @pytest.mark.parametrize("bad", [1, 2.5, 0])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            counterexample_partial(bad)
