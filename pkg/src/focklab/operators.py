"""Differentiation and multiplication by ``z`` between F^2_alpha and F^2_beta.

Both operators send monomials to multiples of monomials, so in the
orthonormal bases ``e_k = z^k / c_k`` (``c_k^2 = k!/alpha^k``) and
``E_k = z^k / d_k`` (``d_k^2 = k!/beta^k``) they are weighted shifts and
their norms are suprema of single-coefficient ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .focknorm import norm2_exact_squared
from .funcrep import CoeffSeries, series_derivative
from .specfun import ln_gamma

__all__ = [
    "CoeffVector",
    "OperatorNorm",
    "PaperFormula",
    "log_basis_norms",
    "apply_D",
    "apply_M",
    "adjoint_D",
    "adjoint_M",
    "adjoint_M_printed",
    "inner",
    "dnorm2_exact",
    "dnorm2_paper",
    "mnorm2_exact",
    "mnorm2_claimed",
    "dbound_general_p",
    "dbound_pointwise_slack",
    "counterexample_partial",
    "to_series",
]


def _check_pair(alpha, beta):
    alpha, beta = float(alpha), float(beta)
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not beta > alpha:
        raise ValueError(f"need beta > alpha, got alpha={alpha}, beta={beta}")
    return alpha, beta


def log_basis_norms(weight, K):
    """``ln c_k = (ln k! - k ln weight) / 2`` for ``k = 0..K``."""
    k = np.arange(K + 1)
    lg = np.array([ln_gamma(j + 1.0) for j in k])
    return 0.5 * (lg - k * math.log(weight))


@dataclass(frozen=True)
class CoeffVector:
    """Coordinates in the orthonormal monomial basis of ``F^2_weight``."""

    weight: float
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "entries", np.asarray(self.entries, dtype=complex))

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.entries) ** 2)))


def _expect_space(v, weight, what):
    if v.weight != float(weight):
        raise ValueError(f"{what} must live in F^2_{weight}, got a vector of F^2_{v.weight}")


def inner(f, g):
    """``(f, g)`` for vectors of the same space: ``sum f_k conj(g_k)``."""
    if f.weight != g.weight:
        raise ValueError("inner product of vectors from different spaces")
    n = max(len(f.entries), len(g.entries))
    a = np.zeros(n, complex)
    b = np.zeros(n, complex)
    a[: len(f.entries)] = f.entries
    b[: len(g.entries)] = g.entries
    return complex(np.sum(a * np.conj(b)))


def apply_D(f, beta):
    """``(Df)_{k-1} = k (d_{k-1} / c_k) f_k``."""
    alpha, beta = _check_pair(f.weight, beta)
    K = len(f.entries) - 1
    if K < 1:
        return CoeffVector(beta, np.zeros(1, complex))
    lc, ld = log_basis_norms(alpha, K), log_basis_norms(beta, K)
    k = np.arange(1, K + 1)
    w = k * np.exp(ld[:-1] - lc[1:])
    return CoeffVector(beta, w * f.entries[1:])


def apply_M(f, beta):
    """``(Mf)_{k+1} = (d_{k+1} / c_k) f_k``."""
    alpha, beta = _check_pair(f.weight, beta)
    K = len(f.entries) - 1
    lc, ld = log_basis_norms(alpha, K + 1), log_basis_norms(beta, K + 1)
    out = np.zeros(K + 2, complex)
    out[1:] = np.exp(ld[1:] - lc[:-1]) * f.entries
    return CoeffVector(beta, out)


def adjoint_D(g, alpha, beta):
    """``(D* g)_k = k (d_{k-1} / c_k) g_{k-1}`` for ``k >= 1``, zero at ``k = 0``."""
    alpha, beta = _check_pair(alpha, beta)
    _expect_space(g, beta, "D* argument")
    K = len(g.entries)
    lc, ld = log_basis_norms(alpha, K), log_basis_norms(beta, K)
    k = np.arange(1, K + 1)
    out = np.zeros(K + 1, complex)
    out[1:] = k * np.exp(ld[:-1] - lc[1:]) * g.entries
    return CoeffVector(alpha, out)


def adjoint_M(g, alpha, beta):
    """``(M* g)_k = (d_{k+1} / c_k) g_{k+1}`` for ``k >= 0``."""
    alpha, beta = _check_pair(alpha, beta)
    _expect_space(g, beta, "M* argument")
    K = len(g.entries) - 1
    if K < 1:
        return CoeffVector(alpha, np.zeros(1, complex))
    lc, ld = log_basis_norms(alpha, K), log_basis_norms(beta, K)
    out = np.exp(ld[1:] - lc[:-1]) * g.entries[1:]
    return CoeffVector(alpha, out)


def adjoint_M_printed(g, alpha, beta):
    """Index pattern ``(d_k / c_{k-1}) g_k e_k`` (k >= 1), kept for comparison only.

    It does not satisfy ``(Mf, g) = (f, M* g)``; :func:`adjoint_M` does.
    """
    alpha, beta = _check_pair(alpha, beta)
    _expect_space(g, beta, "M* argument")
    K = len(g.entries) - 1
    out = np.zeros(K + 1, complex)
    if K >= 1:
        lc, ld = log_basis_norms(alpha, K), log_basis_norms(beta, K)
        out[1:] = np.exp(ld[1:] - lc[:-1]) * g.entries[1:]
    return CoeffVector(alpha, out)


@dataclass(frozen=True)
class OperatorNorm:
    """Squared operator norm and the basis index attaining it."""

    value: float
    argmax: int


@dataclass(frozen=True)
class PaperFormula:
    value: float
    m: int
    degenerate: bool


def _sup_k_gamma(gamma):
    """``max_{k >= 1} k gamma^{-k}`` with the smallest maximizing ``k``."""
    x = 1.0 / math.log(gamma)
    candidates = sorted({1, max(1, math.floor(x)), max(1, math.ceil(x))})
    best_k, best = None, -math.inf
    for k in candidates:
        v = k * gamma ** (-k)
        if v > best * (1 + 1e-15):
            best_k, best = k, v
    return best, best_k


def dnorm2_exact(alpha, beta):
    """``||D||^2 = sup_{k>=1} k beta gamma^{-k}``, ``gamma = beta/alpha``; attained at ``z^k``."""
    alpha, beta = _check_pair(alpha, beta)
    best, k = _sup_k_gamma(beta / alpha)
    return OperatorNorm(beta * best, k)


def mnorm2_exact(alpha, beta):
    """``||M||^2 = (1/alpha) sup_{j>=1} j gamma^{-j}``; attained at ``z^{j-1}`` (argmax is ``j - 1``)."""
    alpha, beta = _check_pair(alpha, beta)
    best, j = _sup_k_gamma(beta / alpha)
    return OperatorNorm(best / alpha, j - 1)


def dnorm2_paper(alpha, beta):
    """``max{gamma^{-1}, gamma^{-m} m}`` with ``m = floor(1 / (e ln gamma))``, evaluated as printed.

    ``m = 0`` makes the second entry vanish; that case is flagged degenerate.
    """
    alpha, beta = _check_pair(alpha, beta)
    gamma = beta / alpha
    m = math.floor(1.0 / (math.e * math.log(gamma)))
    second = m * gamma ** (-m) if m > 0 else 0.0
    return PaperFormula(max(1.0 / gamma, second), m, m == 0)


def mnorm2_claimed(alpha, beta):
    """``alpha * ||D||^2`` using the exact ``||D||^2`` (the stated relation, for comparison)."""
    alpha, beta = _check_pair(alpha, beta)
    return alpha * dnorm2_exact(alpha, beta).value


def dbound_general_p(alpha, beta, p=2.0):
    """``e^{alpha beta / (2 beta - 2 alpha)}``: bound on ``||D||`` from F^p_alpha to F^p_beta (any p)."""
    alpha, beta = _check_pair(alpha, beta)
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return math.exp(alpha * beta / (2.0 * beta - 2.0 * alpha))


def dbound_pointwise_slack(alpha, beta, z, w):
    """Log-slack of ``e^{-beta|z|^2/2} <= c e^{-alpha|z+w|^2/2}`` (nonnegative when it holds)."""
    alpha, beta = _check_pair(alpha, beta)
    z = np.asarray(z, complex)
    w = np.asarray(w, complex)
    log_c = alpha * beta / (2.0 * (beta - alpha))
    return log_c - alpha * np.abs(z + w) ** 2 / 2.0 + beta * np.abs(z) ** 2 / 2.0


def to_series(v):
    """Monomial coefficients ``a_k = v_k / c_k`` of an orthonormal-coordinate vector, log-scaled."""
    K = len(v.entries) - 1
    return CoeffSeries(0j, v.entries, 0.0, 1.0, -log_basis_norms(v.weight, K))


def counterexample_partial(N):
    """``(||f_N||^2_{2,1}, ||f_N'||^2_{2,1})`` for ``f_N = sum_{k=2}^N z^k / sqrt(k (k-1) k!)``.

    Closed forms ``1 - 1/N`` and ``H_{N-1}``; the second grows without bound.
    """
    if int(N) != N or N < 2:
        raise ValueError(f"N must be an integer >= 2, got {N!r}")
    N = int(N)
    k = np.arange(N + 1)
    coeffs = np.zeros(N + 1, complex)
    coeffs[2:] = 1.0
    log_scale = np.zeros(N + 1)
    kk = k[2:].astype(float)
    lg = np.array([ln_gamma(j + 1.0) for j in kk])
    log_scale[2:] = -0.5 * np.log(kk * (kk - 1.0)) - 0.5 * lg
    series = CoeffSeries(0j, coeffs, 0.0, 1.0, log_scale)
    return norm2_exact_squared(series, 1.0), norm2_exact_squared(series_derivative(series), 1.0)
