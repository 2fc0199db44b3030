"""Fock norms, the reproducing kernel, and the basic pointwise growth bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .funcrep import (
    MAX_SERIES_LENGTH,
    CoeffSeries,
    FnExpr,
    KernelMonomial,
    evaluate,
    taylor_coeffs_at,
)
from .quad import DEFAULT_SPEC, GrowthBound, fock_integral, plane_integral, fnexpr_growth
from .report import VerificationReport, bound_tolerance
from .specfun import ln_gamma

__all__ = [
    "FockParams",
    "Estimate",
    "DivergenceError",
    "norm2_exact",
    "norm2_exact_squared",
    "norm_p",
    "monomial_norm",
    "closed_form_norm",
    "normalized_kernel",
    "reproducing_kernel",
    "reproducing_apply",
    "pointwise_bound_check",
]


class DivergenceError(ArithmeticError):
    """The certified coefficient tail does not converge within the series cap."""


@dataclass(frozen=True)
class FockParams:
    alpha: float
    p: float = 2.0

    def __post_init__(self):
        alpha, p = float(self.alpha), float(self.p)
        if not (math.isfinite(alpha) and alpha > 0):
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        if not (math.isfinite(p) and p >= 1):
            raise ValueError(f"p must lie in [1, inf), got {self.p!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class Estimate:
    """A computed value with an absolute error estimate."""

    value: float
    error: float = 0.0

    @property
    def rel_error(self):
        return self.error / self.value if self.value > 0 else (0.0 if self.error == 0 else math.inf)


@lru_cache(maxsize=32)
def _log_factorials(n):
    out = np.array([ln_gamma(j + 1.0) for j in range(n)])
    out.setflags(write=False)
    return out


def _series_log_terms(series, alpha):
    k = np.arange(len(series.coeffs))
    lg = _log_factorials(len(k))
    return 2.0 * series.log_abs() + lg - k * math.log(alpha)


def _logsumexp_fsum(logs):
    logs = logs[np.isfinite(logs)]
    if logs.size == 0:
        return -math.inf
    top = float(np.max(logs))
    return top + math.log(math.fsum(np.exp(logs - top)))


def _norm2_tail_log(f, alpha, m):
    """ln of a bound on sum_{k>=m} |a_k|^2 k!/alpha^k for the series of ``f`` about 0."""
    # |a_k| <= C_t L_t^k / (k - n_t)! per term; Cauchy-Schwarz across T terms.
    logs = []
    for t in f.terms:
        n = t.degree
        if m <= n:
            return math.inf
        if t.rate == 0:
            continue  # polynomial term: no coefficients beyond degree n
        L = max(1.0, abs(t.rate))
        log_c = (
            math.log(abs(t.amplitude))
            - (t.rate * t.root).real
            + n * math.log1p(abs(t.root))
        )
        ratio = (L * L / alpha) * (m + 1) / (m + 1 - n) ** 2
        if ratio >= 1.0:
            return math.inf
        log_first = (
            2 * log_c + 2 * m * math.log(L) + ln_gamma(m + 1.0) - 2 * ln_gamma(m - n + 1.0) - m * math.log(alpha)
        )
        logs.append(log_first - math.log1p(-ratio))
    if not logs:
        return -math.inf
    top = max(logs)
    return math.log(len(f.terms)) + top + math.log(sum(math.exp(v - top) for v in logs))


def _direct_sum(series, alpha):
    """Plain fsum of ``|a_k|^2 k! / alpha^k`` when every term is a normal double, else None."""
    if series.log_scale is not None or len(series.coeffs) > 171:
        return None
    terms = []
    for k, c in enumerate(series.coeffs):
        if c == 0:
            continue
        try:
            t = abs(complex(c)) ** 2 * (math.factorial(k) / alpha**k)
        except (OverflowError, ZeroDivisionError):
            return None
        if not (math.isfinite(t) and (t == 0 or t > 1e-290)):
            return None
        terms.append(t)
    return math.fsum(terms)


def norm2_exact_squared(f, alpha, rtol=1e-18):
    """``sum_k |a_k|^2 k! / alpha^k`` for coefficients about 0.

    Accepts a CoeffSeries centred at 0 (used as given) or an FnExpr, whose
    series length is doubled until the certified tail is below
    ``rtol * partial``.

    Raises
    ------
    DivergenceError
        If the tail certificate fails at the series cap.
    """
    alpha = float(alpha)
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if isinstance(f, CoeffSeries):
        if f.center != 0:
            raise ValueError("norm2_exact needs coefficients about the origin")
        direct = _direct_sum(f, alpha)
        if direct is not None:
            return direct
        return math.exp(_logsumexp_fsum(_series_log_terms(f, alpha)))
    f = f.simplify()
    if not f.terms:
        return 0.0
    m = max(32, 2 * max(t.degree for t in f.terms) + 8)
    while True:
        m = min(m, MAX_SERIES_LENGTH)
        series = taylor_coeffs_at(f, 0j, m)
        log_partial = _logsumexp_fsum(_series_log_terms(series, alpha))
        log_tail = _norm2_tail_log(f, alpha, m)
        if log_tail <= log_partial + math.log(rtol):
            direct = _direct_sum(series, alpha)
            return math.exp(log_partial) if direct is None else direct
        if m == MAX_SERIES_LENGTH:
            raise DivergenceError(
                f"coefficient tail not certified within {MAX_SERIES_LENGTH} terms"
            )
        m *= 2


def norm2_exact(f, alpha):
    """Exact F^2_alpha norm from Taylor coefficients about 0: ``sqrt(sum |a_k|^2 k!/alpha^k)``."""
    return math.sqrt(norm2_exact_squared(f, alpha))


def monomial_norm(n, params):
    """Closed-form ``||w^n||_{p,alpha}``."""
    p, a = params.p, params.alpha
    x = n * p / 2.0
    return math.exp((x * math.log(2.0 / (a * p)) + ln_gamma(1.0 + x)) / p)


def closed_form_norm(f, params):
    """Closed-form norm when ``f`` is one term whose envelope is centred on its root.

    ``A (w - c)^n e^{alpha conj(c) (w - c)}`` has norm ``|A| e^{-alpha|c|^2/2} ||w^n||``
    for every ``p``; a pure exponential ``A e^{lam w}`` is rewritten into that
    form.  Returns None when no closed form applies.
    """
    f = f.simplify()
    if len(f.terms) != 1:
        return 0.0 if not f.terms else None
    t = f.terms[0]
    a = params.alpha
    if t.degree == 0:
        c = t.rate.conjugate() / a
        log_amp = math.log(abs(t.amplitude)) + (t.rate * (c - t.root)).real
    elif abs(t.rate - a * t.root.conjugate()) <= 1e-15 * max(1.0, abs(t.rate)):
        c = t.root
        log_amp = math.log(abs(t.amplitude))
    else:
        return None
    return math.exp(log_amp - a * abs(c) ** 2 / 2.0) * monomial_norm(t.degree, params)


def norm_p(f, params, spec=DEFAULT_SPEC, center=None):
    """``||f||_{p,alpha}`` by polar quadrature, with propagated error estimate."""
    res = fock_integral(f, params.p, params.alpha, spec, center=center)
    if res.value <= 0:
        return Estimate(0.0, res.error ** (1.0 / params.p))
    value = res.value ** (1.0 / params.p)
    return Estimate(value, value * res.error / (params.p * res.value))


def reproducing_kernel(z, alpha):
    """``K_alpha(., z) = e^{alpha conj(z) w}``."""
    return FnExpr((KernelMonomial(1.0, 0j, 0, float(alpha) * complex(z).conjugate()),))


def normalized_kernel(z, alpha):
    """``k_z(w) = e^{alpha w conj(z) - alpha |z|^2 / 2}``, a unit vector in every F^p_alpha."""
    z = complex(z)
    alpha = float(alpha)
    return FnExpr((KernelMonomial(math.exp(-alpha * abs(z) ** 2 / 2.0), 0j, 0, alpha * z.conjugate()),))


def reproducing_apply(f, z, alpha, spec=DEFAULT_SPEC):
    """``int K_alpha(z, w) f(w) dmu_alpha(w)`` by polar quadrature (should equal ``f(z)``)."""
    z = complex(z)
    alpha = float(alpha)
    g = fnexpr_growth(f, 1.0)
    growth = GrowthBound(g.log_c, g.power, g.rate + alpha * abs(z))

    def func(w):
        return np.exp(alpha * z * np.conj(w)) * evaluate(f, w)

    res = plane_integral(func, alpha, growth, spec)
    return res


def pointwise_bound_check(f, z, params, spec=DEFAULT_SPEC):
    """Check ``|f(z)| <= e^{alpha |z|^2 / 2} ||f||_{p,alpha}``."""
    z = complex(z)
    lhs = abs(complex(evaluate(f, z)))
    nrm = norm_p(f, params, spec)
    rhs = math.exp(params.alpha * abs(z) ** 2 / 2.0) * nrm.value
    tol = bound_tolerance(nrm.rel_error)
    return VerificationReport.bound(
        "zhuhe",
        {"alpha": params.alpha, "p": params.p, "z": z},
        lhs,
        rhs,
        tol,
        oracles={"norm_error": nrm.error},
    )
