"""Sharp derivative constants, their extremal functions, and the checks built on them."""

from __future__ import annotations

import math

import numpy as np

from .focknorm import (
    FockParams,
    closed_form_norm,
    norm2_exact,
    norm_p,
)
from .funcrep import (
    FnExpr,
    KernelMonomial,
    nth_derivative_at,
    shift_argument,
    subtract_taylor,
)
from .quad import DEFAULT_SPEC, fock_integral
from .report import VerificationReport, bound_tolerance
from .specfun import ln_gamma, log_kummer_1f1_n1

__all__ = [
    "ConstantOverflowError",
    "log_derivative_constant",
    "constant_thm1",
    "constant_thm2",
    "constant_nulla",
    "constant_dera1",
    "zhu_constant",
    "zhu_ratio",
    "extremal_thm1",
    "extremal_thm2",
    "extremal_zhuhe",
    "verify_thm1",
    "verify_dera1",
    "verify_thm2",
    "verify_nulla",
    "example_function",
    "example_I",
    "example_Iprime0",
    "random_fnexpr",
]

EXACT_TOL = 1e-10


class ConstantOverflowError(OverflowError):
    """The constant exceeds the double range; ``log_value`` holds its logarithm."""

    def __init__(self, log_value):
        super().__init__(f"constant overflows (log value {log_value!r})")
        self.log_value = log_value


def _finish(log_value, log):
    if log:
        return log_value
    if log_value > 709.78:
        raise ConstantOverflowError(log_value)
    return math.exp(log_value)


def log_derivative_constant(n, params):
    """ln of ``(alpha p / 2)^{n/2} n! / Gamma(1 + n p / 2)^{1/p}``."""
    if n < 0 or int(n) != n:
        raise ValueError(f"n must be a nonnegative integer, got {n!r}")
    p, a = params.p, params.alpha
    return 0.5 * n * math.log(a * p / 2.0) + ln_gamma(n + 1.0) - ln_gamma(1.0 + n * p / 2.0) / p


def constant_thm1(n, params, abs_z, log=False):
    """``c_n(|z|)``: sharp constant for ``|f^(n)(z)|`` against ``||f - T_n(f, z)||_{p,alpha}``."""
    return _finish(log_derivative_constant(n, params) + params.alpha * float(abs_z) ** 2 / 2.0, log)


def constant_nulla(n, params, log=False):
    """Sharp constant for ``|f^(n)(0)|`` against ``||f||_{p,alpha}``."""
    return _finish(log_derivative_constant(n, params) + 0.0, log)


def constant_thm2(n, alpha, abs_z, log=False):
    """``sqrt(alpha^n n! 1F1(1 + n; 1; alpha |z|^2))`` (Hilbert case)."""
    alpha = float(alpha)
    x = alpha * float(abs_z) ** 2
    lv = 0.5 * (n * math.log(alpha) + ln_gamma(n + 1.0) + log_kummer_1f1_n1(n, x))
    return _finish(lv, log)


def constant_dera1(params, abs_z):
    """First-derivative bound against ``||f||`` obtained by combining the two estimates."""
    a = params.alpha
    base = math.exp(log_derivative_constant(1, params))
    return base * (math.exp(a * abs_z**2 / 2.0) + math.exp(a * abs_z**2))


def zhu_constant(n, alpha):
    """``(alpha e / n)^{n/2} n!`` (1 for n = 0)."""
    if n == 0:
        return 1.0
    return math.exp(0.5 * n * math.log(alpha * math.e / n) + ln_gamma(n + 1.0))


def zhu_ratio(n, params):
    """``(2e)^{n/2} Gamma(1 + n p / 2)^{1/p} / (n p)^{n/2}``: classical over sharp constant."""
    if n == 0:
        return 1.0
    p = params.p
    return math.exp(0.5 * n * math.log(2.0 * math.e) + ln_gamma(1.0 + n * p / 2.0) / p - 0.5 * n * math.log(n * p))


def extremal_thm1(n, alpha, z):
    """``(w - z)^n e^{alpha (w - z) conj(z)}``: attains equality in the Taylor-remainder estimate."""
    z = complex(z)
    return FnExpr((KernelMonomial(1.0, z, n, float(alpha) * z.conjugate()),))


def extremal_thm2(n, alpha, z):
    """``alpha^n e^{alpha conj(z) w} w^n``."""
    alpha = float(alpha)
    return FnExpr((KernelMonomial(alpha**n, 0j, n, alpha * complex(z).conjugate()),))


def extremal_zhuhe(z, alpha, theta=0.0):
    """``e^{alpha w conj(z) - alpha |z|^2 / 2 + i theta}``; the phase lives in the amplitude."""
    z = complex(z)
    amp = math.exp(-float(alpha) * abs(z) ** 2 / 2.0) * complex(math.cos(theta), math.sin(theta))
    return FnExpr((KernelMonomial(amp, 0j, 0, float(alpha) * z.conjugate()),))


def _norm_with_method(f, params, spec, method):
    """Norm of ``f`` by the requested route; returns (value, rel_error, route)."""
    if method == "auto":
        method = "exact" if params.p == 2 else "quadrature"
    if method == "exact":
        if params.p != 2:
            raise ValueError("the exact coefficient route needs p = 2")
        return norm2_exact(f, params.alpha), 0.0, "exact"
    if method == "closed":
        v = closed_form_norm(f, params)
        if v is None:
            raise ValueError("no closed-form norm for this function")
        return v, 0.0, "closed"
    if method == "quadrature":
        est = norm_p(f, params, spec)
        return est.value, est.rel_error, "quadrature"
    raise ValueError(f"unknown norm method {method!r}")


def _inputs(n, params, z, f=None, **extra):
    out = {"n": int(n), "alpha": params.alpha, "p": params.p, "z": complex(z)}
    if f is not None:
        from .language import format_function

        out["f"] = format_function(f)
    out.update(extra)
    return out


def verify_thm1(f, n, params, z, spec=DEFAULT_SPEC, method="auto"):
    """Check ``|f^(n)(z)| <= c_n(|z|) ||f - T_n(f, z)||_{p,alpha}``.

    For ``n = 1`` the combined bound against ``||f||`` is evaluated too and its
    ratio recorded under ``oracles['dera1_ratio']``.
    """
    z = complex(z)
    lhs = abs(nth_derivative_at(f, z, n))
    rem = subtract_taylor(f, z, n)
    nrm, rel, route = _norm_with_method(rem, params, spec, method)
    rhs = constant_thm1(n, params, abs(z)) * nrm
    tol = EXACT_TOL if route != "quadrature" else bound_tolerance(rel)
    oracles = {"remainder_norm": nrm, "norm_rel_error": rel, "constant": constant_thm1(n, params, abs(z))}
    if n == 1:
        full, rel_full, _ = _norm_with_method(f, params, spec, route)
        d1 = constant_dera1(params, abs(z)) * full
        oracles["dera1_rhs"] = d1
        oracles["dera1_ratio"] = lhs / d1 if d1 > 0 else 0.0
    return VerificationReport.bound("thm1", _inputs(n, params, z, f), lhs, rhs, tol,
                                    f"route={route}", oracles)


def verify_dera1(f, params, z, spec=DEFAULT_SPEC, method="auto"):
    """Check ``|f'(z)| <= K (e^{alpha|z|^2/2} + e^{alpha|z|^2}) ||f||_{p,alpha}``."""
    z = complex(z)
    lhs = abs(nth_derivative_at(f, z, 1))
    nrm, rel, route = _norm_with_method(f, params, spec, method)
    rhs = constant_dera1(params, abs(z)) * nrm
    tol = EXACT_TOL if route != "quadrature" else bound_tolerance(rel)
    return VerificationReport.bound("dera1", _inputs(1, params, z, f), lhs, rhs, tol, f"route={route}")


def verify_thm2(f, n, alpha, z, rng=None, perturbations=20):
    """Check ``|f^(n)(z)| <= constant_thm2 * ||f - T_n(f, 0)||_{2,alpha}`` on the exact route.

    Also perturbs ``T_n(f, 0)`` by ``perturbations`` random polynomials of
    degree below ``n``; none may give a smaller distance.
    """
    z = complex(z)
    params = FockParams(alpha, 2.0)
    rng = np.random.default_rng(0) if rng is None else rng
    lhs = abs(nth_derivative_at(f, z, n))
    rem = subtract_taylor(f, 0j, n)
    nrm = norm2_exact(rem, alpha)
    const = constant_thm2(n, alpha, abs(z))
    rhs = const * nrm
    worst = math.inf
    if n >= 1:
        for _ in range(perturbations):
            coeffs = rng.normal(size=n) + 1j * rng.normal(size=n)
            coeffs *= 10.0 ** rng.uniform(-6, 0)
            q = FnExpr(tuple(KernelMonomial(c, 0j, k, 0j) for k, c in enumerate(coeffs)))
            worst = min(worst, norm2_exact(rem - q, alpha) / nrm if nrm > 0 else math.inf)
    minimal = worst >= 1.0 - 1e-12
    report = VerificationReport.bound(
        "thm2", _inputs(n, params, z, f), lhs, rhs, EXACT_TOL, "route=exact",
        {"constant": const, "remainder_norm": nrm, "min_perturbed_norm_ratio": worst,
         "perturbations": perturbations if n >= 1 else 0},
    )
    return report.with_pass(minimal, "" if minimal else "Taylor polynomial not minimal")


def verify_nulla(f, n, params, z=0j, spec=DEFAULT_SPEC, method="auto"):
    """Check ``|f^(n)(z)| <= C_p(alpha, n) ||f(z + .)||_{p,alpha}``.

    ``z = 0`` is the origin estimate; other ``z`` use the shifted function.
    ``method='auto'`` uses the closed form for a single monomial, the exact
    route for ``p = 2``, quadrature otherwise.
    """
    z = complex(z)
    g = shift_argument(f, z)
    if method == "auto":
        g_s = g.simplify()
        single_mono = len(g_s.terms) == 1 and g_s.terms[0].rate == 0 and g_s.terms[0].root == 0
        method = "closed" if single_mono else ("exact" if params.p == 2 else "quadrature")
    lhs = abs(nth_derivative_at(f, z, n))
    nrm, rel, route = _norm_with_method(g, params, spec, method)
    rhs = constant_nulla(n, params) * nrm
    tol = EXACT_TOL if route != "quadrature" else bound_tolerance(rel)
    theorem = "nulla" if z == 0 else "corollary"
    return VerificationReport.bound(theorem, _inputs(n, params, z, f), lhs, rhs, tol, f"route={route}")


def example_function(n, alpha, z):
    """``(w - z)^n e^{alpha (w - z) conj(z)}``, the function perturbed by ``s`` in the example."""
    return extremal_thm1(n, alpha, z)


def example_I(s, n, params, z, spec=DEFAULT_SPEC):
    """``I(s) = int |(w-z)^n e^{alpha (w-z) conj(z)} + s|^p e^{-p alpha |w|^2 / 2} dA(w)``.

    No ``p alpha / 2 pi`` prefactor.  Returns a QuadResult-like pair
    ``(value, error)``.
    """
    z = complex(z)
    if z.real == 0:
        import warnings

        warnings.warn("Re(z) = 0: the example is degenerate for n = 1", stacklevel=2)
    res = fock_integral(example_function(n, params.alpha, z), params.p, params.alpha, spec, offset=float(s))
    factor = 2.0 * math.pi / (params.p * params.alpha)
    return res.value * factor, res.error * factor


def example_Iprime0(n, params, z):
    """Closed form of ``I'(0)``."""
    z = complex(z)
    p, a = params.p, params.alpha
    re_zn = (z**n).real
    if re_zn == 0:
        return 0.0
    x = n * p / 2.0
    log_mag = (
        math.log(2.0 * math.pi)
        + (n - 1) * math.log(a)
        - p * a * abs(z) ** 2 / 2.0
        - x * math.log(a * p / 2.0)
        - ln_gamma(n + 1.0)
        + ln_gamma(1.0 + x)
    )
    return (-1) ** n * math.exp(log_mag) * re_zn


def random_fnexpr(rng, max_terms=5, max_degree=3, max_rate=1.0, root_radius=1.0):
    """Random FnExpr: amplitudes in the unit disc, ``|rate| <= max_rate``, roots in a disc."""

    def disc(radius):
        r = radius * math.sqrt(rng.uniform())
        return r * complex(math.cos(t := rng.uniform(0, 2 * math.pi)), math.sin(t))

    k = int(rng.integers(1, max_terms + 1))
    terms = []
    for _ in range(k):
        terms.append(
            KernelMonomial(disc(1.0), disc(root_radius), int(rng.integers(0, max_degree + 1)), disc(max_rate))
        )
    return FnExpr(tuple(terms))
