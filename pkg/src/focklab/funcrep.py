"""Entire functions as kernel-monomial combinations and truncated Taylor series.

A kernel monomial is ``w -> A (w - z0)**n * exp(lam * (w - z0))``.  Finite sums
of them are closed under differentiation, translation of the argument and
subtraction of Taylor polynomials, and they contain every extremal function
of the sharp pointwise estimates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import comb

import numpy as np

__all__ = [
    "KernelMonomial",
    "FnExpr",
    "CoeffSeries",
    "UnsupportedOrderError",
    "MAX_DERIVATIVE_ORDER",
    "MAX_SERIES_LENGTH",
    "LOG_SPACE_THRESHOLD",
    "monomial",
    "constant",
    "evaluate",
    "evaluate_scaled",
    "derivative",
    "nth_derivative_at",
    "taylor_coeffs_at",
    "subtract_taylor",
    "shift_argument",
    "scale",
    "series_derivative",
    "exp_remainder",
]

MAX_DERIVATIVE_ORDER = 12
MAX_SERIES_LENGTH = 500
LOG_SPACE_THRESHOLD = 700.0


class UnsupportedOrderError(ValueError):
    """Requested derivative order is beyond the supported cap."""


def _finite_complex(value, name):
    c = complex(value)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"{name} must be finite, got {c!r}")
    return c


@dataclass(frozen=True)
class KernelMonomial:
    """``amplitude * (w - root)**degree * exp(rate * (w - root))``."""

    amplitude: complex
    root: complex = 0j
    degree: int = 0
    rate: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "amplitude", _finite_complex(self.amplitude, "amplitude"))
        object.__setattr__(self, "root", _finite_complex(self.root, "root"))
        object.__setattr__(self, "rate", _finite_complex(self.rate, "rate"))
        if isinstance(self.degree, bool) or int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))

    @property
    def key(self):
        return (self.root, self.degree, self.rate)

    @property
    def is_constant(self):
        return self.degree == 0 and self.rate == 0


@dataclass(frozen=True)
class FnExpr:
    """Finite sum of kernel monomials; the empty sum is the zero function."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(self.terms)
        for t in terms:
            if not isinstance(t, KernelMonomial):
                raise TypeError(f"FnExpr terms must be KernelMonomial, got {type(t).__name__}")
        object.__setattr__(self, "terms", terms)

    def __add__(self, other):
        if isinstance(other, FnExpr):
            return FnExpr(self.terms + other.terms)
        if isinstance(other, (int, float, complex)):
            if other == 0:
                return self
            return FnExpr(self.terms + (KernelMonomial(other),))
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1.0)

    def __sub__(self, other):
        if isinstance(other, (FnExpr, int, float, complex)):
            return self + (-other)
        return NotImplemented

    def __call__(self, w):
        return evaluate(self, w)

    def __len__(self):
        return len(self.terms)

    def simplify(self):
        """Merge terms with equal (root, degree, rate) and drop zero amplitudes."""
        merged = {}
        for t in self.terms:
            merged[t.key] = merged.get(t.key, 0j) + t.amplitude
        return FnExpr(
            tuple(
                KernelMonomial(a, root, n, lam)
                for (root, n, lam), a in merged.items()
                if a != 0
            )
        )


@dataclass(frozen=True)
class CoeffSeries:
    """Truncated Taylor series about ``center``.

    Coefficient ``k`` is ``coeffs[k] * exp(log_scale[k])`` (``log_scale`` is
    optional and only needed where the coefficients leave the double range).
    ``tail_bound`` bounds ``sum_{k >= len(coeffs)} |a_k| radius**k``.
    """

    center: complex
    coeffs: np.ndarray
    tail_bound: float = 0.0
    radius: float = 1.0
    log_scale: np.ndarray | None = field(default=None)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.ndim != 1:
            raise ValueError("coeffs must be one-dimensional")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        if not self.tail_bound >= 0:
            raise ValueError(f"tail_bound must be nonnegative, got {self.tail_bound!r}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "center", complex(self.center))
        if self.log_scale is not None:
            ls = np.asarray(self.log_scale, dtype=float)
            if ls.shape != coeffs.shape:
                raise ValueError("log_scale must match coeffs in shape")
            object.__setattr__(self, "log_scale", ls)

    def __len__(self):
        return len(self.coeffs)

    def values(self):
        """Coefficients as plain complex numbers (may underflow when log-scaled)."""
        if self.log_scale is None:
            return self.coeffs
        return self.coeffs * np.exp(self.log_scale)

    def log_abs(self):
        with np.errstate(divide="ignore"):
            out = np.log(np.abs(self.coeffs))
        if self.log_scale is not None:
            out = out + self.log_scale
        return out

    def evaluate(self, w):
        """Horner evaluation of the truncated polynomial at ``w``."""
        u = np.asarray(w, dtype=complex) - self.center
        acc = np.zeros_like(u)
        for a in self.values()[::-1]:
            acc = acc * u + a
        return acc[()] if acc.ndim == 0 else acc


def monomial(n, amplitude=1.0):
    """``amplitude * w**n``."""
    return FnExpr((KernelMonomial(amplitude, 0j, n, 0j),))


def constant(c):
    return FnExpr((KernelMonomial(c),)) if c != 0 else FnExpr()


def _term_parts(t, w):
    d = w - t.root
    e = t.rate * d
    poly = t.amplitude * d**t.degree if t.degree else np.full_like(d, t.amplitude)
    return poly, e


def evaluate_scaled(f, w):
    """Evaluate ``f`` as ``(mantissa, log_scale)`` with ``f(w) = mantissa * exp(log_scale)``.

    ``log_scale`` is the largest real exponent among the terms at each point,
    so nothing overflows however large ``Re(lam (w - z0))`` becomes.
    """
    w = np.asarray(w, dtype=complex)
    if not f.terms:
        return np.zeros_like(w), np.zeros(w.shape)
    parts = [_term_parts(t, w) for t in f.terms]
    shift = np.max([e.real for _, e in parts], axis=0)
    mant = np.zeros_like(w)
    for poly, e in parts:
        mant = mant + poly * np.exp(e - shift)
    return mant, shift


def evaluate(f, w):
    """Value of ``f`` at ``w`` (scalar or array).

    Exponents beyond ``LOG_SPACE_THRESHOLD`` in magnitude are handled in
    log-magnitude form; a result outside the double range raises OverflowError.
    """
    w_arr = np.asarray(w, dtype=complex)
    if not f.terms:
        out = np.zeros_like(w_arr)
        return out[()] if out.ndim == 0 else out
    parts = [_term_parts(t, w_arr) for t in f.terms]
    if all(np.all(np.abs(e.real) <= LOG_SPACE_THRESHOLD) for _, e in parts):
        out = sum(poly * np.exp(e) for poly, e in parts)
    else:
        mant, shift = evaluate_scaled(f, w_arr)
        with np.errstate(over="ignore", invalid="ignore"):
            mag = np.abs(mant)
            logmag = np.log(np.where(mag > 0, mag, 1.0)) + shift
            if np.any((mag > 0) & (logmag > 709.78)):
                raise OverflowError("function value exceeds the double range")
            out = np.where(mag > 0, mant * np.exp(shift), 0j)
    return out[()] if out.ndim == 0 else out


def derivative(f):
    """Exact derivative; each term yields at most two terms (product rule)."""
    out = []
    for t in f.terms:
        if t.degree:
            out.append(KernelMonomial(t.amplitude * t.degree, t.root, t.degree - 1, t.rate))
        if t.rate != 0:
            out.append(KernelMonomial(t.amplitude * t.rate, t.root, t.degree, t.rate))
    return FnExpr(tuple(out)).simplify()


def nth_derivative_at(f, z, n):
    """``f^{(n)}(z)`` by repeated symbolic differentiation, ``n <= 12``."""
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    if n > MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(f"derivative order {n} exceeds {MAX_DERIVATIVE_ORDER}")
    g = f.simplify()
    for _ in range(int(n)):
        g = derivative(g)
    return complex(evaluate(g, complex(z)))


def exp_remainder(x, start):
    """Upper bound on ``sum_{i >= start} x**i / i!`` for ``x >= 0``."""
    if start <= 0:
        return math.exp(x)
    if x == 0:
        return 0.0
    if start + 1 > x:
        log_first = start * math.log(x) - math.lgamma(start + 1)
        return math.exp(log_first) / (1.0 - x / (start + 1))
    return math.exp(x)


def _term_coeffs(t, z, m):
    """First ``m`` Taylor coefficients of one term about ``z``."""
    d = complex(z) - t.root
    lead = t.amplitude * cmath.exp(t.rate * d)
    binom = np.array([comb(t.degree, j) * d ** (t.degree - j) for j in range(t.degree + 1)], dtype=complex)
    expo = np.empty(m, dtype=complex)
    c = 1.0 + 0j
    for i in range(m):
        expo[i] = c
        c = c * t.rate / (i + 1)
    return lead * np.convolve(binom, expo)[:m]


def _term_tail(t, z, m, radius):
    d = abs(complex(z) - t.root)
    lead = abs(t.amplitude) * math.exp((t.rate * (complex(z) - t.root)).real)
    x = abs(t.rate) * radius
    total = 0.0
    for j in range(t.degree + 1):
        total += comb(t.degree, j) * d ** (t.degree - j) * radius**j * exp_remainder(x, m - j)
    return lead * total


def taylor_coeffs_at(f, z, m, radius=1.0):
    """First ``m`` Taylor coefficients of ``f`` about ``z`` with a certified tail.

    Each term is the binomial expansion of ``(w - z0)**n`` recentred at ``z``
    convolved with the exponential series; the tail bound covers
    ``|w - z| <= radius``.
    """
    if isinstance(m, bool) or int(m) != m or not 1 <= m <= MAX_SERIES_LENGTH:
        raise ValueError(f"series length must be an integer in [1, {MAX_SERIES_LENGTH}], got {m!r}")
    m = int(m)
    z = complex(z)
    coeffs = np.zeros(m, dtype=complex)
    tail = 0.0
    for t in f.terms:
        coeffs += _term_coeffs(t, z, m)
        tail += _term_tail(t, z, m, float(radius))
    return CoeffSeries(z, coeffs, tail, float(radius))


def subtract_taylor(f, z, n):
    """``f - T_n(f, z)``: remove the degree ``n - 1`` Taylor polynomial at ``z``."""
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    if n > MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(f"Taylor order {n} exceeds {MAX_DERIVATIVE_ORDER}")
    if n == 0:
        return f
    z = complex(z)
    coeffs = taylor_coeffs_at(f, z, int(n)).coeffs
    extra = tuple(KernelMonomial(-a, z, k, 0j) for k, a in enumerate(coeffs) if a != 0)
    return FnExpr(f.terms + extra)


def shift_argument(f, z):
    """``w -> f(z + w)``; only the roots move."""
    z = complex(z)
    if z == 0:
        return f
    return FnExpr(tuple(KernelMonomial(t.amplitude, t.root - z, t.degree, t.rate) for t in f.terms))


def scale(f, c):
    c = complex(c)
    if c == 0:
        return FnExpr()
    return FnExpr(tuple(KernelMonomial(t.amplitude * c, t.root, t.degree, t.rate) for t in f.terms))


def series_derivative(s):
    """Term-by-term derivative of a coefficient series (``a_k -> k a_k`` at degree ``k-1``).

    A nonzero input tail bound does not control the derivative's tail, so it
    becomes ``inf``; exact (finite) series keep a zero tail.
    """
    k = np.arange(1, len(s.coeffs))
    tail = 0.0 if s.tail_bound == 0 else math.inf
    if s.log_scale is None:
        return CoeffSeries(s.center, s.coeffs[1:] * k, tail, s.radius)
    return CoeffSeries(s.center, s.coeffs[1:], tail, s.radius, s.log_scale[1:] + np.log(k))
