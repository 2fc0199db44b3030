"""Scalar special functions: log-gamma, gamma, 1F1(1+n; 1; x) and Laguerre polynomials."""

import math

__all__ = [
    "GammaOverflowError",
    "ln_gamma",
    "gamma",
    "kummer_1f1_n1",
    "log_kummer_1f1_n1",
    "laguerre",
]

# Lanczos approximation, g = 7, nine coefficients.
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_EULER_GAMMA = 0.57721566490153286061

_SERIES_RADIUS = 0.2
_SERIES_TERMS = 32


class GammaOverflowError(OverflowError):
    """Gamma(x) is not representable as a double; ``log_value`` holds ln Gamma(x)."""

    def __init__(self, x, log_value):
        super().__init__(f"Gamma({x!r}) overflows (ln Gamma = {log_value!r})")
        self.x = x
        self.log_value = log_value


def _zeta_int(s, N=20):
    # Euler-Maclaurin with five Bernoulli corrections; accurate to ~1e-17 for s >= 2.
    total = math.fsum(m ** -float(s) for m in range(1, N))
    total += N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** -float(s)
    bernoulli = (1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66)
    rising = float(s)  # s (s+1) ... (s+2j-2)
    fact = 2.0  # (2j)!
    for j, b in enumerate(bernoulli, start=1):
        total += b / fact * rising * N ** (-s - 2 * j + 1.0)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


# coefficients of ln Gamma(1 + e) = -gamma e + sum_k (-1)^k zeta(k) e^k / k
_LNGAMMA1_SERIES = tuple((-1) ** k * _zeta_int(k) / k for k in range(2, _SERIES_TERMS + 2))


def _ln_gamma_near_one(eps):
    acc = 0.0
    for c in reversed(_LNGAMMA1_SERIES):
        acc = (acc + c) * eps
    return (acc - _EULER_GAMMA) * eps


def _ln_gamma_lanczos(x):
    x -= 1.0
    a = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        a += _LANCZOS_COEFFS[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * math.log(t) - t + math.log(a)


def _check_positive(x, name="x"):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise TypeError(f"{name} must be a real number, got {type(x).__name__}")
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {x!r}")
    return x


def ln_gamma(x):
    """Natural log of the gamma function on the positive reals.

    Lanczos approximation away from the zeros of ln Gamma at 1 and 2; near
    those points a zeta-series expansion keeps the *relative* error small.

    Raises
    ------
    ValueError
        If ``x`` is not positive and finite.
    """
    x = _check_positive(x)
    if x < 1.0 - _SERIES_RADIUS:
        # ln Gamma(x) = ln Gamma(x + 1) - ln x, no cancellation on (0, 0.8)
        return ln_gamma(x + 1.0) - math.log(x)
    if abs(x - 1.0) <= _SERIES_RADIUS:
        return _ln_gamma_near_one(x - 1.0)
    if abs(x - 2.0) <= _SERIES_RADIUS:
        eps = x - 2.0
        return math.log1p(eps) + _ln_gamma_near_one(eps)
    return _ln_gamma_lanczos(x)


_FACTORIALS = tuple(float(math.factorial(k)) for k in range(21))


def gamma(x):
    """Gamma function on the positive reals; exact for integer arguments up to 21.

    Raises
    ------
    GammaOverflowError
        When Gamma(x) exceeds the double range; carries ``log_value``.
    """
    x = _check_positive(x)
    if x.is_integer() and x <= 21:
        return _FACTORIALS[int(x) - 1]
    lg = ln_gamma(x)
    if lg > 709.78:
        raise GammaOverflowError(x, lg)
    return math.exp(lg)


def _check_order(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"order must be a nonnegative integer, got {n!r}")
    return int(n)


def _kummer_series(n, x):
    """Return (mantissa, log_scale) with 1F1(1+n;1;x) = mantissa * exp(log_scale)."""
    total = 1.0
    term = 1.0
    log_scale = 0.0
    k = 0
    while True:
        ratio = (1.0 + n + k) * x / ((1.0 + k) * (1.0 + k))
        term *= ratio
        total += term
        k += 1
        if term < 1e-17 * total and ratio < 1.0:
            break
        if total > 1e300:
            total *= 1e-300
            term *= 1e-300
            log_scale += 300.0 * math.log(10.0)
    return total, log_scale


def kummer_1f1_n1(n, x):
    """Confluent hypergeometric value 1F1(1 + n; 1; x) for integer n >= 0, x >= 0.

    Summed by direct term recurrence; all terms are positive.
    """
    n = _check_order(n)
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"x must be finite and nonnegative, got {x!r}")
    mant, log_scale = _kummer_series(n, x)
    if log_scale:
        raise OverflowError(f"1F1(1+{n};1;{x}) overflows; use log_kummer_1f1_n1")
    return mant


def log_kummer_1f1_n1(n, x):
    """ln 1F1(1 + n; 1; x), safe for arguments where the value itself overflows."""
    n = _check_order(n)
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise ValueError(f"x must be finite and nonnegative, got {x!r}")
    mant, log_scale = _kummer_series(n, x)
    return math.log(mant) + log_scale


def laguerre(n, x):
    """Laguerre polynomial L_n(x) by the three-term recurrence."""
    n = _check_order(n)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"x must be finite, got {x!r}")
    prev, cur = 1.0, 1.0 - x
    if n == 0:
        return prev
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - x) * cur - k * prev) / (k + 1)
    return cur
