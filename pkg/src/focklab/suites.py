"""Default verification grids and the case runner shared by the CLI and tests.

A suite is a list of :class:`Case` objects; each case is a module-level
function plus keyword arguments (so it pickles for a process pool) and
returns a list of :class:`~focklab.report.VerificationReport`.  Grid axes
can be narrowed through :class:`SuiteOptions`; unset axes keep the default
grid.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .focknorm import (
    FockParams,
    norm2_exact,
    norm2_exact_squared,
    norm_p,
    normalized_kernel,
    pointwise_bound_check,
    reproducing_apply,
)
from .funcrep import CoeffSeries, FnExpr, KernelMonomial, derivative, evaluate, series_derivative
from .language import format_function, parse_function
from .operators import (
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
    mnorm2_claimed,
    mnorm2_exact,
    to_series,
)
from .quad import DEFAULT_SPEC, QuadratureSpec, fock_integral
from .report import VerificationReport, bound_tolerance
from .sharp import (
    constant_thm1,
    constant_thm2,
    example_I,
    example_Iprime0,
    extremal_thm1,
    extremal_thm2,
    extremal_zhuhe,
    random_fnexpr,
    verify_dera1,
    verify_nulla,
    verify_thm1,
    verify_thm2,
)
from .specfun import kummer_1f1_n1, laguerre

__all__ = [
    "SUITES",
    "DEFAULT_SEED",
    "Case",
    "SuiteOptions",
    "build_suite",
    "run_cases",
    "run_suite",
]

SUITES = ("zhuhe", "thm1", "thm2", "nulla", "example", "operators", "quadrature")
DEFAULT_SEED = 20240611

N_GRID = (0, 1, 2, 3, 4)
P_GRID = (1.0, 1.5, 2.0, 3.0, 4.0)
ALPHA_GRID = (0.5, 1.0, 2.0)
Z_GRID = (0j, 0.7 + 0.3j, 1.5j)
RANDOM_CASES = 100
MINIMALITY_CASES = 50
PERTURBATIONS = 20
SHARP_QUAD_TOL = 1e-4
SHARP_EXACT_TOL = 1e-10
KERNEL_P_GRID = (1.0, 1.7, 2.0, 3.0)
GAMMA_TABLE = (1.01, 1.1, 2.0, math.e, 10.0)
OPERATOR_PAIRS = ((1.0, 2.0), (1.0, 1.1), (0.5, 3.0))


@dataclass(frozen=True)
class SuiteOptions:
    """Grid overrides; ``None`` keeps the default axis."""

    alpha: float | None = None
    beta: float | None = None
    p: float | None = None
    n: int | None = None
    z: complex | None = None
    f: str | None = None
    seed: int = DEFAULT_SEED
    spec: QuadratureSpec = field(default_factory=lambda: DEFAULT_SPEC)

    def axis(self, name, default):
        value = getattr(self, name)
        return default if value is None else (value,)


@dataclass(frozen=True)
class Case:
    func: object
    kwargs: dict

    def __call__(self):
        return self.func(**self.kwargs)


def _rng(seed, *stream):
    return np.random.default_rng([int(seed), *stream])


def _user_function(opts):
    return None if opts.f is None else parse_function(opts.f)


# ---------------------------------------------------------------- thm1


def _thm1_sharp(n, alpha, p, z, spec):
    params = FockParams(alpha, p)
    f = extremal_thm1(n, alpha, z)
    out = [verify_thm1(f, n, params, z, spec, method="quadrature").as_equality(SHARP_QUAD_TOL, "sharpness")]
    if p == 2:
        out.append(verify_thm1(f, n, params, z, spec, method="exact").as_equality(SHARP_EXACT_TOL, "sharpness"))
    return out


def _random_case(seed, stream, index, alpha_axis, p_axis, n_axis, z=None, fixed_f=None, max_n=4):
    rng = _rng(seed, stream, index)
    f = fixed_f if fixed_f is not None else random_fnexpr(rng)
    alpha = float(rng.choice(alpha_axis))
    p = float(rng.choice(p_axis))
    n = int(rng.choice(n_axis)) if n_axis is not None else int(rng.integers(0, max_n + 1))
    if z is None:
        r, t = 1.5 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi)
        z = complex(r * math.cos(t), r * math.sin(t))
    return f, alpha, p, n, z, rng


def _thm1_random(seed, index, alpha_axis, p_axis, n_axis, z, f_text, spec):
    fixed = None if f_text is None else parse_function(f_text)
    f, alpha, p, n, z, _ = _random_case(seed, 1, index, alpha_axis, p_axis, n_axis, z, fixed)
    params = FockParams(alpha, p)
    out = [verify_thm1(f, n, params, z, spec).with_pass(True, "validity")]
    if n == 1:
        out.append(verify_dera1(f, params, z, spec).with_pass(True, "validity"))
    return out


def _thm1_cases(opts):
    cases = []
    for n in opts.axis("n", N_GRID):
        for p in opts.axis("p", P_GRID):
            for a in opts.axis("alpha", ALPHA_GRID):
                for z in opts.axis("z", Z_GRID):
                    cases.append(Case(_thm1_sharp, dict(n=n, alpha=a, p=p, z=z, spec=opts.spec)))
    n_axis = None if opts.n is None else (opts.n,)
    for i in range(RANDOM_CASES):
        cases.append(Case(_thm1_random, dict(
            seed=opts.seed, index=i, alpha_axis=opts.axis("alpha", ALPHA_GRID),
            p_axis=opts.axis("p", P_GRID), n_axis=n_axis, z=opts.z, f_text=opts.f, spec=opts.spec)))
    return cases


# ---------------------------------------------------------------- thm2


def _kummer_vs_laguerre(n):
    x = np.linspace(0.0, 10.0, 101)
    worst = 0.0
    for xi in x:
        ref = math.exp(xi) * laguerre(n, -xi)
        worst = max(worst, abs(kummer_1f1_n1(n, xi) - ref) / abs(ref))
    return [VerificationReport.residual(
        "thm2", {"n": n, "x_max": 10.0, "points": len(x)}, worst, 1.0, 1e-12,
        "kummer 1F1(1+n;1;x) vs e^x L_n(-x)")]


def _thm2_sharp(n, alpha, z, seed):
    rng = _rng(seed, 2, n, int(alpha * 1000), int(abs(z) * 1000))
    report = verify_thm2(extremal_thm2(n, alpha, z), n, alpha, z, rng, PERTURBATIONS)
    return [report.as_equality(SHARP_EXACT_TOL, "sharpness")]


def _thm2_random(seed, index, alpha_axis, n_axis, z, f_text):
    fixed = None if f_text is None else parse_function(f_text)
    f, alpha, _, n, z, rng = _random_case(seed, 3, index, alpha_axis, (2.0,), n_axis, z, fixed)
    n = max(n, 1) if n_axis is None else n
    label = "validity; minimality" if index < MINIMALITY_CASES else "validity"
    return [verify_thm2(f, n, alpha, z, rng, PERTURBATIONS).with_pass(True, label)]


def _thm1_thm2_origin(n, alpha):
    params = FockParams(alpha, 2.0)
    c1, c2 = constant_thm1(n, params, 0.0), constant_thm2(n, alpha, 0.0)
    return [VerificationReport.residual(
        "thm2", {"n": n, "alpha": alpha, "p": 2.0, "z": 0j}, abs(c1 - c2), c2, 1e-12,
        "constant equals the Taylor-remainder constant at z=0", {"thm1_constant": c1, "thm2_constant": c2})]


def _thm2_cases(opts):
    cases = [Case(_kummer_vs_laguerre, dict(n=n)) for n in range(11)]
    for n in opts.axis("n", N_GRID):
        for a in opts.axis("alpha", ALPHA_GRID):
            cases.append(Case(_thm1_thm2_origin, dict(n=n, alpha=a)))
            for z in opts.axis("z", Z_GRID + (1 + 0j,)):
                cases.append(Case(_thm2_sharp, dict(n=n, alpha=a, z=z, seed=opts.seed)))
    n_axis = None if opts.n is None else (opts.n,)
    for i in range(RANDOM_CASES):
        cases.append(Case(_thm2_random, dict(
            seed=opts.seed, index=i, alpha_axis=opts.axis("alpha", ALPHA_GRID), n_axis=n_axis,
            z=opts.z, f_text=opts.f)))
    return cases


# ---------------------------------------------------------------- nulla / corollary

MONOMIAL_AMPLITUDE = 1.7 - 0.4j
NULLA_N_GRID = tuple(range(7))
NULLA_P_GRID = (1.0, 2.0, 3.0)
COROLLARY_Z_GRID = (0.7 + 0.3j, 1.5j, -1 + 1j)


def _nulla_closed(n, alpha, p):
    params = FockParams(alpha, p)
    f = FnExpr((KernelMonomial(MONOMIAL_AMPLITUDE, 0j, n, 0j),))
    return [verify_nulla(f, n, params, 0j, method="closed").as_equality(1e-12, "exactness")]


def _corollary_shifted(n, alpha, p, z, spec):
    params = FockParams(alpha, p)
    f = FnExpr((KernelMonomial(MONOMIAL_AMPLITUDE, z, n, 0j),))
    return [verify_nulla(f, n, params, z, spec, method="quadrature").as_equality(SHARP_QUAD_TOL, "sharpness")]


def _nulla_random(seed, index, alpha_axis, p_axis, n_axis, z, f_text, spec):
    fixed = None if f_text is None else parse_function(f_text)
    f, alpha, p, n, zr, _ = _random_case(seed, 4, index, alpha_axis, p_axis, n_axis, z, fixed)
    if z is None and index % 2 == 0:
        zr = 0j
    return [verify_nulla(f, n, FockParams(alpha, p), zr, spec).with_pass(True, "validity")]


def _nulla_cases(opts):
    cases = []
    for n in opts.axis("n", NULLA_N_GRID):
        for p in opts.axis("p", NULLA_P_GRID):
            for a in opts.axis("alpha", ALPHA_GRID):
                cases.append(Case(_nulla_closed, dict(n=n, alpha=a, p=p)))
                for z in opts.axis("z", COROLLARY_Z_GRID):
                    if z != 0 and n <= 4:
                        cases.append(Case(_corollary_shifted, dict(n=n, alpha=a, p=p, z=z, spec=opts.spec)))
    n_axis = None if opts.n is None else (opts.n,)
    for i in range(RANDOM_CASES):
        cases.append(Case(_nulla_random, dict(
            seed=opts.seed, index=i, alpha_axis=opts.axis("alpha", ALPHA_GRID),
            p_axis=opts.axis("p", P_GRID), n_axis=n_axis, z=opts.z, f_text=opts.f, spec=opts.spec)))
    return cases


# ---------------------------------------------------------------- example

EXAMPLE_POINTS = ((1, 3.0, 1.0, 1 + 0j), (2, 2.0, 1.0, 1 + 0.5j))
FD_STEP = 1e-4
SIGN_STEP = 1e-2


def _example_case(n, p, alpha, z, spec):
    params = FockParams(alpha, p)
    inputs = {"n": n, "p": p, "alpha": alpha, "z": z}
    i0, e0 = example_I(0.0, n, params, z, spec)
    ip, ep = example_I(FD_STEP, n, params, z, spec)
    im, em = example_I(-FD_STEP, n, params, z, spec)
    fd = (ip - im) / (2 * FD_STEP)
    exact = example_Iprime0(n, params, z)
    out = [VerificationReport.equality(
        "example", {**inputs, "h": FD_STEP}, fd, exact, 1e-3, "central difference of I at s=0",
        {"I0": i0, "fd_quadrature_error": (ep + em) / (2 * FD_STEP)})]
    s = -math.copysign(SIGN_STEP, exact)
    i_s, e_s = example_I(s, n, params, z, spec)
    # strictly below I(0) by more than both quadrature errors
    out.append(VerificationReport.bound(
        "example", {**inputs, "s": s}, i_s, i0, -(e_s + e0) / i0,
        "sign-directed s lowers the norm below that of f - f(z)",
        {"I0_error": e0, "Is_error": e_s}))
    closed = (2 * math.pi / (p * alpha)) * math.exp(
        -p * alpha * abs(z) ** 2 / 2.0) * math.gamma(1 + n * p / 2.0) * (2.0 / (alpha * p)) ** (n * p / 2.0)
    out.append(VerificationReport.equality(
        "example", {**inputs, "s": 0.0}, i0, closed, bound_tolerance(e0 / i0), "I(0) closed form"))
    return out


def _example_cases(opts):
    points = EXAMPLE_POINTS
    if any(v is not None for v in (opts.n, opts.p, opts.alpha, opts.z)):
        points = tuple(
            (opts.n if opts.n is not None else n, opts.p if opts.p is not None else p,
             opts.alpha if opts.alpha is not None else a, opts.z if opts.z is not None else z)
            for n, p, a, z in points[:1])
    return [Case(_example_case, dict(n=n, p=p, alpha=a, z=z, spec=opts.spec)) for n, p, a, z in points]


# ---------------------------------------------------------------- zhuhe

ZHUHE_Z_GRID = (0j, 0.7 + 0.3j, 1.5j, -1 + 1j)
REPRO_Z_GRID = (0j, 0.5 + 0j, 1 + 1j, -1.2 + 0.9j, 2j, 1.4 - 1.4j)
ZHUHE_PHASE = 0.7


def _kernel_unit(alpha, p, z, spec):
    est = norm_p(normalized_kernel(z, alpha), FockParams(alpha, p), spec)
    return [VerificationReport.equality(
        "zhuhe", {"alpha": alpha, "p": p, "z": z}, est.value, 1.0, 1e-6, "k_z unit norm",
        {"norm_error": est.error})]


def _zhuhe_extremal(alpha, p, z, spec):
    f = extremal_zhuhe(z, alpha, ZHUHE_PHASE)
    return [pointwise_bound_check(f, z, FockParams(alpha, p), spec).as_equality(1e-6, "sharpness")]


def _zhuhe_random(seed, index, alpha_axis, p_axis, z, f_text, spec):
    fixed = None if f_text is None else parse_function(f_text)
    f, alpha, p, _, zr, _ = _random_case(seed, 5, index, alpha_axis, p_axis, (0,), z, fixed)
    report = pointwise_bound_check(f, zr, FockParams(alpha, p), spec)
    return [report.with_pass(True, f"validity; f={format_function(f)}")]


def _reproducing(degree, alpha, z, seed, spec):
    rng = _rng(seed, 6, degree)
    coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    f = FnExpr(tuple(KernelMonomial(c, 0j, k, 0j) for k, c in enumerate(coeffs)))
    res = reproducing_apply(f, z, alpha, spec)
    target = complex(evaluate(f, z))
    return [VerificationReport.residual(
        "reproducing", {"alpha": alpha, "z": z, "degree": degree, "f": format_function(f)},
        abs(res.value - target), max(1.0, abs(target)), 1e-8, "matches evaluate",
        {"quadrature_error": res.error})]


def _zhuhe_cases(opts):
    cases = []
    for a in opts.axis("alpha", ALPHA_GRID):
        for z in opts.axis("z", ZHUHE_Z_GRID):
            for p in opts.axis("p", KERNEL_P_GRID):
                cases.append(Case(_kernel_unit, dict(alpha=a, p=p, z=z, spec=opts.spec)))
                cases.append(Case(_zhuhe_extremal, dict(alpha=a, p=p, z=z, spec=opts.spec)))
        for z in opts.axis("z", REPRO_Z_GRID):
            for d in opts.axis("n", tuple(range(7))):
                cases.append(Case(_reproducing, dict(degree=d, alpha=a, z=z, seed=opts.seed, spec=opts.spec)))
    for i in range(20):
        cases.append(Case(_zhuhe_random, dict(
            seed=opts.seed, index=i, alpha_axis=opts.axis("alpha", ALPHA_GRID),
            p_axis=opts.axis("p", KERNEL_P_GRID), z=opts.z, f_text=opts.f, spec=opts.spec)))
    return cases


# ---------------------------------------------------------------- operators

BRUTE_K = 200
BRUTE_VECTORS = 1000
ADJOINT_TRIALS = 100
ADJOINT_SUPPORT = 40
COUNTEREXAMPLE_N = (2, 3, 10, 100, 1000, 10000)
GENERAL_P_CASES = 20
GENERAL_P_GRID = (1.0, 1.5, 2.0, 3.0, 4.0)


def _derivative_series(s):
    return series_derivative(s)


def _times_z_series(s):
    coeffs = np.concatenate([[0j], s.coeffs])
    log_scale = None if s.log_scale is None else np.concatenate([[0.0], s.log_scale])
    return CoeffSeries(0j, coeffs, s.tail_bound, s.radius, log_scale)


def _rayleigh(v, beta, op):
    """``||op f||^2_{2,beta} / ||f||^2_{2,alpha}`` from monomial coefficients (independent of the shift weights)."""
    s = to_series(v)
    return norm2_exact_squared(op(s), beta) / norm2_exact_squared(s, v.weight)


def _basis(alpha, K, k):
    e = np.zeros(K + 1, complex)
    e[k] = 1.0
    return CoeffVector(alpha, e)


def _operator_brute(alpha, beta, which, seed):
    exact = dnorm2_exact(alpha, beta) if which == "D" else mnorm2_exact(alpha, beta)
    op = _derivative_series if which == "D" else _times_z_series
    K = BRUTE_K
    basis = [_rayleigh(_basis(alpha, K, k), beta, op) for k in range(K + 1)]
    k_star = int(np.argmax(basis))
    attain = _rayleigh(_basis(alpha, K, exact.argmax), beta, op)
    inputs = {"alpha": alpha, "beta": beta, "operator": which, "K": K}
    name = "dnorm2_exact" if which == "D" else "mnorm2_exact"
    out = [
        VerificationReport.equality(
            "operator", {**inputs, "monomial": exact.argmax}, attain, exact.value, 1e-12,
            f"attaining monomial z^{exact.argmax}", {name: exact.value}),
        VerificationReport.equality(
            "operator", {**inputs, "check": "basis sup"}, max(basis), exact.value, 1e-12,
            "truncated-basis sup", {name: exact.value, "basis_argmax": k_star}),
    ]
    if which == "D":
        rng = _rng(seed, 7, int(alpha * 1000), int(beta * 1000))
        worst = 0.0
        for _ in range(BRUTE_VECTORS):
            entries = rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1)
            worst = max(worst, _rayleigh(CoeffVector(alpha, entries), beta, op))
        out.append(VerificationReport.bound(
            "operator", {**inputs, "vectors": BRUTE_VECTORS}, worst, exact.value, 1e-12,
            "random Rayleigh quotients never exceed the norm", {name: exact.value}))
    return out


def _adjoints(alpha, beta, seed):
    rng = _rng(seed, 8, int(alpha * 1000), int(beta * 1000))
    worst_d = worst_m = worst_printed = 0.0
    for _ in range(ADJOINT_TRIALS):
        def vec(weight):
            return CoeffVector(weight, rng.normal(size=ADJOINT_SUPPORT) + 1j * rng.normal(size=ADJOINT_SUPPORT))

        f, g = vec(alpha), vec(beta)
        df = apply_D(f, beta)
        worst_d = max(worst_d, abs(inner(df, g) - inner(f, adjoint_D(g, alpha, beta))) / (df.norm() * g.norm()))
        g2 = CoeffVector(beta, np.concatenate([g.entries, rng.normal(size=1) + 1j * rng.normal(size=1)]))
        mf = apply_M(f, beta)
        scale = mf.norm() * g2.norm()
        worst_m = max(worst_m, abs(inner(mf, g2) - inner(f, adjoint_M(g2, alpha, beta))) / scale)
        worst_printed = max(worst_printed, abs(inner(mf, g2) - inner(f, adjoint_M_printed(g2, alpha, beta))) / scale)
    inputs = {"alpha": alpha, "beta": beta, "trials": ADJOINT_TRIALS, "support": ADJOINT_SUPPORT}
    return [
        VerificationReport.residual("operator", {**inputs, "operator": "D"}, worst_d, 1.0, 1e-12,
                                    "adjoint identity (Df,g) = (f,D*g)"),
        VerificationReport.residual("operator", {**inputs, "operator": "M"}, worst_m, 1.0, 1e-12,
                                    "adjoint identity (Mf,g) = (f,M*g)",
                                    {"printed_index_pattern_residual": worst_printed,
                                     "printed_index_pattern_fails": worst_printed > 1e-6}),
    ]


def _counterexample():
    out = []
    for N in COUNTEREXAMPLE_N:
        first, second = counterexample_partial(N)
        h = math.fsum(1.0 / k for k in range(1, N))
        inputs = {"N": N, "alpha": 1.0}
        out.append(VerificationReport.residual(
            "operator", {**inputs, "sequence": "norm"}, abs(first - (1 - 1 / N)), 1 - 1 / N, 1e-12,
            "partial norm^2 equals 1 - 1/N"))
        out.append(VerificationReport.residual(
            "operator", {**inputs, "sequence": "derivative"}, abs(second - h), h, 1e-12,
            "partial derivative norm^2 equals H_{N-1}"))
    first, second = counterexample_partial(COUNTEREXAMPLE_N[-1])
    report = VerificationReport.bound(
        "operator", {"N": COUNTEREXAMPLE_N[-1], "alpha": 1.0, "sequence": "divergence"}, 9.0, second, 0.0,
        "derivative norm^2 exceeds 9 while the norm^2 stays below 1", {"norm2": first, "derivative_norm2": second})
    out.append(report.with_pass(first < 1.0))
    return out


def _general_p(seed, index, alpha, beta, p, spec):
    rng = _rng(seed, 9, index)
    f = random_fnexpr(rng)
    a = alpha if alpha is not None else float(rng.uniform(0.5, 2.0))
    b = beta if beta is not None else a * float(rng.uniform(1.2, 3.0))
    p = p if p is not None else float(rng.choice(GENERAL_P_GRID))
    lhs = norm_p(derivative(f), FockParams(b, p), spec)
    rhs = norm_p(f, FockParams(a, p), spec)
    c = dbound_general_p(a, b, p)
    tol = bound_tolerance(lhs.rel_error + rhs.rel_error)
    slack = math.log(c * rhs.value / lhs.value) if lhs.value > 0 else math.inf
    return [VerificationReport.bound(
        "operator", {"alpha": a, "beta": b, "p": p, "f": format_function(f)}, lhs.value, c * rhs.value, tol,
        "general-p derivative bound", {"constant": c, "log_slack": slack})]


def _pointwise_slack(alpha, beta):
    radii = np.linspace(0.0, 4.0 * alpha / (beta - alpha) + 2.0, 81)
    angles = np.linspace(0.0, 2 * np.pi, 24, endpoint=False)
    z = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    worst = math.inf
    # the bound integrates over the unit circle |w| = 1
    for wt in np.linspace(0.0, 2 * np.pi, 96, endpoint=False):
        worst = min(worst, float(np.min(dbound_pointwise_slack(alpha, beta, z, np.exp(1j * wt)))))
    z_star = alpha / (beta - alpha)
    at_star = float(dbound_pointwise_slack(alpha, beta, z_star, 1.0))
    return [VerificationReport.residual(
        "operator", {"alpha": alpha, "beta": beta, "check": "pointwise slack", "w_radius": 1.0},
        max(0.0, -worst), 1.0, 1e-12, "pointwise inequality behind the general-p bound",
        {"min_log_slack": worst, "slack_at_aligned_extremum": at_star})]


def _gamma_row(alpha, gamma):
    beta = alpha * gamma
    exact = dnorm2_exact(alpha, beta)
    paper = dnorm2_paper(alpha, beta)
    K = max(1000, math.ceil(10.0 / math.log(gamma)))
    k = np.arange(1, K + 1)
    brute = float(np.max(np.exp(np.log(k) + math.log(beta) - k * math.log(gamma))))
    m_exact = mnorm2_exact(alpha, beta).value
    m_claim = mnorm2_claimed(alpha, beta)
    discrepancy = abs(paper.value - exact.value) > 1e-12 * exact.value
    flags = [f for f, on in (("degenerate", paper.degenerate), ("discrepancy", discrepancy)) if on]
    return [VerificationReport.equality(
        "operator", {"alpha": alpha, "beta": beta, "gamma": gamma, "check": "norm table"},
        exact.value, brute, 1e-12, "flag=" + ",".join(flags) if flags else "flag=none",
        {"dnorm2_exact": exact.value, "dnorm2_exact_argmax": exact.argmax, "dnorm2_paper": paper.value,
         "dnorm2_paper_m": paper.m, "dnorm2_paper_degenerate": paper.degenerate,
         "dnorm2_discrepancy": discrepancy, "mnorm2_exact": m_exact, "mnorm2_claimed": m_claim,
         "mnorm2_discrepancy": abs(m_exact - m_claim) > 1e-12 * m_exact})]


def _operator_cases(opts):
    if opts.alpha is None and opts.beta is None:
        pairs = OPERATOR_PAIRS
        table = tuple((1.0, g) for g in GAMMA_TABLE)
    else:
        a = opts.alpha if opts.alpha is not None else 1.0
        b = opts.beta if opts.beta is not None else 2.0 * a
        pairs = ((a, b),)
        table = ((a, b / a),)
    cases = []
    for a, b in pairs:
        cases.append(Case(_operator_brute, dict(alpha=a, beta=b, which="D", seed=opts.seed)))
        cases.append(Case(_operator_brute, dict(alpha=a, beta=b, which="M", seed=opts.seed)))
        cases.append(Case(_adjoints, dict(alpha=a, beta=b, seed=opts.seed)))
        cases.append(Case(_pointwise_slack, dict(alpha=a, beta=b)))
    for a, g in table:
        cases.append(Case(_gamma_row, dict(alpha=a, gamma=g)))
    cases.append(Case(_counterexample, {}))
    for i in range(GENERAL_P_CASES):
        cases.append(Case(_general_p, dict(seed=opts.seed, index=i, alpha=opts.alpha, beta=opts.beta,
                                           p=opts.p, spec=opts.spec)))
    return cases


# ---------------------------------------------------------------- quadrature


def _quadrature_family(alpha, seed):
    fam = [FnExpr((KernelMonomial(1.0, 0j, n, 0j),)) for n in range(7)]
    fam += [normalized_kernel(z, alpha) for z in ZHUHE_Z_GRID]
    fam += [extremal_thm1(n, alpha, z) for n in range(3) for z in Z_GRID]
    rng = _rng(seed, 10, int(alpha * 1000))
    fam += [random_fnexpr(rng) for _ in range(10)]
    return fam


def _quadrature_case(f_text, alpha, spec):
    f = parse_function(f_text)
    params = FockParams(alpha, 2.0)
    est = norm_p(f, params, spec)
    exact = norm2_exact(f, alpha)
    inputs = {"alpha": alpha, "p": 2.0, "f": f_text}
    out = [VerificationReport.residual(
        "quadrature", {**inputs, "check": "exact"}, abs(est.value - exact), max(1e-8 * exact, est.error), 1.0,
        "p=2 quadrature vs coefficient norm", {"exact": exact, "quadrature": est.value, "error": est.error})]
    for p in (1.0, 2.0, 3.0):
        r1 = fock_integral(f, p, alpha, spec)
        r2 = fock_integral(f, p, alpha, spec.doubled())
        out.append(VerificationReport.residual(
            "quadrature", {**inputs, "p": p, "check": "doubling"}, abs(r2.value - r1.value), r1.error, 1.0,
            "node doubling stays within the reported error", {"value": r1.value, "doubled": r2.value}))
    return out


def _quadrature_cases(opts):
    cases = []
    for a in opts.axis("alpha", ALPHA_GRID):
        fam = [_user_function(opts)] if opts.f is not None else _quadrature_family(a, opts.seed)
        for f in fam:
            cases.append(Case(_quadrature_case, dict(f_text=format_function(f), alpha=a, spec=opts.spec)))
    return cases


_BUILDERS = {
    "zhuhe": _zhuhe_cases,
    "thm1": _thm1_cases,
    "thm2": _thm2_cases,
    "nulla": _nulla_cases,
    "example": _example_cases,
    "operators": _operator_cases,
    "quadrature": _quadrature_cases,
}


def build_suite(name, opts=SuiteOptions()):
    """Cases of one suite (``'all'`` concatenates every suite)."""
    if name == "all":
        return [c for s in SUITES for c in _BUILDERS[s](opts)]
    if name not in _BUILDERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    return _BUILDERS[name](opts)


def _run(case):
    return case()


def run_cases(cases, workers=1):
    """Run cases, in a process pool when ``workers > 1``; reports come back sorted."""
    if workers > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run, cases, chunksize=max(1, len(cases) // (4 * workers))))
    else:
        chunks = [case() for case in cases]
    reports = [r for chunk in chunks for r in chunk]
    return sorted(reports, key=lambda r: r.sort_key())


def run_suite(name, opts=SuiteOptions(), workers=1):
    return run_cases(build_suite(name, opts), workers)
