"""Command-line front end.

Commands
--------
``verify``     run a verification suite and write a JSON/CSV/text report
``norm``       Fock norm of a function given in the mini-language
``constants``  sharp derivative constants for ``(n, p, alpha, |z|)``
``operators``  norms of differentiation and multiplication between Fock spaces
``example``    the perturbation integral ``I(s)`` as ``(s, I(s))`` pairs

Complex literals are ``a+bi`` with no spaces; pass negative values as
``--z=-1+0i`` so they are not mistaken for options.  Exit status is 0 iff
every reported check passes; failures before a report exists print a JSON
error record on stderr and exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .focknorm import FockParams, closed_form_norm, norm2_exact, norm_p
from .language import FunctionSyntaxError, format_function, parse_complex, parse_function
from .operators import (
    dbound_general_p,
    dnorm2_exact,
    dnorm2_paper,
    mnorm2_claimed,
    mnorm2_exact,
)
from .quad import QuadratureSpec
from .report import jsonable
from .sharp import (
    constant_dera1,
    constant_nulla,
    constant_thm1,
    constant_thm2,
    example_I,
    example_Iprime0,
    zhu_constant,
    zhu_ratio,
)
from .suites import DEFAULT_SEED, SUITES, SuiteOptions, run_suite

__all__ = [
    "REPORT_SCHEMA",
    "RunConfig",
    "build_parser",
    "main",
    "parse_function",
    "format_function",
    "render_report",
    "run_verify",
]

_CASE_SCHEMA = {
    "type": "object",
    "required": ["theorem", "inputs", "lhs", "rhs", "ratio", "tolerance", "pass", "notes", "oracles"],
    "additionalProperties": False,
    "properties": {
        "theorem": {"type": "string"},
        "inputs": {"type": "object"},
        "lhs": {"type": ["number", "string"]},
        "rhs": {"type": ["number", "string"]},
        "ratio": {"type": ["number", "string"]},
        "tolerance": {"type": ["number", "string"]},
        "pass": {"type": "boolean"},
        "notes": {"type": "string"},
        "oracles": {"type": "object"},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "focklab verification report",
    "type": "object",
    "required": ["suite", "cases", "seed", "version"],
    "additionalProperties": False,
    "properties": {
        "suite": {"enum": list(SUITES) + ["all"]},
        "seed": {"type": "integer"},
        "version": {"type": "string"},
        "summary": {
            "type": "object",
            "required": ["cases", "passed", "failed"],
            "properties": {n: {"type": "integer", "minimum": 0} for n in ("cases", "passed", "failed")},
        },
        "cases": {"type": "array", "items": _CASE_SCHEMA},
    },
}


class CliError(Exception):
    """Bad command-line input, reported as a structured record."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _complex_arg(text):
    try:
        return parse_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text):
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return value


def _nonneg_int(text):
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return int(text)


@dataclass(frozen=True)
class RunConfig:
    """Validated command-line configuration."""

    command: str
    params: FockParams | None
    z: complex | None
    n: int | None
    spec: QuadratureSpec
    seed: int
    out: str | None
    fmt: str
    beta: float | None = None
    f: str | None = None
    suite: str = "all"
    workers: int = 1
    s_values: tuple = ()

    @classmethod
    def from_args(cls, args):
        spec = QuadratureSpec(args.angular_nodes, args.radial_nodes, None, args.tol)
        params = None
        if args.alpha is not None or args.command in ("norm", "constants", "example"):
            params = FockParams(args.alpha if args.alpha is not None else 1.0, args.p if args.p is not None else 2.0)
        if args.f is not None:
            parse_function(args.f)
        fmt = args.format or ("json" if args.command == "verify" else "csv" if args.command == "example" else "text")
        return cls(
            command=args.command, params=params, z=args.z, n=args.n, spec=spec, seed=args.seed,
            out=args.out, fmt=fmt, beta=args.beta, f=args.f, suite=getattr(args, "suite", "all"),
            workers=max(1, args.workers), s_values=tuple(_s_values(getattr(args, "s", None))),
        )

    def suite_options(self, raw_alpha, raw_p):
        return SuiteOptions(alpha=raw_alpha, beta=self.beta, p=raw_p, n=self.n, z=self.z, f=self.f,
                            seed=self.seed, spec=self.spec)


def _s_values(text):
    if text is None:
        return np.linspace(-0.05, 0.05, 11)
    if ":" in text:
        lo, hi, count = text.split(":")
        return np.linspace(float(lo), float(hi), int(count))
    return [float(v) for v in text.split(",")]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_positive, help="Gaussian weight parameter (alpha > 0)")
    common.add_argument("--beta", type=_positive, help="target weight for operators (beta > alpha)")
    common.add_argument("--p", type=float, help="exponent p >= 1")
    common.add_argument("--n", type=_nonneg_int, help="derivative order")
    common.add_argument("--z", type=_complex_arg, help="evaluation point, e.g. 0.7+0.3i")
    common.add_argument("--f", help='function text, e.g. "mono A=1 n=2"')
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--angular-nodes", type=int, default=64)
    common.add_argument("--radial-nodes", type=int, default=96)
    common.add_argument("--tol", type=float, default=1e-12, help="quadrature tail target")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)

    parser = _Parser(prog="focklab", description="Sharp derivative estimates in Fock spaces.")
    parser.add_argument("--version", action="version", version=f"focklab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=SUITES + ("all",), default="all")
    nm = sub.add_parser("norm", parents=[common], help="Fock norm of a function")
    nm.add_argument("--method", choices=("auto", "exact", "closed", "quadrature"), default="auto")
    sub.add_parser("constants", parents=[common], help="sharp derivative constants")
    sub.add_parser("operators", parents=[common], help="operator norms between Fock spaces")
    ex = sub.add_parser("example", parents=[common], help="(s, I(s)) pairs of the perturbation integral")
    ex.add_argument("--s", help="comma list or lo:hi:count (default -0.05:0.05:11)")
    return parser


# ---------------------------------------------------------------- rendering


def _json_text(obj):
    return json.dumps(jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def render_report(suite, seed, reports, fmt):
    """Serialize suite reports; output depends only on its arguments."""
    passed = sum(r.passed for r in reports)
    if fmt == "json":
        doc = {
            "suite": suite,
            "seed": int(seed),
            "version": __version__,
            "summary": {"cases": len(reports), "passed": passed, "failed": len(reports) - passed},
            "cases": [r.to_dict() for r in reports],
        }
        return _json_text(doc)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theorem", "inputs", "lhs", "rhs", "ratio", "tolerance", "pass", "notes"])
        for r in reports:
            d = r.to_dict()
            w.writerow([d["theorem"], json.dumps(d["inputs"], sort_keys=True), d["lhs"], d["rhs"],
                        d["ratio"], d["tolerance"], d["pass"], d["notes"]])
        return buf.getvalue()
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.theorem:<11} ratio={r.ratio:.12g} tol={r.tolerance:.3g} "
        f"{json.dumps(jsonable(r.inputs), sort_keys=True)} {r.notes}"
        for r in reports
    ]
    lines.append(f"{suite}: {passed}/{len(reports)} passed")
    return "\n".join(lines) + "\n"


def _render_mapping(record, fmt):
    if fmt == "json":
        return _json_text(record)
    rec = jsonable(record)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rec))
        w.writerow([json.dumps(v) if isinstance(v, (dict, list)) else v for v in rec.values()])
        return buf.getvalue()
    return "".join(f"{k} = {v}\n" for k, v in rec.items())


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------- commands


def run_verify(cfg, args):
    opts = cfg.suite_options(args.alpha, args.p)
    reports = run_suite(cfg.suite, opts, cfg.workers)
    _emit(render_report(cfg.suite, cfg.seed, reports, cfg.fmt), cfg.out)
    return 0 if all(r.passed for r in reports) else 1


def _run_norm(cfg, args):
    if cfg.f is None:
        raise CliError("norm needs --f")
    f = parse_function(cfg.f)
    params = cfg.params
    method = args.method
    if method == "auto":
        method = "exact" if params.p == 2 else ("closed" if closed_form_norm(f, params) is not None else "quadrature")
    if method == "exact":
        if params.p != 2:
            raise CliError("--method exact needs --p 2")
        value, error = norm2_exact(f, params.alpha), 0.0
    elif method == "closed":
        value = closed_form_norm(f, params)
        if value is None:
            raise CliError("no closed form for this function; use --method quadrature")
        error = 0.0
    else:
        est = norm_p(f, params, cfg.spec)
        value, error = est.value, est.error
    record = {"norm": value, "error": error, "route": method, "alpha": params.alpha, "p": params.p,
              "f": format_function(f)}
    _emit(_render_mapping(record, cfg.fmt), cfg.out)
    return 0


def _maybe(fn):
    """Value of ``fn()``, or ``{"log": fn(log=True)}`` when it leaves the double range."""
    try:
        return fn()
    except OverflowError:
        return {"log": fn(log=True)}


def _dera1(params, r, log):
    if not log:
        return constant_dera1(params, r)
    a = params.alpha
    # ln(K (e^x + e^{2x})) with x = alpha |z|^2 / 2
    x = a * r * r / 2.0
    return math.log(constant_dera1(params, 0.0) / 2.0) + 2.0 * x + math.log1p(math.exp(-x))


def _run_constants(cfg, args):
    params = cfg.params
    n = cfg.n if cfg.n is not None else 1
    r = abs(cfg.z) if cfg.z is not None else 0.0
    record = {
        "n": n, "alpha": params.alpha, "p": params.p, "abs_z": r,
        "taylor_remainder": _maybe(lambda log=False: constant_thm1(n, params, r, log)),
        "origin": _maybe(lambda log=False: constant_nulla(n, params, log)),
        "hilbert": _maybe(lambda log=False: constant_thm2(n, params.alpha, r, log)),
        "classical": zhu_constant(n, params.alpha),
        "classical_over_sharp": zhu_ratio(n, params),
    }
    if n == 1:
        record["first_derivative_full_norm"] = _maybe(lambda log=False: _dera1(params, r, log))
    _emit(_render_mapping(record, cfg.fmt), cfg.out)
    return 0


def _run_operators(cfg, args):
    alpha = args.alpha if args.alpha is not None else 1.0
    beta = cfg.beta if cfg.beta is not None else 2.0 * alpha
    p = args.p if args.p is not None else 2.0
    d = dnorm2_exact(alpha, beta)
    paper = dnorm2_paper(alpha, beta)
    m = mnorm2_exact(alpha, beta)
    record = {
        "alpha": alpha, "beta": beta, "gamma": beta / alpha,
        "dnorm2_exact": d.value, "dnorm2_argmax": d.argmax,
        "dnorm2_paper": paper.value, "dnorm2_paper_m": paper.m, "dnorm2_paper_degenerate": paper.degenerate,
        "dnorm2_discrepancy": abs(paper.value - d.value) > 1e-12 * d.value,
        "mnorm2_exact": m.value, "mnorm2_argmax": m.argmax, "mnorm2_claimed": mnorm2_claimed(alpha, beta),
        "dbound_general_p": dbound_general_p(alpha, beta, p), "p": p,
    }
    _emit(_render_mapping(record, cfg.fmt), cfg.out)
    return 0


def _run_example(cfg, args):
    params = cfg.params
    n = cfg.n if cfg.n is not None else 1
    z = cfg.z if cfg.z is not None else 1 + 0j
    rows = [(float(s), *example_I(float(s), n, params, z, cfg.spec)) for s in cfg.s_values]
    slope = example_Iprime0(n, params, z)
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "I", "error"])
        w.writerows([repr(s), repr(v), repr(e)] for s, v, e in rows)
        text = buf.getvalue()
    else:
        record = {"n": n, "alpha": params.alpha, "p": params.p, "z": z, "Iprime0": slope,
                  "points": [{"s": s, "I": v, "error": e} for s, v, e in rows]}
        text = _json_text(record) if cfg.fmt == "json" else (
            f"I'(0) = {slope!r}\n" + "".join(f"{s!r} {v!r} {e!r}\n" for s, v, e in rows))
    _emit(text, cfg.out)
    return 0


_COMMANDS = {
    "verify": run_verify,
    "norm": _run_norm,
    "constants": _run_constants,
    "operators": _run_operators,
    "example": _run_example,
}


def _error_record(exc, command):
    record = {"error": type(exc).__name__, "message": str(exc), "command": command}
    if isinstance(exc, FunctionSyntaxError):
        record["position"] = exc.position
    sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return 2


def main(argv=None):
    parser = build_parser()
    command = None
    try:
        args = parser.parse_args(argv)
        command = args.command
        cfg = RunConfig.from_args(args)
        return _COMMANDS[command](cfg, args)
    except (CliError, ValueError, ArithmeticError, RuntimeError, OSError) as exc:
        return _error_record(exc, command)


if __name__ == "__main__":
    sys.exit(main())
