"""Text form of complex literals and kernel-monomial functions.

Grammar (terms joined by `` + ``)::

    term  := "km" [A=<c>] [z0=<c>] [n=<int>] [lam=<c>]
           | "mono" [A=<c>] [n=<int>]
    <c>   := a+bi | a-bi | a | bi      (no spaces)

``km A=1 z0=1+0i n=1 lam=-1+0i`` is ``(w - 1) e^{-(w - 1)}``.
"""

from __future__ import annotations

import math
import re

from .funcrep import FnExpr, KernelMonomial

__all__ = ["FunctionSyntaxError", "parse_complex", "format_complex", "parse_function", "format_function"]

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_FULL = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")


class FunctionSyntaxError(ValueError):
    """Malformed function text; ``position`` is the 0-based character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _imag_part(text):
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def parse_complex(text):
    """Parse ``a+bi`` style literals; raises ValueError on bad or non-finite input."""
    s = text.strip()
    if _REAL.match(s):
        value = complex(float(s), 0.0)
    elif m := _FULL.match(s):
        value = complex(float(m["re"]), _imag_part(m["im"]))
    elif m := _IMAG.match(s):
        value = complex(0.0, _imag_part(m["im"]))
    else:
        raise ValueError(f"not a complex literal: {text!r}")
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"non-finite literal: {text!r}")
    return value


def _fmt_real(x):
    x = float(x)
    if x == 0:
        x = 0.0
    return repr(x)


def format_complex(c):
    """Canonical ``a+bi`` text that parses back to the same value."""
    c = complex(c)
    im = c.imag if c.imag != 0 else 0.0
    sign = "-" if math.copysign(1.0, im) < 0 else "+"
    return f"{_fmt_real(c.real)}{sign}{_fmt_real(abs(im))}i"


_KEYS = {"km": ("A", "z0", "n", "lam"), "mono": ("A", "n")}


def _parse_term(chunk, offset):
    tokens = [(m.group(), offset + m.start()) for m in re.finditer(r"\S+", chunk)]
    if not tokens:
        raise FunctionSyntaxError("empty term", offset)
    kind, kpos = tokens[0]
    if kind not in _KEYS:
        raise FunctionSyntaxError(f"unknown term kind {kind!r}, expected 'km' or 'mono'", kpos)
    values = {"A": 1 + 0j, "z0": 0j, "n": 0, "lam": 0j}
    seen = set()
    for tok, pos in tokens[1:]:
        key, eq, raw = tok.partition("=")
        if not eq or key not in _KEYS[kind]:
            raise FunctionSyntaxError(f"unexpected token {tok!r} for {kind!r}", pos)
        if key in seen:
            raise FunctionSyntaxError(f"duplicate key {key!r}", pos)
        seen.add(key)
        vpos = pos + len(key) + 1
        if key == "n":
            if not re.fullmatch(r"\d+", raw):
                raise FunctionSyntaxError(f"degree must be a nonnegative integer, got {raw!r}", vpos)
            values["n"] = int(raw)
        else:
            try:
                values[key] = parse_complex(raw)
            except ValueError as exc:
                raise FunctionSyntaxError(str(exc), vpos) from None
    return KernelMonomial(values["A"], values["z0"], values["n"], values["lam"])


def parse_function(text):
    """Parse the function mini-language into an FnExpr."""
    if not text.strip():
        raise FunctionSyntaxError("empty function text", 0)
    terms = []
    start = 0
    for m in re.finditer(r"\s\+\s", text):
        terms.append(_parse_term(text[start:m.start()], start))
        start = m.end()
    terms.append(_parse_term(text[start:], start))
    return FnExpr(tuple(terms))


def format_function(f):
    """Canonical printer; ``parse_function(format_function(f)) == f``."""
    if not f.terms:
        return "km A=0.0+0.0i z0=0.0+0.0i n=0 lam=0.0+0.0i"
    return " + ".join(
        f"km A={format_complex(t.amplitude)} z0={format_complex(t.root)} "
        f"n={t.degree} lam={format_complex(t.rate)}"
        for t in f.terms
    )
