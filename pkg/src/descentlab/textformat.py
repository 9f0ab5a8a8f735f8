"""Text formats: exact numbers (JSON + shorthand) and numeric expressions.

Shorthand grammar, e.g. "1+1i", "sqrt3*(1+1i)", "1/2 + sqrt5*1i", "i", "rho":

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom (('^'|'**') ['-'] INT)?
    atom   := NUMBER | NUMBER 'i' | NAME | NAME '(' expr ')' | '(' expr ')'
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Callable, Mapping

from .arith import ExactComplex, PrecisionContext, RealAlgebraic, RealField
from .errors import ParseError

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][-+]?\d+)?|\.\d+(?:[eE][-+]?\d+)?)(?P<imag>i(?![A-Za-z0-9_]))?"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>\*\*|[-+*/^(),]))"
)


def tokenize(text: str) -> list[tuple[str, Any]]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos} in {text!r}")
        pos = m.end()
        if m.group("num") is not None:
            out.append(("imag" if m.group("imag") else "num", Fraction(m.group("num"))))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", "^" if m.group("op") == "**" else m.group("op")))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t != ("op", op):
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        node = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = ("bin", op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            t = self.peek()
            if t in (("op", "*"), ("op", "/")):
                self.take()
                node = ("bin", t[1], node, self.unary())
            elif t[0] in ("num", "imag", "name") or t == ("op", "("):
                # implicit multiplication, e.g. "2i" handled by lexer, "2 sqrt3" here
                node = ("bin", "*", node, self.unary())
            else:
                return node

    def unary(self):
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if t == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num" or val.denominator != 1:
                raise ParseError("exponent must be an integer literal")
            return ("pow", base, sign * int(val))
        return base

    def atom(self):
        kind, val = self.take()
        if kind in ("num", "imag"):
            return (kind, val)
        if kind == "name":
            if self.peek() == ("op", "("):
                self.take()
                arg = self.expr()
                self.expect(")")
                return ("call", val, arg)
            return ("name", val)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_ast(text: str):
    return _Parser(text).parse()


_SQRT_NAME = re.compile(r"sqrt(\d+)$")


def _eval_exact(node) -> ExactComplex:
    kind = node[0]
    if kind == "num":
        return ExactComplex(node[1])
    if kind == "imag":
        return ExactComplex(0, node[1])
    if kind == "name":
        name = node[1]
        if name == "i":
            return ExactComplex(0, 1)
        if name == "rho":
            return ExactComplex(Fraction(-1, 2), RealAlgebraic.sqrt(3) * Fraction(1, 2))
        m = _SQRT_NAME.match(name)
        if m:
            return ExactComplex(RealAlgebraic.sqrt(int(m.group(1))))
        raise ParseError(f"unknown name {name!r} in exact number")
    if kind == "call":
        if node[1] != "sqrt":
            raise ParseError(f"unknown function {node[1]!r} in exact number")
        arg = _eval_exact(node[2])
        if not (arg.is_real() and arg.re.is_rational()):
            raise ParseError("sqrt() of an exact number needs a rational argument")
        q = arg.re.rational_value()
        if q.denominator != 1:
            return ExactComplex(RealAlgebraic.sqrt(q.numerator * q.denominator) / q.denominator)
        n = int(q)
        if n < 0:
            return ExactComplex(0, RealAlgebraic.sqrt(-n))
        return ExactComplex(RealAlgebraic.sqrt(n))
    if kind == "neg":
        return -_eval_exact(node[1])
    if kind == "pow":
        return _eval_exact(node[1]) ** node[2]
    if kind == "bin":
        a, b = _eval_exact(node[2]), _eval_exact(node[3])
        op = node[1]
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if b.is_zero():
            raise ParseError("division by zero")
        return a / b
    raise ParseError(f"bad node {kind}")


def _coords_from_json(fld: RealField, data) -> list[Fraction]:
    if data and isinstance(data[0], list):
        data = [x for row in data for x in row]
    if len(data) != fld.degree:
        raise ParseError(f"expected {fld.degree} coordinates for {fld}, got {len(data)}")
    try:
        return [Fraction(str(x)) for x in data]
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational coordinate: {e}") from None


def parse_exact(value) -> ExactComplex:
    """Parse the exact JSON form (dict or JSON text) or a shorthand string."""
    if isinstance(value, ExactComplex):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactComplex(value)
    if isinstance(value, str):
        s = value.strip()
        if s.startswith("{"):
            try:
                value = json.loads(s)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON: {e}") from None
        else:
            try:
                return _eval_exact(parse_ast(s))
            except ZeroDivisionError:
                raise ParseError("division by zero") from None
    if isinstance(value, Mapping):
        try:
            fld = RealField(tuple(int(g) for g in value.get("field", [])))
        except Exception as e:
            raise ParseError(f"bad field: {e}") from None
        zero = [[0] * fld.degree]
        re_ = _coords_from_json(fld, value.get("re", zero))
        im_ = _coords_from_json(fld, value.get("im", zero))
        return ExactComplex(RealAlgebraic(fld, re_), RealAlgebraic(fld, im_))
    raise ParseError(f"cannot parse exact number from {type(value).__name__}")


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def exact_to_json(z: ExactComplex) -> dict:
    return {
        "field": list(z.field.generators),
        "re": [[_frac_str(c) for c in z.re.coords]],
        "im": [[_frac_str(c) for c in z.im.coords]],
    }


# numeric expressions (values files for relation searches)

NUMERIC_FUNCS = ("log", "exp", "sqrt", "re", "im", "conj", "abs")


def eval_numeric(text: str, names: Mapping[str, Callable[[PrecisionContext], Any]] | None,
                 ctx: PrecisionContext):
    """Evaluate an expression at ctx precision.

    `names` maps identifiers to callables ctx -> number, so the same text can
    be re-evaluated at a higher precision.  Decimal literals are exact.
    """
    mp = ctx.mp
    names = dict(names or {})
    names.setdefault("pi", lambda c: c.mp.pi)
    names.setdefault("i", lambda c: c.mp.mpc(0, 1))
    names.setdefault("e", lambda c: c.mp.e)

    def ev(node):
        kind = node[0]
        if kind == "num":
            q = node[1]
            return mp.mpf(q.numerator) / q.denominator
        if kind == "imag":
            q = node[1]
            return mp.mpc(0, mp.mpf(q.numerator) / q.denominator)
        if kind == "name":
            nm = node[1]
            if nm in names:
                return names[nm](ctx)
            m = _SQRT_NAME.match(nm)
            if m:
                return mp.sqrt(int(m.group(1)))
            raise ParseError(f"unknown name {nm!r}")
        if kind == "call":
            fn, arg = node[1], ev(node[2])
            table = {"log": mp.log, "exp": mp.exp, "sqrt": mp.sqrt, "re": mp.re,
                     "im": mp.im, "conj": mp.conj, "abs": mp.fabs}
            if fn not in table:
                raise ParseError(f"unknown function {fn!r}")
            return table[fn](arg)
        if kind == "neg":
            return -ev(node[1])
        if kind == "pow":
            return ev(node[1]) ** node[2]
        a, b = ev(node[2]), ev(node[3])
        op = node[1]
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        return a / b

    return mp.mpc(ev(parse_ast(text)))
