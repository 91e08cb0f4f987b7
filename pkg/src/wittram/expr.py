"""The input expression grammar and the canonical printer.

    expr  := ["-"] prod (("+"|"-") prod)*
    prod  := atom (("*"|"/") atom)*
    atom  := coeff | "x" | "X" | "t" | "(" expr ")" | atom "^" exponent
    coeff := integer | "g" | "g" "^" int
    exponent := ["-"] int | "(" ["-"] int ["/" int] ")"

Whitespace is insignificant.  Witt vectors are bracketed comma lists.
Fractional exponents are only meaningful on t (ramified roots of the
uniformizer); they are printed parenthesised, e.g. t^(1/2).

The printer emits a canonical form (expanded numerator/denominator, terms in
descending degree) on which parse-then-print is the identity.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExprSyntaxError, FieldError, WittramError
from .fq import Fq, FqElem
from .laurent import KElem
from .poly import Poly, Ring
from .ratfunc import RatFunc
from .witt import WittVec


class _Tokenizer:
    def __init__(self, src: str):
        self.src = src
        self.pos = 0
        self.line = 1
        self.col = 0
        self.tokens: list[tuple[str, str, int, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        i = 0
        line, col = 1, 0
        src = self.src
        while i < len(src):
            ch = src[i]
            if ch == "\n":
                line += 1
                col = 0
                i += 1
                continue
            if ch.isspace():
                i += 1
                col += 1
                continue
            if ch.isdigit():
                j = i
                while j < len(src) and src[j].isdigit():
                    j += 1
                self.tokens.append(("int", src[i:j], line, col))
                col += j - i
                i = j
                continue
            if ch in "+-*/^()[],":
                self.tokens.append((ch, ch, line, col))
                i += 1
                col += 1
                continue
            if ch in "xXtg":
                self.tokens.append(("sym", ch, line, col))
                i += 1
                col += 1
                continue
            raise ExprSyntaxError(f"unexpected character {ch!r}", line, col)
        self.tokens.append(("end", "", line, col))

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2], tok[3])
        return tok


class Parser:
    """Parses expressions over F_q (symbols x, g) or over K (X, t, g)."""

    def __init__(self, field: Fq, laurent: bool):
        self.field = field
        self.ring = Ring(field, laurent)

    # -- public entry points -------------------------------------------------
    def parse(self, src: str) -> RatFunc:
        tz = _Tokenizer(src)
        value = self._expr(tz)
        tok = tz.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"trailing input {tok[1]!r}", tok[2], tok[3])
        return value

    def parse_witt(self, src: str) -> WittVec:
        tz = _Tokenizer(src)
        tz.expect("[")
        entries = [self._expr(tz)]
        while tz.peek()[0] == ",":
            tz.next()
            entries.append(self._expr(tz))
        tz.expect("]")
        tok = tz.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"trailing input {tok[1]!r}", tok[2], tok[3])
        return WittVec(self.ring, entries)

    # -- grammar -------------------------------------------------------------
    def _expr(self, tz) -> RatFunc:
        negate = False
        if tz.peek()[0] == "-":
            tz.next()
            negate = True
        value = self._prod(tz)
        if negate:
            value = -value
        while tz.peek()[0] in ("+", "-"):
            op = tz.next()[0]
            rhs = self._prod(tz)
            value = value + rhs if op == "+" else value - rhs
        return value

    def _prod(self, tz) -> RatFunc:
        value = self._power(tz)
        while tz.peek()[0] in ("*", "/"):
            op = tz.next()[0]
            rhs = self._power(tz)
            value = value * rhs if op == "*" else value / rhs
        return value

    def _power(self, tz) -> RatFunc:
        base_tok = tz.peek()
        value = self._atom(tz)
        while tz.peek()[0] == "^":
            tz.next()
            exp = self._exponent(tz)
            if exp.denominator != 1:
                if base_tok[0] == "sym" and base_tok[1] == "t":
                    value = RatFunc.const(self.ring, KElem.t_power(self.field, exp))
                else:
                    raise ExprSyntaxError(
                        "fractional exponents are only allowed on t",
                        base_tok[2],
                        base_tok[3],
                    )
            else:
                value = value ** int(exp)
        return value

    def _exponent(self, tz) -> Fraction:
        tok = tz.peek()
        if tok[0] == "(":
            tz.next()
            sign = 1
            if tz.peek()[0] == "-":
                tz.next()
                sign = -1
            num = int(tz.expect("int")[1])
            den = 1
            if tz.peek()[0] == "/":
                tz.next()
                den = int(tz.expect("int")[1])
            tz.expect(")")
            return Fraction(sign * num, den)
        sign = 1
        if tok[0] == "-":
            tz.next()
            sign = -1
        return Fraction(sign * int(tz.expect("int")[1]))

    def _atom(self, tz) -> RatFunc:
        tok = tz.next()
        kind, text, line, col = tok
        if kind == "int":
            return RatFunc.const(self.ring, self.ring.from_int(int(text)))
        if kind == "sym":
            if text in ("x", "X"):
                return RatFunc.x(self.ring)
            if text == "t":
                if not self.ring.laurent:
                    raise FieldError("t is not available over the residue field")
                return RatFunc.const(self.ring, KElem.t_power(self.field, 1))
            if text == "g":
                return RatFunc.const(self.ring, self.field.gen())
        if kind == "(":
            value = self._expr(tz)
            tz.expect(")")
            return value
        raise ExprSyntaxError(f"unexpected token {text!r}", line, col)


# ---------------------------------------------------------------------------
# canonical printing


def render_fq(c: FqElem) -> str:
    return str(c)


def render_kelem(c: KElem) -> str:
    return str(c)


def _render_coeff(c, need_parens: bool) -> str:
    s = str(c)
    if need_parens and any(op in s for op in "+-*") and not (s.startswith("(") and s.endswith(")")):
        return f"({s})"
    return s


def render_poly(poly: Poly, var: str) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    for d in sorted(poly.coeffs, reverse=True):
        c = poly.coeffs[d]
        cs = _render_coeff(c, need_parens=(d > 0))
        if d == 0:
            parts.append(cs)
        elif d == 1:
            parts.append(var if cs == "1" else f"{cs}*{var}")
        else:
            parts.append(f"{var}^{d}" if cs == "1" else f"{cs}*{var}^{d}")
    return "+".join(parts)


def render_ratfunc(f: RatFunc, var: str | None = None) -> str:
    if var is None:
        var = "X" if f.ring.laurent else "x"
    num = render_poly(f.num, var)
    if f.den.is_const() and str(f.den.coeff(0)) == "1":
        return num if f.num.is_const() or "+" not in num else f"({num})"
    num_s = num if f.num.is_const() and "+" not in num else f"({num})"
    den_s = f"({render_poly(f.den, var)})"
    return f"{num_s}/{den_s}"


def render_witt(vec: WittVec, var: str | None = None) -> str:
    return "[" + ", ".join(render_ratfunc(f, var) for f in vec.entries) + "]"


def render_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_fraction(s: str) -> Fraction:
    return Fraction(s)
