"""Parser for the shared expression grammar.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?
    atom   := integer | 't' | 'z' | 'a' | '(' expr ')'
    exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'

Rational exponents are only accepted on pure powers of t.  The symbol `a`
denotes the generator of the residue field when one is configured.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .series import ONE, ZERO, GroundElement, kp, kp_add, kp_divmod, kp_gcd, kp_mul, kp_neg, kp_scale

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


class RatZ:
    """A rational function num(z)/den(z) over K (not reduced until `reduced`)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=(ONE,)):
        self.num = kp(num)
        self.den = kp(den)
        if not self.den:
            raise ZeroDivisionError("division by zero")

    @classmethod
    def ground(cls, c):
        return cls((GroundElement.coerce(c),))

    def __add__(self, o):
        if self.den == o.den:
            return RatZ(kp_add(self.num, o.num), self.den)
        return RatZ(kp_add(kp_mul(self.num, o.den), kp_mul(o.num, self.den)), kp_mul(self.den, o.den))

    def __neg__(self):
        return RatZ(kp_neg(self.num), self.den)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        return RatZ(kp_mul(self.num, o.num), kp_mul(self.den, o.den))

    def __truediv__(self, o):
        if not o.num:
            raise ZeroDivisionError("division by zero")
        return RatZ(kp_mul(self.num, o.den), kp_mul(self.den, o.num))

    def __pow__(self, n):
        if n < 0:
            return RatZ(self.den, self.num) ** (-n)
        out = RatZ((ONE,))
        for _ in range(n):
            out = out * self
        return out

    def is_ground(self):
        return len(self.num) <= 1 and len(self.den) == 1

    def as_ground(self):
        if not self.is_ground():
            raise ValueError("expression depends on z")
        return (self.num[0] if self.num else ZERO) / self.den[0]

    def reduced(self):
        """Cancel the gcd; normalize so the denominator is monic."""
        if not self.num:
            return RatZ((), (ONE,))
        g = kp_gcd(self.num, self.den)
        num, den = self.num, self.den
        if len(g) > 1:
            num = kp_divmod(num, g)[0]
            den = kp_divmod(den, g)[0]
        lc = den[-1]
        return RatZ(kp_scale(num, 1 / lc), kp_scale(den, 1 / lc))


class _Parser:
    def __init__(self, text, field=None):
        self.text = text
        self.field = field
        self.tokens = [
            (m.group(1) or m.group(2) or m.group(3), m.start(m.lastindex)) for m in _TOKEN.finditer(text)
        ]
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self):
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'}, found {tok or 'end of input'}", self.pos(), self.text)
        self.i += 1
        return tok

    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", 0, self.text)
        val = self.expr()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}", self.pos(), self.text)
        return val

    def expr(self):
        val = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while self.peek() in ("*", "/"):
            op, at = self.take(), self.pos()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                try:
                    val = val / rhs
                except ZeroDivisionError:
                    raise ParseError("division by zero", at, self.text) from None
        return val

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        start = self.pos()
        base_tok = self.peek()
        base = self.atom()
        if self.peek() != "^":
            return base
        self.take("^")
        at = self.pos()
        exp = self.exponent()
        if exp.denominator == 1:
            try:
                return base ** exp.numerator
            except ZeroDivisionError:
                raise ParseError("zero raised to a negative power", at, self.text) from None
        if base_tok != "t":
            raise ParseError("rational exponents are only allowed on t", start, self.text)
        return RatZ.ground(GroundElement.monomial(Fraction(1), exp))

    def exponent(self):
        if self.peek() == "(":
            self.take("(")
            sign = -1 if self.peek() == "-" and self.take() else 1
            n = self.integer()
            d = 1
            if self.peek() == "/":
                self.take()
                d = self.integer()
                if d == 0:
                    raise ParseError("zero denominator in exponent", self.pos(), self.text)
            self.take(")")
            return Fraction(sign * n, d)
        sign = -1 if self.peek() == "-" and self.take() else 1
        return Fraction(sign * self.integer())

    def integer(self):
        tok = self.peek()
        if tok is None or not tok.isdigit():
            raise ParseError(f"expected an integer, found {tok or 'end of input'}", self.pos(), self.text)
        self.take()
        return int(tok)

    def atom(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.pos(), self.text)
        if tok.isdigit():
            self.take()
            return RatZ.ground(Fraction(int(tok)))
        if tok == "t":
            self.take()
            return RatZ.ground(GroundElement.monomial(Fraction(1), 1))
        if tok == "z":
            self.take()
            return RatZ((ZERO, ONE))
        if tok == "a":
            if self.field is None or self.field.is_rational:
                raise ParseError("symbol 'a' needs a number field", self.pos(), self.text)
            self.take()
            return RatZ.ground(self.field.gen())
        if tok == "(":
            self.take()
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected token {tok!r}", self.pos(), self.text)


def parse_rational_function(text, field=None):
    return _Parser(text, field).parse()


def parse_ground(text, field=None):
    val = parse_rational_function(text, field)
    if not val.is_ground():
        raise ParseError("expected an element of K (no z)", 0, text)
    return val.as_ground()


def parse_rational(text):
    """A rational number such as '-1/2'."""
    m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*", str(text))
    if not m:
        raise ParseError(f"not a rational number: {text!r}", 0, str(text))
    den = int(m.group(2) or 1)
    if den == 0:
        raise ParseError("zero denominator", 0, str(text))
    return Fraction(int(m.group(1)), den)


def parse_field_polynomial(text):
    """Minimal polynomial in the symbol a with rational coefficients, low degree first."""
    val = _Parser(text.replace("a", "z"), None).parse()
    if len(val.den) != 1 or val.den[0].valuation() is None:
        raise ParseError("minimal polynomial must be a polynomial", 0, text)
    coeffs = []
    for c in val.num:
        c = c / val.den[0]
        if c and (not c.is_polynomial() or len(c.num) != 1 or c.num[0][0] != 0):
            raise ParseError("minimal polynomial must have rational coefficients", 0, text)
        coeffs.append(c.lead() if c else Fraction(0))
    return tuple(coeffs)
