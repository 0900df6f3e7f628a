"""Exact arithmetic in K = F(t^(1/e)) with the t-adic valuation v(t) = 1.

A `GroundElement` is a quotient of two Puiseux polynomials (finite sums of
c * t^q with q rational).  Ramification is implicit: it is the lcm of the
exponent denominators that actually occur.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm

from .numberfield import NFElem, pgcd, pdivmod, ptrim

# ---------------------------------------------------------------------------
# Puiseux polynomials: tuples of (exponent, coefficient), sorted, nonzero


def _pp_norm(d):
    return tuple(sorted((e, c) for e, c in d.items() if c))


def pp_add(a, b):
    d = dict(a)
    for e, c in b:
        d[e] = d.get(e, 0) + c
    return _pp_norm(d)


def pp_neg(a):
    return tuple((e, -c) for e, c in a)


def pp_mul(a, b):
    if not a or not b:
        return ()
    d = {}
    for e1, c1 in a:
        for e2, c2 in b:
            e = e1 + e2
            d[e] = d.get(e, 0) + c1 * c2
    return _pp_norm(d)


def pp_scale(a, c, shift=Fraction(0)):
    """c * t^shift * a."""
    if not c:
        return ()
    return tuple((e + shift, x * c) for e, x in a if x * c)


def pp_truncate(a, q):
    return tuple((e, c) for e, c in a if e < q)


def _ramification(*pps):
    return reduce(lcm, (e.denominator for pp in pps for e, _ in pp), 1)


def _to_spoly(pp, e, shift):
    """Puiseux poly (all exponents >= shift) to a polynomial in s = t^(1/e)."""
    n = max(int((x - shift) * e) for x, _ in pp)
    out = [Fraction(0)] * (n + 1)
    for x, c in pp:
        out[int((x - shift) * e)] = c
    return ptrim(out)


def _from_spoly(poly, e, shift):
    return _pp_norm({shift + Fraction(i, e): c for i, c in enumerate(poly) if c})


# ---------------------------------------------------------------------------


class GroundElement:
    """num/den with den = 1 + (positive order terms) and gcd(num, den) = 1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=((Fraction(0), Fraction(1)),), _normalized=False):
        if not _normalized:
            num, den = _normalize(tuple(num), tuple(den))
        self.num = num
        self.den = den
        self._hash = None

    # constructors ------------------------------------------------------
    @classmethod
    def const(cls, c):
        if not c:
            return ZERO
        return cls(((Fraction(0), c),), _ONE_PP, _normalized=True)

    @classmethod
    def monomial(cls, c, q):
        if not c:
            return ZERO
        return cls(((Fraction(q), c),), _ONE_PP, _normalized=True)

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GroundElement):
            return x
        if isinstance(x, (int, Fraction, NFElem)):
            return cls.const(x if not isinstance(x, int) else Fraction(x))
        raise TypeError(f"cannot coerce {type(x).__name__} to GroundElement")

    # basic predicates ---------------------------------------------------
    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        return self.den == _ONE_PP

    def valuation(self):
        """Order at t = 0; None stands for +infinity."""
        if not self.num:
            return None
        return self.num[0][0] - self.den[0][0]

    def lead(self):
        return self.num[0][1] / self.den[0][1] if self.num else Fraction(0)

    def ramification(self):
        return _ramification(self.num, self.den)

    def residue(self):
        """Reduction of an element of the valuation ring."""
        v = self.valuation()
        if v is None or v > 0:
            return Fraction(0)
        if v < 0:
            raise ValueError("residue of an element with negative valuation")
        return self.lead()

    def coefficients(self):
        """Field elements occurring in num and den (used to infer F)."""
        return [c for _, c in self.num] + [c for _, c in self.den]

    # arithmetic ---------------------------------------------------------
    def __add__(self, o):
        o = _co(o)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return GroundElement(pp_add(self.num, o.num), self.den)
        return GroundElement(
            pp_add(pp_mul(self.num, o.den), pp_mul(o.num, self.den)), pp_mul(self.den, o.den)
        )

    __radd__ = __add__

    def __neg__(self):
        return GroundElement(pp_neg(self.num), self.den, _normalized=True)

    def __sub__(self, o):
        o = _co(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = _co(o)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return ZERO
        if self.den == _ONE_PP and o.den == _ONE_PP:
            return GroundElement(pp_mul(self.num, o.num), _ONE_PP, _normalized=True)
        return GroundElement(pp_mul(self.num, o.num), pp_mul(self.den, o.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero in K")
        return GroundElement(self.den, self.num)

    def __truediv__(self, o):
        o = _co(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        return _co(o) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, q):
        """self * t^q."""
        q = Fraction(q)
        return GroundElement(tuple((e + q, c) for e, c in self.num), self.den, _normalized=True)

    # comparison ---------------------------------------------------------
    def __eq__(self, o):
        o = _co(o)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # expansion ----------------------------------------------------------
    def expand(self, q):
        """Puiseux polynomial p with v(self - p) >= q; exponents of p are < q."""
        q = Fraction(q)
        if not self.num:
            return ()
        if self.den == _ONE_PP:
            return pp_truncate(self.num, q)
        m = self.num[0][0]
        bound = q - m  # need terms of 1/den below this exponent
        r = pp_add(self.den, ((Fraction(0), Fraction(-1)),))  # den - 1
        neg_r = pp_truncate(pp_neg(r), bound)
        inv = ((Fraction(0), Fraction(1)),)
        power = inv
        if neg_r:
            while True:
                power = pp_truncate(pp_mul(power, neg_r), bound)
                if not power:
                    break
                inv = pp_add(inv, power)
        return pp_truncate(pp_mul(self.num, inv), q)

    def truncate(self, q):
        return GroundElement(self.expand(q), _ONE_PP, _normalized=True)

    def coefficient(self, q):
        """Coefficient of t^q in the Laurent-Puiseux expansion."""
        q = Fraction(q)
        for e, c in self.expand(q + 1):
            if e == q:
                return c
        return Fraction(0)

    # display ------------------------------------------------------------
    def __str__(self):
        if not self.num:
            return "0"
        if self.den == _ONE_PP:
            return pp_str(self.num)
        return f"({pp_str(self.num)})/({pp_str(self.den)})"

    def __repr__(self):
        return f"GroundElement({self})"


def _co(o):
    if isinstance(o, GroundElement):
        return o
    if isinstance(o, (int, Fraction, NFElem)):
        return GroundElement.const(Fraction(o) if isinstance(o, int) else o)
    return None


_ONE_PP = ((Fraction(0), Fraction(1)),)


def _normalize(num, den):
    num = _pp_norm(dict(num)) if num and not _sorted_nonzero(num) else num
    den = _pp_norm(dict(den)) if not _sorted_nonzero(den) else den
    if not den:
        raise ZeroDivisionError("zero denominator in K")
    if not num:
        return (), _ONE_PP
    e0, c0 = den[0]
    if len(den) == 1:
        return pp_scale(num, 1 / c0, -e0), _ONE_PP
    num = pp_scale(num, 1 / c0, -e0)
    den = pp_scale(den, 1 / c0, -e0)
    e = _ramification(num, den)
    m = num[0][0]
    n_s = _to_spoly(num, e, m)
    d_s = _to_spoly(den, e, Fraction(0))
    g = pgcd(n_s, d_s)
    if len(g) > 1:
        g = tuple(c / g[0] for c in g)  # g(0) = 1 since d_s(0) = 1
        n_s = pdivmod(n_s, g)[0]
        d_s = pdivmod(d_s, g)[0]
    if len(d_s) == 1:
        return _from_spoly(n_s, e, m), _ONE_PP
    return _from_spoly(n_s, e, m), _from_spoly(d_s, e, Fraction(0))


def _sorted_nonzero(pp):
    prev = None
    for e, c in pp:
        if not c or (prev is not None and e <= prev):
            return False
        prev = e
    return True


def _exp_str(q):
    if q.denominator == 1:
        return f"t^{q.numerator}" if q.numerator >= 0 else f"t^({q.numerator})"
    return f"t^({q.numerator}/{q.denominator})"


def pp_str(pp):
    if not pp:
        return "0"
    parts = []
    for e, c in pp:
        cs = str(c)
        if e == 0:
            parts.append(cs)
            continue
        mon = "t" if e == 1 else _exp_str(e)
        if c == 1:
            parts.append(mon)
        elif c == -1:
            parts.append("-" + mon)
        else:
            parts.append(f"{cs}*{mon}")
    return " + ".join(parts).replace("+ -", "- ")


ZERO = GroundElement((), _ONE_PP, _normalized=True)
ONE = GroundElement(_ONE_PP, _ONE_PP, _normalized=True)
T = GroundElement(((Fraction(1), Fraction(1)),), _ONE_PP, _normalized=True)


def valuation(x):
    """v(x) as a Fraction, or None for x = 0 (valuation +infinity)."""
    return GroundElement.coerce(x).valuation()


def t_power(q):
    return GroundElement.monomial(Fraction(1), Fraction(q))


# ---------------------------------------------------------------------------
# polynomials over K: tuples of GroundElement, low degree first


def kp(coeffs):
    out = [GroundElement.coerce(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def kp_deg(p):
    return len(p) - 1


def kp_add(a, b):
    n = max(len(a), len(b))
    return kp([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])


def kp_neg(a):
    return tuple(-c for c in a)


def kp_sub(a, b):
    return kp_add(a, kp_neg(b))


def kp_scale(a, c):
    c = GroundElement.coerce(c)
    return kp([x * c for x in a])


def kp_mul(a, b):
    if not a or not b:
        return ()
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return kp(out)


def kp_pow(a, n):
    out = (ONE,)
    for _ in range(n):
        out = kp_mul(out, a)
    return out


def kp_eval(p, x):
    x = GroundElement.coerce(x)
    acc = ZERO
    for c in reversed(p):
        acc = acc * x + c
    return acc


def kp_deriv(p):
    return kp([p[i] * i for i in range(1, len(p))])


def kp_compose(a, b):
    acc = ()
    for c in reversed(a):
        acc = kp_add(kp_mul(acc, b), (c,) if c else ())
    return acc


def kp_affine(p, a, rho):
    """p(a + rho * w) as a polynomial in w."""
    return kp_compose(p, kp([a, rho]))


def kp_divmod(a, b):
    b = kp(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(kp(a))
    q = [ZERO] * max(len(r) - len(b) + 1, 0)
    lb = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lb
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        r = list(kp(r))
    return kp(q), tuple(r)


def kp_monic(a):
    a = kp(a)
    if not a:
        return a
    lc = a[-1]
    return tuple(c / lc for c in a)


def kp_gcd(a, b):
    a, b = kp(a), kp(b)
    while b:
        a, b = b, kp_divmod(a, b)[1]
    return kp_monic(a)


def kp_str(p, var="z"):
    if not p:
        return "0"
    parts = []
    for i, c in enumerate(p):
        if not c:
            continue
        cs = str(c)
        if i == 0:
            parts.append(f"({cs})")
        else:
            mon = var if i == 1 else f"{var}^{i}"
            parts.append(mon if c == ONE else f"({cs})*{mon}")
    return " + ".join(parts)


def gauss_valuation(p):
    """min v(c_i); None for the zero polynomial."""
    vals = [c.valuation() for c in p if c]
    return min(vals) if vals else None


def gauss_reduction(p):
    """(v, reduced polynomial over F) with p = t^v (pbar + higher order)."""
    v = gauss_valuation(p)
    if v is None:
        return None, ()
    red = [c.lead() if c and c.valuation() == v else Fraction(0) for c in p]
    return v, ptrim(red)


# ---------------------------------------------------------------------------
# Newton polygons


@dataclass(frozen=True)
class Segment:
    slope: Fraction
    length: int
    start: int

    @property
    def root_valuation(self):
        return -self.slope


@dataclass(frozen=True)
class NewtonPolygon:
    segments: tuple
    zero_order: int  # multiplicity of the root z = 0

    def root_valuations(self):
        """Multiset {valuation: count} of the nonzero roots."""
        out = {}
        for s in self.segments:
            out[s.root_valuation] = out.get(s.root_valuation, 0) + s.length
        return out


def newton_polygon(p):
    p = kp(p)
    if not p:
        raise ValueError("Newton polygon of the zero polynomial")
    pts = [(i, c.valuation()) for i, c in enumerate(p) if c]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # keep lower hull: drop middle point if it lies on/above the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append(Segment(Fraction(y2 - y1) / (x2 - x1), x2 - x1, x1))
    return NewtonPolygon(tuple(segs), pts[0][0])


def count_roots_in_valuation_range(p, lo=None, hi=None, lo_open=False, hi_open=False):
    """Roots (with multiplicity, over the algebraic closure) with v(x) in the range.

    lo=None means -infinity; hi=None means +infinity, and the root z = 0
    (valuation +infinity) is counted when hi is None and hi_open is False.
    """
    poly = newton_polygon(p)
    total = 0
    for v, n in poly.root_valuations().items():
        if lo is not None and (v < lo or (lo_open and v == lo)):
            continue
        if hi is not None and (v > hi or (hi_open and v == hi)):
            continue
        total += n
    if hi is None and not hi_open:
        total += poly.zero_order
    return total


def residual_polynomial(p, seg):
    """Residue polynomial phi(c) of the segment: sum of lc(a_i) c^(i - start)."""
    out = []
    for i in range(seg.start, seg.start + seg.length + 1):
        c = p[i] if i < len(p) else ZERO
        on_line = c and c.valuation() == p[seg.start].valuation() + seg.slope * (i - seg.start)
        out.append(c.lead() if on_line else Fraction(0))
    return ptrim(out)
