"""The residue field F: either Q or Q(a) for a given irreducible polynomial.

Elements of Q are plain `Fraction`s.  Elements of Q(a) are `NFElem`s, which
interoperate with `Fraction` and `int`.  Univariate polynomials over F are
tuples of coefficients, lowest degree first, with no trailing zeros.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import sympy as sp
from sympy import QQ

_X = sp.Symbol("x")


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


class NumberField:
    """Q (minpoly None) or Q[a]/(minpoly) with minpoly monic irreducible over Q."""

    def __init__(self, minpoly=None, name="a"):
        self.name = name
        if minpoly is None:
            self.minpoly = None
            self.degree = 1
            return
        mp = tuple(_frac(c) for c in minpoly)
        while mp and mp[-1] == 0:
            mp = mp[:-1]
        if len(mp) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        lead = mp[-1]
        mp = tuple(c / lead for c in mp)
        if len(mp) == 2:
            raise ValueError("a linear minimal polynomial gives Q; pass None instead")
        if not sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(mp)], _X).is_irreducible:
            raise ValueError("minimal polynomial is reducible over Q")
        self.minpoly = mp
        self.degree = len(mp) - 1

    @property
    def is_rational(self):
        return self.minpoly is None

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(("NF", self.minpoly))

    def __repr__(self):
        if self.minpoly is None:
            return "QQ"
        return f"QQ[{self.name}]/({poly_str(self.minpoly, self.name)})"

    def describe(self):
        if self.minpoly is None:
            return "rational"
        return poly_str(self.minpoly, self.name)

    def gen(self):
        if self.minpoly is None:
            raise ValueError("Q has no generator")
        coeffs = [Fraction(0)] * self.degree
        coeffs[1] = Fraction(1)
        return NFElem(self, tuple(coeffs))

    def __call__(self, x):
        if isinstance(x, NFElem):
            if x.field != self:
                raise ValueError("element of a different number field")
            return x
        x = _frac(x)
        if self.minpoly is None:
            return x
        return NFElem(self, (x,) + (Fraction(0),) * (self.degree - 1))

    # sympy bridge -------------------------------------------------------
    def _sympy_domain(self):
        return _sympy_domain(self.minpoly)

    def to_domain(self, c):
        dom = self._sympy_domain()
        if self.minpoly is None:
            c = _frac(c)
            return QQ(c.numerator, c.denominator)
        c = self(c)
        return dom([QQ(x.numerator, x.denominator) for x in reversed(c.coeffs)])

    def from_domain(self, c):
        if self.minpoly is None:
            return _frac(c)
        lst = [_frac(x) for x in reversed(c.to_list())]
        lst += [Fraction(0)] * (self.degree - len(lst))
        return NFElem(self, tuple(lst)).simplify()


@lru_cache(maxsize=None)
def _sympy_domain(minpoly):
    if minpoly is None:
        return QQ
    expr = sum(sp.Rational(c.numerator, c.denominator) * _X**i for i, c in enumerate(minpoly))
    return QQ.algebraic_field(sp.CRootOf(expr, 0))


QQF = NumberField(None)


class NFElem:
    """Element of Q(a), coefficients in the power basis 1, a, ..., a^(k-1)."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        self.field = field
        self.coeffs = coeffs

    def simplify(self):
        """Return a Fraction when the element is rational."""
        if all(c == 0 for c in self.coeffs[1:]):
            return self.coeffs[0]
        return self

    def _other(self, o):
        if isinstance(o, NFElem):
            if o.field != self.field:
                raise ValueError("mixing elements of different number fields")
            return o.coeffs
        if isinstance(o, (int, Fraction)):
            return (Fraction(o),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def __add__(self, o):
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, tuple(a + b for a, b in zip(self.coeffs, oc))).simplify()

    __radd__ = __add__

    def __neg__(self):
        return NFElem(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, o):
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return NFElem(self.field, tuple(a - b for a, b in zip(self.coeffs, oc))).simplify()

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return NFElem(self.field, tuple(a * o for a in self.coeffs)).simplify()
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        prod = [Fraction(0)] * (2 * self.field.degree - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(oc):
                    if b:
                        prod[i + j] += a * b
        return NFElem(self.field, _reduce_mod(prod, self.field.minpoly)).simplify()

    __rmul__ = __mul__

    def inverse(self):
        # extended Euclid over Q
        a = tuple(self.coeffs)
        g, s, _ = q_ext_gcd(_ptrim_q(a), self.field.minpoly)
        if len(g) != 1:
            raise ZeroDivisionError("non-invertible element")
        inv = tuple(c / g[0] for c in s)
        return NFElem(self.field, _reduce_mod(list(inv), self.field.minpoly)).simplify()

    def __truediv__(self, o):
        if isinstance(o, (int, Fraction)):
            return NFElem(self.field, tuple(a / o for a in self.coeffs)).simplify()
        if isinstance(o, NFElem):
            return self * o.inverse()
        return NotImplemented

    def __rtruediv__(self, o):
        return self.inverse() * o

    def __pow__(self, n):
        result, base = Fraction(1), self
        if n < 0:
            base, n = self.inverse(), -n
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def __eq__(self, o):
        oc = self._other(o)
        if oc is None:
            return NotImplemented
        return self.coeffs == tuple(oc)

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"NFElem({self})"

    def __str__(self):
        return "(" + poly_str(self.coeffs, self.field.name) + ")"


def _reduce_mod(coeffs, minpoly):
    k = len(minpoly) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, k - 1, -1):
        c = coeffs[i]
        if c:
            for j in range(k):
                coeffs[i - k + j] -= c * minpoly[j]
        coeffs[i] = Fraction(0)
    coeffs = coeffs[:k] + [Fraction(0)] * (k - len(coeffs))
    return tuple(coeffs[:k])


def _ptrim_q(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def q_ext_gcd(a, b):
    """Extended Euclid over Q: returns (g, s, t) with s*a + t*b = g."""
    r0, r1 = _ptrim_q(a), _ptrim_q(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
        t0, t1 = t1, psub(t0, pmul(q, t1))
    return r0, s0, t0


# ---------------------------------------------------------------------------
# polynomials over F (tuples, low degree first)

def is_zero(c):
    return not c


def ptrim(a):
    a = [Fraction(c) if type(c) is int else c for c in a]
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def pdeg(a):
    return len(a) - 1


def padd(a, b):
    n = max(len(a), len(b))
    return ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pneg(a):
    return tuple(-c for c in a)


def psub(a, b):
    return padd(a, pneg(b))


def pscale(a, c):
    return ptrim([x * c for x in a])


def pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return ptrim(out)


def ppow(a, n):
    result = (Fraction(1),)
    for _ in range(n):
        result = pmul(result, a)
    return result


def pdivmod(a, b):
    a, b = ptrim(a), ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        c = r[-1] / lb
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - c * y
        r = list(ptrim(r))
    return ptrim(q), tuple(r)


def pmonic(a):
    a = ptrim(a)
    if not a:
        return a
    lc = a[-1]
    return tuple(c / lc for c in a)


def pgcd(a, b):
    a, b = ptrim(a), ptrim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pderiv(a):
    return ptrim([i * a[i] for i in range(1, len(a))])


def pcompose(a, b):
    """a(b(x))."""
    acc = ()
    for c in reversed(a):
        acc = padd(pmul(acc, b), (c,) if c else ())
    return acc


def pshift(a, c):
    """a(x + c)."""
    return pcompose(a, ptrim((c, Fraction(1))))


def porder(a, root):
    """Multiplicity of `root` as a root of a (a nonzero)."""
    a = ptrim(a)
    lin = (-root, Fraction(1))
    k = 0
    while a:
        q, r = pdivmod(a, lin)
        if r:
            break
        a, k = q, k + 1
    return k


def pmultiplicity(a, factor):
    a = ptrim(a)
    k = 0
    while a:
        q, r = pdivmod(a, factor)
        if r:
            break
        a, k = q, k + 1
    return k


def poly_str(a, var="x"):
    if not a:
        return "0"
    terms = []
    for i, c in enumerate(a):
        if not c:
            continue
        cs = str(c)
        if i == 0:
            terms.append(cs)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            if c == 1:
                terms.append(mon)
            elif c == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{cs}*{mon}")
    return " + ".join(terms).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# factorization

@lru_cache(maxsize=4096)
def _factor_cached(field, poly):
    dom = field._sympy_domain()
    sp_poly = sp.Poly.from_list([field.to_domain(c) for c in reversed(poly)], _X, domain=dom)
    lead, facs = sp_poly.factor_list()
    out = []
    for fac, mult in facs:
        coeffs = [field.from_domain(c) for c in reversed(fac.rep.to_list())]
        out.append((pmonic(tuple(coeffs)), mult))
    out.sort(key=lambda fm: (len(fm[0]), _sort_key(fm[0])))
    return tuple(out)


def _sort_key(poly):
    key = []
    for c in poly:
        if isinstance(c, NFElem):
            key.append(tuple(c.coeffs))
        else:
            key.append((c,))
    return tuple(key)


def factor(field, poly):
    """Monic irreducible factorization of a nonzero polynomial over F.

    Returns a tuple of (monic factor, multiplicity), sorted deterministically.
    """
    poly = ptrim(poly)
    if not poly:
        raise ValueError("cannot factor the zero polynomial")
    if len(poly) == 1:
        return ()
    return _factor_cached(field, tuple(field(c) if isinstance(c, NFElem) else _frac(c) for c in poly))


def roots_and_classes(field, poly):
    """Split a factorization into F-rational roots and higher degree classes."""
    roots, classes = [], []
    for fac, mult in factor(field, poly):
        if len(fac) == 2:
            roots.append((-fac[0], mult))
        else:
            classes.append((fac, mult))
    return roots, classes
