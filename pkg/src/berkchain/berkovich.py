"""Type II points, tangent directions, open disks and Gamma-domains.

A type II point zeta_{a,q} is the sup-norm on the closed disk of center a and
radius |t|^q.  Every such point has a finite center, so a single affine
chart suffices; the direction containing infinity is called `up`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .numberfield import NFElem, poly_str
from .series import GroundElement, ZERO

# ---------------------------------------------------------------------------
# directions


@dataclass(frozen=True)
class Direction:
    """A tangent direction at some base point.

    kind is "up" (toward infinity), "down" (residue value c in F) or "class"
    (a monic irreducible polynomial over F of degree >= 2, standing for the
    Galois-conjugate down directions at its roots).
    """

    kind: str
    value: object = None

    @property
    def conjugacy_size(self):
        return len(self.value) - 1 if self.kind == "class" else 1

    def __str__(self):
        if self.kind == "up":
            return "inf"
        if self.kind == "down":
            return str(self.value)
        return "{" + poly_str(self.value, "w") + "}"


UP = Direction("up")


def down(c):
    return Direction("down", c)


def _sort_key_value(c):
    if isinstance(c, NFElem):
        return (1, tuple(c.coeffs))
    return (0, (c,))


def direction_sort_key(d):
    if d.kind == "up":
        return (0,)
    if d.kind == "down":
        return (1, _sort_key_value(d.value))
    return (2, len(d.value), tuple(_sort_key_value(c) for c in d.value))


# ---------------------------------------------------------------------------
# points


class TypeIIPoint:
    __slots__ = ("center", "q", "_hash")

    def __init__(self, center, q):
        q = Fraction(q)
        self.center = GroundElement.coerce(center).truncate(q)
        self.q = q
        self._hash = None

    def __eq__(self, o):
        return isinstance(o, TypeIIPoint) and self.q == o.q and self.center == o.center

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.center, self.q))
        return self._hash

    def key(self):
        return f"V({self.center};{self.q})"

    __str__ = key

    def __repr__(self):
        return f"TypeIIPoint({self.center}, {self.q})"

    def ramification(self):
        return lcm(self.center.ramification(), self.q.denominator)

    def dominated_by(self, other):
        """self <= other: the disk of self lies in the disk of other."""
        if self.q < other.q:
            return False
        v = (self.center - other.center).valuation()
        return v is None or v >= other.q

    def local_coordinate(self, c):
        """Residue of (c - a)/t^q for c in the closed disk of self."""
        return (GroundElement.coerce(c) - self.center).shift(-self.q).residue()

    def direction_at(self, p):
        """Direction at p containing self; None if self == p."""
        if self == p:
            return None
        if self.dominated_by(p):
            return down(p.local_coordinate(self.center))
        return UP

    def lift(self, direction, delta=None):
        """A type II point inside the open disk D(direction) at self."""
        delta = Fraction(delta) if delta is not None else Fraction(1, 2 * self.ramification())
        if direction.kind == "up":
            return TypeIIPoint(self.center, self.q - delta)
        if direction.kind == "down":
            return TypeIIPoint(self.center + GroundElement.monomial(direction.value, self.q), self.q + delta)
        raise ValueError("class directions have no representative over K")


def gauss_point():
    return TypeIIPoint(ZERO, 0)


def join(x, y):
    """The smallest point dominating both x and y."""
    v = (x.center - y.center).valuation()
    q = min(x.q, y.q) if v is None else min(x.q, y.q, v)
    return TypeIIPoint(x.center, q)


class TypeIPoint:
    """A classical point of K (or infinity when value is None)."""

    __slots__ = ("value",)

    def __init__(self, value=None):
        self.value = None if value is None else GroundElement.coerce(value)

    @property
    def is_infinity(self):
        return self.value is None

    def direction_at(self, p):
        if self.value is None:
            return UP
        v = (self.value - p.center).valuation()
        if v is None or v >= p.q:
            return down(p.local_coordinate(self.value))
        return UP

    def __eq__(self, o):
        return isinstance(o, TypeIPoint) and self.value == o.value

    def __hash__(self):
        return hash(("I", self.value))

    def __str__(self):
        return "inf" if self.value is None else str(self.value)


INFINITY = TypeIPoint(None)


def as_probe(x):
    if isinstance(x, (TypeIIPoint, TypeIPoint)) or hasattr(x, "direction_at"):
        return x
    return TypeIPoint(x)


def direction_from(x, target):
    """The tangent direction at x whose component contains target."""
    d = as_probe(target).direction_at(x)
    if d is None:
        raise ValueError("target coincides with the base point")
    return d


# ---------------------------------------------------------------------------
# open disks


@dataclass(frozen=True)
class OpenDisk:
    base: TypeIIPoint
    direction: Direction

    def contains(self, x):
        return as_probe(x).direction_at(self.base) == self.direction

    def __str__(self):
        return f"D({self.base.center};{self.base.q};{self.direction})"


def disk_relation(d1, d2):
    """'equal', 'sub' (d1 in d2), 'super' (d2 in d1), 'disjoint' or 'cover' (union is everything)."""
    if d1.base == d2.base:
        return "equal" if d1.direction == d2.direction else "disjoint"
    in2 = d2.contains(d1.base)
    in1 = d1.contains(d2.base)
    if in1 and in2:
        return "cover"
    if in2:
        return "sub"
    if in1:
        return "super"
    return "disjoint"


def disk_subset(d1, d2):
    return disk_relation(d1, d2) in ("equal", "sub")


@dataclass(frozen=True)
class SimpleDomain:
    disks: tuple

    def contains(self, x):
        return all(d.contains(x) for d in self.disks)


def contains_point(domain, x):
    return domain.contains(x)


def separates(g, x, y):
    """True iff g lies strictly between x and y (x, y probes different from g)."""
    dx = as_probe(x).direction_at(g)
    dy = as_probe(y).direction_at(g)
    return dx is not None and dy is not None and dx != dy
