"""Orbits of type II points and certified attracting closed disks."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .berkovich import UP, OpenDisk, TypeIIPoint, TypeIPoint, disk_relation, down
from .dynamics import BerkMap, image_disk, tangent_image
from .errors import ExtensionRequired, HeightBudgetExceeded
from .puiseux import puiseux_roots
from .series import ZERO, kp_deriv, kp_eval, kp_mul, kp_scale, kp_sub, kp, ONE


@dataclass
class Orbit:
    points: list  # x_0 = start, x_1 = f(x_0), ...
    tail: int | None = None  # preperiod
    period: int | None = None
    stopped: str | None = None  # why an open orbit ended before the bound

    @property
    def closed(self):
        return self.period is not None

    def describe(self):
        if self.closed:
            return f"preperiodic(tail={self.tail}, period={self.period})"
        msg = f"open after {len(self.points) - 1} steps"
        return f"{msg} ({self.stopped})" if self.stopped else msg


def orbit_with_preperiodicity(f, x, bound=64):
    pts = [x]
    index = {x: 0}
    for _ in range(bound):
        try:
            y = f.image(pts[-1])
        except HeightBudgetExceeded as exc:
            return Orbit(pts, stopped=str(exc))
        if y in index:
            return Orbit(pts, index[y], len(pts) - index[y])
        index[y] = len(pts)
        pts.append(y)
    return Orbit(pts)


# ---------------------------------------------------------------------------
# closed disks


@dataclass(frozen=True)
class ClosedDisk:
    """{boundary} together with every direction at it except `outward`."""

    boundary: TypeIIPoint
    outward: object

    @property
    def complement(self):
        return OpenDisk(self.boundary, self.outward)

    def contains(self, x):
        return x == self.boundary or x.direction_at(self.boundary) != self.outward

    def contains_open_disk(self, disk):
        return disk_relation(disk, self.complement) == "disjoint"

    def contains_closed(self, other):
        return disk_relation(self.complement, other.complement) in ("equal", "sub")

    def describe(self):
        return {"boundary": self.boundary.key(), "excluded_direction": str(self.outward)}


def closed_disk_image(f, E):
    """f(E) as a closed disk, or None when f(E) is the whole line."""
    img = image_disk(f, E.complement)
    if img.degree_on_disk + img.surplus != f.d:
        return None
    return ClosedDisk(img.image.base, img.image.direction)


def verify_invariant_disk(f, E, gamma=(), max_period=1):
    """Smallest n <= max_period with f^n(E) strictly inside E and the images avoiding gamma.

    Returns the list [E, f(E), ..., f^n(E)] or None.
    """
    if any(g != E.boundary and E.contains(g) for g in gamma):
        return None
    chain = [E]
    for _ in range(max_period):
        nxt = closed_disk_image(f, chain[-1])
        if nxt is None:
            return None
        if E.contains_closed(nxt) and nxt.boundary != E.boundary:
            chain.append(nxt)
            return chain
        if any(nxt.contains(g) for g in gamma):
            return None
        chain.append(nxt)
    return None


# ---------------------------------------------------------------------------
# attracting cycles


@dataclass
class AttractingCycle:
    period: int
    centers: list  # center approximations (None for infinity)
    multiplier_valuation: object  # Fraction, or None for a zero multiplier
    disks: list  # certified ClosedDisk chain, disks[-1] strictly inside disks[0]
    radius_exponents: list = dc_field(default_factory=list)

    def contains_open_disk(self, disk):
        return any(E.contains_open_disk(disk) for E in self.disks[:-1])

    def describe(self):
        return {
            "period": self.period,
            "centers": ["inf" if c is None else str(c) for c in self.centers],
            "multiplier_valuation": "inf" if self.multiplier_valuation is None else str(self.multiplier_valuation),
            "disks": [E.describe() for E in self.disks[:-1]],
        }


def _rev(p, d):
    p = tuple(p) + (ZERO,) * (d + 1 - len(p))
    return kp(p[::-1])


def _derivative_valuation(f, x):
    """v of the derivative of f at x in the charts z (finite) or 1/z (infinity)."""
    N, D = (f.P, f.Q) if x is not None else (_rev(f.P, f.d), _rev(f.Q, f.d))
    p = x if x is not None else ZERO
    if not kp_eval(D, p):
        N, D = D, N  # image is infinity
    num = kp_sub(kp_mul(kp_deriv(N), D), kp_mul(N, kp_deriv(D)))
    val = kp_eval(num, p)
    if not val:
        return None
    return val.valuation() - 2 * kp_eval(D, p).valuation()


def _multiplier_valuation(f, a, n, precision):
    """v of the multiplier of the n-cycle through a (None for a zero multiplier), and the cycle."""
    total = Fraction(0)
    x = a
    centers = []
    for _ in range(n):
        centers.append(x)
        v = _derivative_valuation(f, x)
        if v is None:
            total = None
        elif total is not None:
            total += v
        x = f(x)
        if x is not None:
            x = x.truncate(precision)
    return total, centers


def _infinity_multiplier(f):
    dp, dq = len(f.P) - 1, len(f.Q) - 1
    if dp <= dq:
        return "not-fixed"
    if dp >= dq + 2:
        return None
    return (f.Q[-1] / f.P[-1]).valuation()


def _scan_range(f, gamma):
    vals = [abs(c.valuation()) for c in f.coefficients() if c]
    vals += [abs(g.q) for g in gamma]
    vals += [abs(g.center.valuation()) for g in gamma if g.center]
    bound = int(max(vals, default=0)) + 2
    return -bound, bound


def find_attracting_cycles(f, max_period=1, precision=None, gamma=(), extend="auto", log=None, periods=None):
    """Attracting periodic points with certified invariant closed disks.

    Disks are scanned over radius exponents in (1/e)Z (e the ramification
    of f and gamma) and the largest verifiable one avoiding gamma is kept.
    """
    gamma = list(gamma)
    e = f.ramification()
    for g in gamma:
        r = g.ramification()
        e = e * r // _gcd(e, r)
    step = Fraction(1, e)
    lo, hi = _scan_range(f, gamma)
    precision = Fraction(precision) if precision is not None else Fraction(hi + 2)
    found = []
    log = log if log is not None else []

    periods = list(periods) if periods is not None else list(range(1, max_period + 1))

    # infinity (period one)
    mult = _infinity_multiplier(f)
    if 1 in periods and mult != "not-fixed" and (mult is None or mult > 0):
        q = Fraction(hi)
        while q >= lo:
            E = ClosedDisk(TypeIIPoint(ZERO, q), down(Fraction(0)))
            chain = _verify_or_none(f, E, gamma, 1)
            if chain:
                found.append(AttractingCycle(1, [None], mult, chain, [q]))
                break
            q -= step

    for n in periods:
        g = f.iterate(n) if n > 1 else f
        poly = kp_sub(g.P, kp_mul(kp([ZERO, ONE]), g.Q))
        try:
            res = puiseux_roots(poly, precision, f.field, extend)
        except ExtensionRequired as exc:
            log.append(f"period {n}: {exc}")
            continue
        for root in res.roots:
            if not root.resolved:
                continue
            a = root.value
            if any(E.contains(TypeIIPoint(a, precision)) for cyc in found for E in cyc.disks[:-1]):
                continue
            mv, centers = _multiplier_valuation(f, a, n, precision)
            if mv is not None and mv <= 0:
                continue
            limit = root.attained if root.attained is not None else precision
            q = Fraction(lo)
            while q <= limit:
                E = ClosedDisk(TypeIIPoint(a, q), UP)
                chain = _verify_or_none(f, E, gamma, n)
                if chain and len(chain) - 1 == n:
                    found.append(AttractingCycle(n, centers, mv, chain, [D.boundary.q for D in chain[:-1]]))
                    break
                q += step
    return found


def _verify_or_none(f, E, gamma, n):
    try:
        return verify_invariant_disk(f, E, gamma, n)
    except HeightBudgetExceeded:
        return None


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a
