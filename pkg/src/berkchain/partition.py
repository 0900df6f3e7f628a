"""Classification of Gamma-domains, stability, state spaces and limit boundaries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .berkovich import UP, Direction, OpenDisk, disk_relation, down, direction_sort_key
from .cycles import ClosedDisk, verify_invariant_disk
from .dynamics import count_preimages_in_simple_domain, disk_count, image_disk, root_direction_counts
from .errors import HeightBudgetExceeded, Inconclusive, NotStable
from .numberfield import NFElem, roots_and_classes
from .series import kp_scale, kp_sub
from .vertexset import DiskState, InnerState, VertexSet, VertexState, locate


@dataclass
class DomainClass:
    """Verdict for a Gamma-domain: 'J' (with first hitting time n), 'F' or 'inconclusive'."""

    verdict: str
    n: int | None = None
    certificate: dict = dc_field(default_factory=dict)

    @property
    def is_J(self):
        return self.verdict == "J"

    @property
    def is_F(self):
        return self.verdict == "F"

    def describe(self):
        out = {"verdict": self.verdict}
        if self.n is not None:
            out["n"] = self.n
        out.update(self.certificate)
        return out


def _gamma_list(gamma):
    return list(gamma.points if isinstance(gamma, VertexSet) else gamma)


def _disk_key(D):
    return f"D({D.base.center};{D.base.q};{D.direction})"


# ---------------------------------------------------------------------------
# wandering disks with a Moebius return map


def _mob(num, den):
    n = tuple(num) + (0,) * (2 - len(num))
    d = tuple(den) + (0,) * (2 - len(den))
    return ((n[1], n[0]), (d[1], d[0]))


def _mob_mul(A, B):
    (a, b), (c, d) = A
    (e, f), (g, h) = B
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def _mob_inv(A):
    (a, b), (c, d) = A
    return ((d, -b), (-c, a))


def _mob_apply(A, w):
    """Action on P^1(F); None is infinity."""
    (a, b), (c, d) = A
    if w is None:
        return None if not c else a / c
    den = c * w + d
    if not den:
        return None
    return (a * w + b) / den


def _is_scalar(A):
    (a, b), (c, d) = A
    return not b and not c and a == d


def _dir_coord(v):
    if v.kind == "up":
        return None
    return v.value


def _rational_int(x):
    if isinstance(x, NFElem):
        x = x.simplify()
        if isinstance(x, NFElem):
            return None
    x = Fraction(x)
    return int(x) if x.denominator == 1 else None


def _height(x):
    return max(abs(x.numerator), abs(x.denominator))


def _fixed_points(A, field):
    (a, b), (c, d) = A
    if not c:
        pts = [None]
        if a != d:
            pts.append(b / (a - d))
        return pts, True
    roots, classes = roots_and_classes(field, (-b, d - a, c))
    if classes:
        return [], False
    return [r for r, _ in roots], True


def _positive_surplus_directions(f, x):
    cands = set(root_direction_counts(f.Q, f.d, x, f.field))
    b = f.image(x).center
    cands |= set(root_direction_counts(kp_sub(f.P, kp_scale(f.Q, b)), f.d, x, f.field))
    return {v for v in cands if f.surplus(x, v) > 0}


def wandering_certificate(f, gamma, bases, dirs):
    """Certificate that the disk orbit returning to bases[0] never meets gamma.

    bases[0..p] with bases[p] == bases[0]; dirs[j] is the direction of the
    j-th disk.  Returns a dict or None.
    """
    p = len(bases) - 1
    mats = []
    for j in range(p):
        tm = f.local(bases[j]).tangent
        if tm.degree != 1:
            return None
        mats.append(_mob(tm.num, tm.den))
    A = ((1, 0), (0, 1))
    partial = [A]
    for M in mats:
        A = _mob_mul(M, A)
        partial.append(A)
    if dirs[0].kind == "class":
        return None
    B = A
    for _ in range(12):
        if _is_scalar(B):
            return None  # finite order: the orbit is periodic
        B = _mob_mul(A, B)

    bad = []
    for j in range(p):
        x = bases[j]
        occ = {g.direction_at(x) for g in gamma if g != x}
        occ |= _positive_surplus_directions(f, x)
        inv = _mob_inv(partial[j])
        for v in occ:
            if v.kind == "class":
                continue
            bad.append(_mob_apply(inv, _dir_coord(v)))

    fixed, split = _fixed_points(A, f.field)
    if not split:
        return None
    w0 = _dir_coord(dirs[0])
    if len(fixed) == 1:
        fp = fixed[0]
        to_u = ((0, 1), (1, -fp)) if fp is not None else ((1, 0), (0, 1))
        u0 = _mob_apply(to_u, w0)
        tau = _mob_apply(to_u, _mob_apply(A, w0)) - u0
        for b in bad:
            ub = _mob_apply(to_u, b)
            if ub is None:
                continue
            k = _rational_int((ub - u0) / tau)
            if k is not None and k >= 0:
                return None
        return {"certificate": "wandering", "return_map": "translation", "period": p,
                "step": str(tau), "boundary_orbit": [x.key() for x in bases[:-1]]}
    if not f.field.is_rational:
        return None
    w1, w2 = fixed
    if w1 is None:
        to_u = ((0, 1), (1, -w2))
    elif w2 is None:
        to_u = ((1, -w1), (0, 1))
    else:
        to_u = ((1, -w1), (1, -w2))
    u0 = _mob_apply(to_u, w0)
    lam = _mob_apply(to_u, _mob_apply(A, w0)) / u0
    lam = Fraction(lam)
    for b in bad:
        ub = _mob_apply(to_u, b)
        if ub is None or not ub:
            continue
        r = Fraction(ub / u0)
        if r == 1:
            return None
        power = Fraction(1)
        while _height(power) <= _height(r):
            power *= lam
            if power == r:
                return None
    return {"certificate": "wandering", "return_map": "multiplicative", "period": p,
            "multiplier": str(lam), "boundary_orbit": [x.key() for x in bases[:-1]]}


def escape_certificate(f, gamma, x, v):
    """F-certificate for D(x, v) at a fixed x whose tangent map is a rational polynomial.

    Past the radius R the residue orbit grows strictly in absolute value, so it
    never meets the finitely many directions holding vertices or surplus.
    """
    if v.kind != "down" or not f.field.is_rational or f.image(x) != x:
        return None
    tm = f.local(x).tangent
    num, den = tm.num, tm.den
    if len(den) != 1 or len(num) < 3:
        return None
    lead = abs(Fraction(num[-1]) / Fraction(den[0]))
    rest = sum(abs(Fraction(c) / Fraction(den[0])) for c in num[:-1])
    radius = max(Fraction(1), (2 + rest) / lead)
    occ = {g.direction_at(x) for g in gamma if g != x} | _positive_surplus_directions(f, x)
    bad = [abs(Fraction(w.value)) for w in occ if w.kind == "down"]
    c = abs(Fraction(v.value))
    if c >= radius and all(c > b for b in bad):
        return {"certificate": "escaping-residue-orbit", "base": x.key(), "radius": str(radius),
                "direction": str(v.value)}
    return None


# ---------------------------------------------------------------------------
# forward chains


def _outward_direction(gamma, x):
    occ = {g.direction_at(x) for g in gamma if g != x}
    return next(iter(occ)) if len(occ) == 1 else None


def _attracting_from_chain(f, gamma, D, max_period, cache):
    x = D.base
    if x in cache:
        return cache[x]
    cert = None
    o = _outward_direction(gamma, x)
    if o is not None and o != D.direction:
        chain = verify_invariant_disk(f, ClosedDisk(x, o), gamma, max_period)
        if chain:
            cert = {
                "certificate": "attracting-disk",
                "period": len(chain) - 1,
                "disk": chain[0].describe(),
            }
    cache[x] = cert
    return cert


def _disk_chain(f, gamma, D, bound, attracting=(), max_period=4, offset=0):
    """Follow D, f(D), ... while images are disks; return a DomainClass."""
    seen = [D]
    trail = [D.direction]
    bases = [D.base]
    cache = {}
    for n in range(1, bound + 1):
        img = image_disk(f, D)
        if img.surplus > 0:
            return DomainClass("J", n + offset, {"reason": "surplus", "disk": _disk_key(D)})
        D = img.image
        hits = [g for g in gamma if D.contains(g)]
        if hits:
            return DomainClass("J", n + offset, {"reason": "contains-vertex", "vertex": hits[0].key()})
        for m, Dm in enumerate(seen):
            rel = disk_relation(D, Dm)
            if rel in ("equal", "sub"):
                return DomainClass("F", None, {"certificate": "nesting", "m": m + offset, "n": n + offset,
                                               "disk": _disk_key(Dm), "strict": rel == "sub"})
        for cyc in attracting:
            if cyc.contains_open_disk(D):
                return DomainClass("F", None, {"certificate": "attracting-cycle", "n": n + offset,
                                               "cycle": cyc.describe()})
        cert = _attracting_from_chain(f, gamma, D, max_period, cache)
        if cert:
            cert["n"] = n + offset
            return DomainClass("F", None, cert)
        if D.base in bases:
            m = bases.index(D.base)
            cert = wandering_certificate(f, gamma, bases[m:] + [D.base], trail[m:]) \
                or escape_certificate(f, gamma, D.base, D.direction)
            if cert:
                cert["n"] = n + offset
                return DomainClass("F", None, cert)
        seen.append(D)
        trail.append(D.direction)
        bases.append(D.base)
    return DomainClass("inconclusive", None, {"reason": f"no certificate within {bound} steps",
                                              "last": _disk_key(D)})


def _inner_chain(f, gamma, U, bound, attracting, max_period):
    visited = [U.key()]
    exact = True
    cur = U
    for n in range(1, bound + 1):
        for g in gamma:
            if count_preimages_in_simple_domain(f, cur.boundary, g) > 0:
                if exact:
                    return DomainClass("J", n, {"reason": "covers-vertex", "vertex": g.key()})
                return DomainClass("inconclusive", None, {"reason": "image of a strict subdomain meets a vertex"})
        W = locate(gamma, f.image(cur.representative()))
        exact = exact and not any(W.contains(f.image(p)) for p in cur.boundary_points())
        if W.kind == "disk":
            sub = _disk_chain(f, gamma, W.disk, bound - n, attracting, max_period, offset=n)
            if sub.is_F or (sub.is_J and exact):
                sub.certificate.setdefault("via", W.key())
                return sub
            return DomainClass("inconclusive", None, {"reason": "image lies in a J-disk but is not all of it",
                                                      "via": W.key()})
        if W.key() in visited:
            return DomainClass("F", None, {"certificate": "inner-cycle", "n": n,
                                           "cycle": visited[visited.index(W.key()):]})
        visited.append(W.key())
        cur = W
    return DomainClass("inconclusive", None, {"reason": f"no certificate within {bound} steps"})


def classify_domain(f, gamma, U, orbit_bound=64, attracting=(), max_period=4):
    """Decide whether the Gamma-domain U is in J (some image meets gamma) or F."""
    gamma = _gamma_list(gamma)
    if U.kind == "vertex":
        raise ValueError("vertices are not domains")
    try:
        if U.kind == "disk":
            return _disk_chain(f, gamma, U.disk, orbit_bound, attracting, max_period)
        return _inner_chain(f, gamma, U, orbit_bound, attracting, max_period)
    except HeightBudgetExceeded as exc:
        return DomainClass("inconclusive", None, {"reason": str(exc)})


# ---------------------------------------------------------------------------
# analytic stability


@dataclass
class VertexVerdict:
    vertex: object
    image: object
    kind: str  # in-gamma | lands-in-F-domain | lands-in-J-domain | inconclusive
    domain: object = None
    detail: DomainClass | None = None

    def describe(self):
        out = {"vertex": self.vertex.key(), "image": self.image.key(), "verdict": self.kind}
        if self.domain is not None:
            out["domain"] = self.domain.key()
        if self.detail is not None:
            out["classification"] = self.detail.describe()
        return out


@dataclass
class StabilityReport:
    verdicts: list

    @property
    def stable(self):
        """True, False or None (inconclusive)."""
        kinds = {v.kind for v in self.verdicts}
        if "lands-in-J-domain" in kinds:
            return False
        if "inconclusive" in kinds:
            return None
        return True

    @property
    def status(self):
        return {True: "stable", False: "unstable", None: "inconclusive"}[self.stable]

    def offending(self):
        return [v for v in self.verdicts if v.kind in ("lands-in-J-domain", "inconclusive")]

    def describe(self):
        return {"status": self.status, "vertices": [v.describe() for v in self.verdicts]}


def check_stability(f, gamma, orbit_bound=64, attracting=(), max_period=4):
    if f.d < 2:
        raise ValueError("analytic stability needs degree at least 2")
    gamma = gamma if isinstance(gamma, VertexSet) else VertexSet(gamma)
    out = []
    for z in gamma:
        y = f.image(z)
        if y in gamma:
            out.append(VertexVerdict(z, y, "in-gamma"))
            continue
        U = locate(gamma, y)
        cls = classify_domain(f, gamma, U, orbit_bound, attracting, max_period)
        kind = {"J": "lands-in-J-domain", "F": "lands-in-F-domain"}.get(cls.verdict, "inconclusive")
        out.append(VertexVerdict(z, y, kind, U, cls))
    return StabilityReport(out)


# ---------------------------------------------------------------------------
# rows and the state space


def _surplus_candidates(f, x):
    cache = f.__dict__.setdefault("_surplus_dirs", {})
    if x not in cache:
        cache[x] = _positive_surplus_directions(f, x)
    return cache[x]


def row_counts(f, gamma, W):
    """{V: m_{W,V}} for a probe state W (vertex or J-domain)."""
    gamma = gamma if isinstance(gamma, VertexSet) else VertexSet(gamma)
    out = {}
    if W.kind == "vertex":
        for z in gamma:
            if f.image(z) == W.point:
                out[VertexState(z)] = f.local(z).degree
    for I in gamma.inner_domains():
        c = count_preimages_in_simple_domain(f, I.boundary, W)
        if c:
            out[I] = c
    for z in gamma:
        fz = f.image(z)
        cands = set(_surplus_candidates(f, z))
        ydir = W.direction_at(fz)
        if ydir is not None:
            cands |= set(f.local(z).tangent.fiber(ydir))
        occupied = gamma.occupied_directions(z)
        for v in sorted(cands - occupied, key=direction_sort_key):
            c = disk_count(f, z, v, W)
            if c:
                out[DiskState(z, v)] = c
    return out


@dataclass
class StateSpace:
    gamma: VertexSet
    states: list
    level: dict
    rows: dict  # state -> {state: m}
    depth: int
    d: int

    @property
    def complete_rows(self):
        return {s for s in self.states if s in self.rows}

    def index(self, state):
        return self.states.index(state)

    def by_key(self, key):
        for s in self.states:
            if s.key() == key:
                return s
        raise KeyError(key)

    def keys(self):
        return [s.key() for s in self.states]

    def to_dict(self):
        return {
            "states": [
                {"key": s.key(), "kind": s.kind, "level": self.level[s],
                 "conjugacy_size": s.conjugacy_size, "complete": s in self.rows}
                for s in self.states
            ],
            "depth": self.depth,
        }


def enumerate_states(f, gamma, depth, stability=None, require_stable=True, orbit_bound=64):
    """Breadth-first discovery of the J-states reachable backward from gamma."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    gamma = gamma if isinstance(gamma, VertexSet) else VertexSet(gamma)
    if require_stable:
        if stability is None:
            stability = check_stability(f, gamma, orbit_bound)
        if stability.stable is not True:
            raise NotStable(f"(f, Gamma) is {stability.status}", stability)
    states = [VertexState(z) for z in gamma]
    level = {s: 0 for s in states}
    rows = {}
    queue = deque(states)
    while queue:
        W = queue.popleft()
        if level[W] >= depth:
            continue
        row = row_counts(f, gamma, W)
        total = sum(row.values())
        if total != f.d:
            raise Inconclusive(f"row of {W.key()} sums to {total}, expected {f.d}",
                               {"state": W.key(), "row": {k.key(): v for k, v in row.items()}})
        rows[W] = row
        for V in sorted(row, key=lambda s: s.key()):
            if V not in level:
                level[V] = level[W] + 1
                states.append(V)
                queue.append(V)
    return StateSpace(gamma, states, level, rows, depth, f.d)


# ---------------------------------------------------------------------------
# the I(d) boundary classification


def _hom_str(coeffs, degree):
    """Binary form sum c_i X^i Y^(degree-i)."""
    terms = []
    for i in range(degree, -1, -1):
        c = coeffs[i] if i < len(coeffs) else 0
        if not c:
            continue
        mon = "*".join(p for p in (_pw("X", i), _pw("Y", degree - i)) if p)
        if not mon:
            terms.append(str(c))
        elif c == 1:
            terms.append(mon)
        elif c == -1:
            terms.append("-" + mon)
        else:
            terms.append(f"{c}*{mon}")
    return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def _pw(v, k):
    return "" if k == 0 else v if k == 1 else f"{v}^{k}"


@dataclass
class BoundaryClass:
    H: tuple  # dehomogenized coefficients, low degree first
    H_degree: int
    phi_num: tuple
    phi_den: tuple
    phi_degree: int
    in_indeterminacy: bool
    phi_value: object = None  # constant value of phi (None = infinity) when phi_degree == 0

    def describe(self):
        out = {
            "H": _hom_str(self.H, self.H_degree),
            "phi": f"({_hom_str(self.phi_num, self.phi_degree)} : {_hom_str(self.phi_den, self.phi_degree)})",
            "phi_degree": self.phi_degree,
            "in_indeterminacy": self.in_indeterminacy,
        }
        if self.phi_degree == 0:
            out["phi_value"] = "inf" if self.phi_value is None else str(self.phi_value)
        return out


def classify_boundary(f):
    from .numberfield import pdeg, pdivmod, pgcd, peval, ptrim

    d = f.d
    coeffs = [c for c in f.coefficients() if c]
    m = min(c.valuation() for c in coeffs)

    def red(poly):
        return ptrim(tuple(c.shift(-m).residue() if c else Fraction(0) for c in poly))

    Pt, Qt = red(f.P), red(f.Q)
    # Y-adic order of a degree-d form with dehomogenization p: d - deg p
    yP = d - pdeg(Pt) if Pt else None
    yQ = d - pdeg(Qt) if Qt else None
    if not Pt:
        h, ky = Qt, yQ
    elif not Qt:
        h, ky = Pt, yP
    else:
        h, ky = pgcd(Pt, Qt), min(yP, yQ)
    H_degree = pdeg(h) + ky
    phi_num = pdivmod(Pt, h)[0] if Pt else ()
    phi_den = pdivmod(Qt, h)[0] if Qt else ()
    phi_degree = d - H_degree
    in_I = False
    value = None
    if phi_degree == 0:
        p = phi_num[0] if phi_num else 0
        q = phi_den[0] if phi_den else 0
        if q:
            value = p / q
            in_I = not peval(h, value)
        else:
            in_I = ky > 0
    return BoundaryClass(h, H_degree, phi_num, phi_den, phi_degree, in_I, value)
