"""Action of a rational map on type II points, directions and disks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .berkovich import UP, Direction, OpenDisk, TypeIIPoint, as_probe, down
from .errors import HeightBudgetExceeded
from .expr import RatZ, parse_rational_function
from .numberfield import (
    QQF,
    factor,
    padd,
    pdeg,
    pdivmod,
    pgcd,
    pmul,
    pmultiplicity,
    porder,
    ppow,
    pscale,
    psub,
    ptrim,
    peval,
)
from .series import (
    ONE,
    ZERO,
    GroundElement,
    gauss_valuation,
    kp,
    kp_add,
    kp_affine,
    kp_deg,
    kp_divmod,
    kp_eval,
    kp_gcd,
    kp_mul,
    kp_pow,
    kp_scale,
    kp_str,
    kp_sub,
    t_power,
)


class BerkMap:
    """f = P/Q with P, Q coprime over K; d = max(deg P, deg Q)."""

    def __init__(self, P, Q, field=QQF, coprime=False):
        P, Q = kp(P), kp(Q)
        if not Q:
            raise ValueError("zero denominator")
        if coprime:
            lc = Q[-1]
            self.P, self.Q = kp_scale(P, 1 / lc), kp_scale(Q, 1 / lc)
        else:
            r = RatZ(P, Q).reduced()
            self.P, self.Q = r.num, r.den
        self.field = field
        self.d = max(kp_deg(self.P), kp_deg(self.Q))
        if self.d < 1:
            raise ValueError("map is constant")
        self._local = {}
        self._surplus = {}

    @classmethod
    def from_strings(cls, numerator, denominator="1", field=QQF):
        f = parse_rational_function(numerator, field) / parse_rational_function(denominator, field)
        return cls(f.num, f.den, field)

    def __str__(self):
        return f"({kp_str(self.P)}) / ({kp_str(self.Q)})"

    def coefficients(self):
        return list(self.P) + list(self.Q)

    def ramification(self):
        e = 1
        for c in self.coefficients():
            r = c.ramification()
            e = e * r // _gcd(e, r)
        return e

    def __call__(self, z):
        """f(z) for z in K; None means infinity."""
        if z is None:
            if kp_deg(self.P) > kp_deg(self.Q):
                return None
            if kp_deg(self.P) < kp_deg(self.Q):
                return ZERO
            return self.P[-1] / self.Q[-1]
        q = kp_eval(self.Q, z)
        if not q:
            return None
        return kp_eval(self.P, z) / q

    def compose(self, g):
        """self o g."""
        d = self.d
        Pg, Qg = g.P, g.Q
        num, den = (), ()
        for i in range(d + 1):
            mono = kp_mul(kp_pow(Pg, i), kp_pow(Qg, d - i))
            if i < len(self.P) and self.P[i]:
                num = kp_add(num, kp_scale(mono, self.P[i]))
            if i < len(self.Q) and self.Q[i]:
                den = kp_add(den, kp_scale(mono, self.Q[i]))
        # homogeneous composition of coprime pairs stays coprime
        return BerkMap(num, den, self.field, coprime=True)

    def iterate(self, n):
        g = self
        for _ in range(n - 1):
            g = self.compose(g)
        return g

    # local data -------------------------------------------------------
    def local(self, x):
        data = self._local.get(x)
        if data is None:
            data = _local_data(self, x)
            self._local[x] = data
        return data

    def image(self, x):
        return self.local(x).target

    def surplus(self, x, direction):
        key = (x, direction)
        if key not in self._surplus:
            self._surplus[key] = _surplus(self, x, direction)
        return self._surplus[key]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------


def _reduce_at(poly, level):
    """Residues of coefficients of t^(-level) * poly (all valuations >= level)."""
    out = []
    for c in poly:
        v = c.valuation()
        out.append(c.lead() if v is not None and v == level else Fraction(0))
    return ptrim(out)


@dataclass
class TangentMap:
    source: TypeIIPoint
    target: TypeIIPoint
    num: tuple  # reduced numerator over F
    den: tuple  # reduced denominator over F, coprime to num
    field: object

    @property
    def degree(self):
        return max(pdeg(self.num), pdeg(self.den))

    def __str__(self):
        from .numberfield import poly_str

        return f"({poly_str(self.num, 'w')})/({poly_str(self.den, 'w')})"

    # direction action ------------------------------------------------
    def apply(self, v):
        """(Tf(v), directional multiplicity)."""
        N, D, m = self.num, self.den, self.degree
        if v.kind == "down":
            c = v.value
            if _bits(c) > MAX_CENTER_BITS:
                raise HeightBudgetExceeded(f"residue direction at {self.source.key()} exceeds "
                                           f"{MAX_CENTER_BITS} bits", {"max_center_bits": MAX_CENTER_BITS})
            dc = peval(D, c)
            if not dc:
                return UP, porder(D, c)
            beta = peval(N, c) / dc
            return down(beta), porder(psub(N, pscale(D, beta)), c)
        if v.kind == "up":
            if pdeg(N) > pdeg(D):
                return UP, pdeg(N) - pdeg(D)
            beta = N[-1] / D[-1] if pdeg(N) == pdeg(D) else Fraction(0)
            return down(beta), m - pdeg(psub(N, pscale(D, beta)))
        return self._apply_class(v.value)

    def _apply_class(self, pi):
        if not pdivmod(self.den, pi)[1]:
            return UP, pmultiplicity(self.den, pi)
        gamma = _mod_div(self.num, self.den, pi, self.field)
        psi = _minpoly_mod(gamma, pi)
        if len(psi) == 2:
            return down(-psi[0]), pmultiplicity(psub(self.num, pscale(self.den, -psi[0])), pi)
        phi = _class_form(self.num, self.den, psi)
        return Direction("class", psi), pmultiplicity(phi, pi)

    def fiber(self, w):
        """Directions v with Tf(v) = w, with directional multiplicities."""
        N, D, m = self.num, self.den, self.degree
        out = {}
        if w.kind == "up":
            poly = D
            deficit = pdeg(N) - pdeg(D)
        elif w.kind == "down":
            poly = psub(N, pscale(D, w.value))
            deficit = m - pdeg(poly)
        else:
            poly = _class_form(N, D, w.value)
            deficit = 0
        if poly and pdeg(poly) > 0:
            for fac, mult in factor(self.field, poly):
                d = down(-fac[0]) if len(fac) == 2 else Direction("class", fac)
                if self.apply(d)[0] == w:
                    out[d] = mult
        if deficit > 0:
            out[UP] = deficit
        return out


def _class_form(N, D, psi):
    """sum psi_j N^j D^(k-j), vanishing exactly on the preimage of the class psi."""
    k = pdeg(psi)
    out = ()
    for j, c in enumerate(psi):
        if c:
            out = padd(out, pscale(pmul(ppow(N, j), ppow(D, k - j)), c))
    return out


def _mod_div(a, b, pi, field):
    """a / b in F[w]/(pi)."""
    # inverse of b mod pi via extended Euclid
    r0, r1 = pi, pdivmod(b, pi)[1]
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1))
    inv = pscale(s0, 1 / r0[0])
    return pdivmod(pmul(a, inv), pi)[1]


def _minpoly_mod(gamma, pi):
    """Minimal polynomial over F of the class of gamma in F[w]/(pi)."""
    k = pdeg(pi)
    powers = [(Fraction(1),)]
    while True:
        nxt = pdivmod(pmul(powers[-1], gamma), pi)[1]
        coeffs = _solve_dependency(powers, nxt, k)
        if coeffs is not None:
            # nxt = sum coeffs_i powers_i  =>  x^n - sum coeffs_i x^i
            psi = [-c for c in coeffs] + [Fraction(1)]
            return ptrim(psi)
        powers.append(nxt)


def _vec(p, k):
    return [p[i] if i < len(p) else Fraction(0) for i in range(k)]


def _solve_dependency(basis, target, k):
    """Coefficients c with sum c_i basis_i = target, or None (Gaussian elimination over F)."""
    n = len(basis)
    rows = [[_vec(basis[j], k)[i] for j in range(n)] + [_vec(target, k)[i]] for i in range(k)]
    piv_cols = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, k) if rows[i][col]), None)
        if piv is None:
            return None  # basis is independent by construction; unreachable
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(k):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(col)
        r += 1
    if any(rows[i][n] for i in range(r, k)):
        return None
    return [rows[i][n] for i in range(n)]


# ---------------------------------------------------------------------------


@dataclass
class LocalData:
    source: TypeIIPoint
    target: TypeIIPoint
    tangent: TangentMap
    P_loc: tuple  # P(a + t^q w)
    Q_loc: tuple

    @property
    def degree(self):
        return self.tangent.degree


MAX_CENTER_BITS = 4096


def _bits(c):
    total = 0
    for x in getattr(c, "coeffs", (c,)):
        x = Fraction(x)
        total += x.numerator.bit_length() + x.denominator.bit_length()
    return total


def _local_data(f, x):
    if sum(_bits(c) for c in x.center.coefficients()) > MAX_CENTER_BITS:
        raise HeightBudgetExceeded(f"center of {x.key()[:48]}... exceeds {MAX_CENTER_BITS} bits",
                                   {"max_center_bits": MAX_CENTER_BITS})
    rho = t_power(x.q)
    Pl = kp_affine(f.P, x.center, rho)
    Ql = kp_affine(f.Q, x.center, rho)
    gQ = gauss_valuation(Ql)
    Dbar = _reduce_at(Ql, gQ)
    tried = 0
    w0 = 0
    while tried < 4 * f.d + 8:
        tried += 1
        qv = kp_eval(Ql, w0)
        if qv:
            b = kp_eval(Pl, w0) / qv
            N = kp_sub(Pl, kp_scale(Ql, b))
            vN = gauss_valuation(N)
            sigma = vN - gQ
            b_can = b.truncate(sigma)
            N = kp_sub(Pl, kp_scale(Ql, b_can))
            Nbar = _reduce_at(N, vN)
            if Nbar:
                g = pgcd(Nbar, Dbar)
                n_red = pdivmod(Nbar, g)[0]
                d_red = pdivmod(Dbar, g)[0]
                if max(pdeg(n_red), pdeg(d_red)) >= 1:
                    lc = d_red[-1]
                    n_red = pscale(n_red, 1 / lc)
                    d_red = pscale(d_red, 1 / lc)
                    target = TypeIIPoint(b_can, sigma)
                    tm = TangentMap(x, target, n_red, d_red, f.field)
                    return LocalData(x, target, tm, Pl, Ql)
        w0 = -w0 if w0 > 0 else -w0 + 1
    raise RuntimeError(f"could not determine the image of {x}")  # pragma: no cover


def image_of_point(f, x):
    return f.image(x)


def local_degree(f, x):
    data = f.local(x)
    return data.degree, data.tangent


def tangent_image(f, x, v):
    """(Tf(v), m_f(D(v)))."""
    return f.local(x).tangent.apply(v)


def directional_degree(f, x, v):
    return tangent_image(f, x, v)[1]


# ---------------------------------------------------------------------------
# root counting in directions


def root_direction_counts(R, formal_degree, x, field):
    """Roots of R (formal degree given) per direction at x.

    Returns (counts, classes): counts maps rational directions to numbers of
    roots; class directions map to the per-copy count.
    """
    Rl = kp_affine(R, x.center, t_power(x.q))
    v = gauss_valuation(Rl)
    Rbar = _reduce_at(Rl, v)
    out = {}
    if pdeg(Rbar) > 0:
        for fac, mult in factor(field, Rbar):
            d = down(-fac[0]) if len(fac) == 2 else Direction("class", fac)
            out[d] = mult
    up = formal_degree - pdeg(Rbar)
    if up > 0:
        out[UP] = up
    return out


def roots_in_direction(R, formal_degree, x, v, field):
    return root_direction_counts(R, formal_degree, x, field).get(v, 0)


def _surplus(f, x, v):
    data = f.local(x)
    img, _ = data.tangent.apply(v)
    if img != UP:
        R = f.Q
    else:
        R = kp_sub(f.P, kp_scale(f.Q, data.target.center))
    return roots_in_direction(R, f.d, x, v, f.field)


@dataclass(frozen=True)
class DiskImage:
    image: OpenDisk
    surplus: int
    degree_on_disk: int


def image_disk(f, disk):
    img, m = tangent_image(f, disk.base, disk.direction)
    return DiskImage(OpenDisk(f.image(disk.base), img), f.surplus(disk.base, disk.direction), m)


def disk_count(f, x, v, y):
    """#(f^-1(y) in D(v)) summed over the conjugate copies of v.

    y is a probe (point or state) not equal to f(x).
    """
    k = v.conjugacy_size
    img, m = tangent_image(f, x, v)
    ydir = as_probe(y).direction_at(f.image(x))
    copies = 0
    if ydir is not None and ydir == img:
        copies = k // img.conjugacy_size
    return copies * m + k * f.surplus(x, v)


def count_preimages_in_simple_domain(f, domain, y):
    """Preimage count of y in the intersection of the open disks (base, direction)."""
    disks = domain.disks if hasattr(domain, "disks") else domain
    pairs = [(d.base, d.direction) if isinstance(d, OpenDisk) else d for d in disks]
    total = sum(disk_count(f, x, v, y) for x, v in pairs)
    return total - f.d * (len(pairs) - 1)


def valuation_at(R_num, R_den, x):
    """-log|R(x)| for R = R_num / R_den at the type II point x."""
    rho = t_power(x.q)
    return gauss_valuation(kp_affine(R_num, x.center, rho)) - gauss_valuation(kp_affine(R_den, x.center, rho))
