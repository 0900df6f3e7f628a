"""Newton-Puiseux root location over K with on-demand residue field extension."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import ExtensionRequired
from .numberfield import NumberField, poly_str, roots_and_classes
from .series import (
    ZERO,
    GroundElement,
    kp,
    kp_affine,
    kp_deriv,
    kp_eval,
    newton_polygon,
    residual_polynomial,
    ONE,
)


@dataclass(frozen=True)
class PuiseuxRoot:
    value: GroundElement
    multiplicity: int
    attained: Fraction | None  # v(root - value) > attained; None means exact
    resolved: bool = True

    @property
    def exact(self):
        return self.attained is None


@dataclass
class PuiseuxRoots:
    roots: list
    field: NumberField
    ramification: int
    extended_from: NumberField | None = None
    log: list = dc_field(default_factory=list)


class _NeedExtension(Exception):
    def __init__(self, poly):
        super().__init__(poly)
        self.poly = poly


MAX_AUTO_EXTENSION_DEGREE = 4


def puiseux_roots(p, precision, field, extend="auto"):
    """Approximate all roots of p (a polynomial over K) to t-adic precision.

    Each reported root r satisfies v(x - r) > attained >= precision for the
    true roots x it stands for, unless exact.  When a residue polynomial has
    no root in F and F = Q, the field is extended by one of its irreducible
    factors (mode "auto"); otherwise ExtensionRequired is raised.
    """
    p = kp(p)
    if not p:
        raise ValueError("roots of the zero polynomial")
    precision = Fraction(precision)
    original = field
    log = []
    while True:
        try:
            out = []
            _solve(p, ZERO, None, precision, field, out)
            break
        except _NeedExtension as exc:
            if extend != "auto" or not field.is_rational:
                raise ExtensionRequired(poly_str(exc.poly, "c")) from None
            if len(exc.poly) - 1 > MAX_AUTO_EXTENSION_DEGREE:
                text = poly_str(exc.poly, "c")
                raise ExtensionRequired(text, f"residue polynomial {text} needs an extension of degree "
                                              f"{len(exc.poly) - 1} > {MAX_AUTO_EXTENSION_DEGREE}") from None
            field = NumberField(exc.poly)
            log.append(f"extended residue field to Q[a]/({poly_str(exc.poly, 'a')})")
    out.sort(key=lambda r: str(r.value))
    e = 1
    for r in out:
        e = max(e, 1) * r.value.ramification() // _gcd(e, r.value.ramification())
    return PuiseuxRoots(out, field, e, original if field != original else None, log)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _solve(q, prefix, lower, precision, field, out):
    # q(z) = p(prefix + z); collect roots of q with valuation > lower
    i0 = next(i for i, c in enumerate(q) if c)
    if i0 > 0:
        out.append(PuiseuxRoot(prefix, i0, None, True))
    poly = newton_polygon(q)
    for seg in poly.segments:
        s = seg.root_valuation
        if lower is not None and s <= lower:
            continue
        phi = residual_polynomial(q, seg)
        phi = phi[next(i for i, c in enumerate(phi) if c):]
        roots, classes = roots_and_classes(field, phi)
        if classes:
            raise _NeedExtension(classes[0][0])
        for c, mu in roots:
            step = GroundElement.monomial(c, s)
            new_prefix = prefix + step
            if s >= precision:
                out.append(PuiseuxRoot(new_prefix, mu, s, mu == 1))
            else:
                _solve(kp_affine(q, step, ONE), new_prefix, s, precision, field, out)


def root_check_offset(p, r):
    """v(p'(r)), the offset in the substitution check v(p(r)) > N + v(p'(r))."""
    return kp_eval(kp_deriv(kp(p)), r).valuation()
