"""Problem specifications: JSON in, validated objects out."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

from .berkovich import TypeIIPoint
from .dynamics import BerkMap
from .errors import ParseError
from .expr import parse_field_polynomial, parse_ground, parse_rational, parse_rational_function
from .numberfield import QQF, NumberField
from .vertexset import VertexSet


@dataclass
class Bounds:
    depth: int = 8
    orbit_bound: int = 64
    max_period: int = 4
    max_new_vertices: int = 8
    power_steps: int = 256
    period_max: int = 6
    tail_tol: str = "0"


@dataclass
class FieldSpec:
    ramification: int = 1
    minimal_polynomial: str | None = None


@dataclass
class VertexSpec:
    center: str
    radius_exponent: str


@dataclass
class ProblemSpec:
    numerator: str
    denominator: str = "1"
    vertices: list = dc_field(default_factory=lambda: [VertexSpec("0", "0")])
    field: FieldSpec = dc_field(default_factory=FieldSpec)
    bounds: Bounds = dc_field(default_factory=Bounds)
    allow_degenerate: bool = False
    extend_field: str = "auto"

    # built objects ----------------------------------------------------
    def number_field(self):
        if self.field.minimal_polynomial is None:
            return QQF
        return NumberField(parse_field_polynomial(self.field.minimal_polynomial))

    def build(self):
        """(field, map, vertex set)."""
        F = self.number_field()
        f = _build_map(self.numerator, self.denominator, F)
        pts = []
        for i, v in enumerate(self.vertices):
            c = _located(lambda: parse_ground(v.center, F), f"vertices[{i}].center")
            q = _located(lambda: parse_rational(v.radius_exponent), f"vertices[{i}].radius_exponent")
            p = TypeIIPoint(c, q)
            if p in pts:
                raise ParseError(f"vertices[{i}] duplicates an earlier vertex ({p.key()})", i, v.center)
            pts.append(p)
        if not pts:
            raise ParseError("at least one vertex is required", 0, "")
        return F, f, VertexSet(pts)

    def to_dict(self):
        out = {
            "field": {"ramification": self.field.ramification},
            "map": {"numerator": self.numerator, "denominator": self.denominator},
            "vertices": [asdict(v) for v in self.vertices],
            "bounds": asdict(self.bounds),
        }
        if self.field.minimal_polynomial is not None:
            out["field"]["minimal_polynomial"] = self.field.minimal_polynomial
        if self.allow_degenerate:
            out["allow_degenerate"] = True
        if self.extend_field != "auto":
            out["extend_field"] = self.extend_field
        return out


def _located(fn, where):
    try:
        return fn()
    except ParseError as exc:
        raise ParseError(f"{where}: {exc.raw}", exc.position, exc.text) from None


def _build_map(num, den, F):
    n = _located(lambda: parse_rational_function(num, F), "map.numerator")
    d = _located(lambda: parse_rational_function(den, F), "map.denominator")
    try:
        r = n / d
    except ZeroDivisionError:
        raise ParseError("map.denominator is zero", 0, den) from None
    try:
        f = BerkMap(r.num, r.den, F)
    except ValueError as exc:
        raise ParseError(f"{exc} after cancellation", 0, f"{num} / {den}") from None
    if f.d < 2:
        raise ParseError(f"map has degree {f.d}; degree at least 2 is required", 0, f"{num} / {den}")
    return f


def _expect(obj, key, kind, where, default=None, required=False):
    if key not in obj:
        if required:
            raise ParseError(f"{where}: missing key {key!r}", 0, json.dumps(obj))
        return default
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is not bool:
        raise ParseError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}", 0, json.dumps(obj))
    return val


def _str_or_num(val, where):
    if isinstance(val, bool) or not isinstance(val, (str, int)):
        raise ParseError(f"{where}: expected a string", 0, str(val))
    return str(val)


def parse_spec(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos, text) from None
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object", 0, text)
    m = _expect(raw, "map", dict, "spec", required=True)
    num = _str_or_num(_expect(m, "numerator", (str, int), "map", required=True), "map.numerator")
    den = _str_or_num(m.get("denominator", "1"), "map.denominator")

    fd = _expect(raw, "field", dict, "spec", {})
    e = _expect(fd, "ramification", int, "field", 1)
    if e < 1:
        raise ParseError("field.ramification must be positive", 0, str(e))
    minpoly = _expect(fd, "minimal_polynomial", str, "field", None)

    verts = []
    for i, v in enumerate(_expect(raw, "vertices", list, "spec", [{"center": "0", "radius_exponent": "0"}])):
        if not isinstance(v, dict):
            raise ParseError(f"vertices[{i}] must be an object", i, text)
        verts.append(VertexSpec(_str_or_num(v.get("center", "0"), f"vertices[{i}].center"),
                                _str_or_num(v.get("radius_exponent", "0"), f"vertices[{i}].radius_exponent")))

    bounds = Bounds()
    for key, val in _expect(raw, "bounds", dict, "spec", {}).items():
        if not hasattr(bounds, key):
            raise ParseError(f"bounds: unknown key {key!r}", 0, text)
        if key == "tail_tol":
            parse_rational(str(val))
            val = str(val)
        elif isinstance(val, bool) or not isinstance(val, int) or val < 1:
            raise ParseError(f"bounds.{key}: expected a positive integer", 0, str(val))
        setattr(bounds, key, val)

    extend = _expect(raw, "extend_field", str, "spec", "auto")
    if extend not in ("auto", "deny"):
        raise ParseError("extend_field must be 'auto' or 'deny'", 0, extend)
    spec = ProblemSpec(num, den, verts, FieldSpec(e, minpoly), bounds,
                       bool(_expect(raw, "allow_degenerate", bool, "spec", False)), extend)
    spec.build()  # validate
    return spec


def serialize(spec):
    return json.dumps(spec.to_dict(), indent=2, sort_keys=True)


def to_jsonable(obj):
    """Exact serialization: Fractions become 'p/q' strings."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float):  # pragma: no cover - guarded against
        raise TypeError("floating point values are not serialized")
    return obj
