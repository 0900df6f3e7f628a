from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from berkchain.errors import ExtensionRequired, ParseError
from berkchain.expr import parse_field_polynomial, parse_ground, parse_rational, parse_rational_function
from berkchain.numberfield import QQF, NumberField, factor, roots_and_classes
from berkchain.puiseux import puiseux_roots
from berkchain.series import ONE, T, ZERO, GroundElement, count_roots_in_valuation_range, kp, kp_eval, newton_polygon, t_power

QI = NumberField((1, 0, 1))


# --- number fields ---------------------------------------------------------

def test_gaussian_arithmetic():
    i = QI.gen()
    assert i * i == QI(-1)
    assert (1 + i) * (1 + i).inverse() == QI(1)
    assert (1 + i).inverse() == QI(Fraction(1, 2)) - QI(Fraction(1, 2)) * i
    assert QI.describe() == "1 + a^2"


def test_field_rejects_reducible_and_linear():
    with pytest.raises(ValueError):
        NumberField((-1, 0, 1))
    with pytest.raises(ValueError):
        NumberField((1, 1))


def test_factor_over_extension():
    # c^2 + 1 splits over Q(i) and not over Q
    assert roots_and_classes(QQF, (1, 0, 1))[0] == []
    roots, classes = roots_and_classes(QI, (QI(1), QI(0), QI(1)))
    assert len(roots) == 2 and not classes
    assert factor(QQF, (Fraction(-2), Fraction(0), Fraction(1))) == (((Fraction(-2), Fraction(0), Fraction(1)), 1),)


# --- Puiseux series --------------------------------------------------------

def test_ground_element_basics():
    x = parse_ground("t^(1/2) + 3/t")
    assert x.valuation() == -1
    assert x.ramification() == 2
    assert x.lead() == 3
    assert parse_ground("2 + t").residue() == 2
    assert not ZERO and ONE


def test_rational_element_expansion():
    x = parse_ground("(1+t)/(1-t)")  # 1 + 2t + 2t^2 + ...
    assert x.coefficient(0) == 1
    assert x.coefficient(1) == 2
    assert x.coefficient(2) == 2
    assert x.truncate(1) == ONE


def test_newton_polygon_slopes():
    # z^2 + 1/t has two roots of valuation -1/2
    assert newton_polygon(kp([t_power(-1), ZERO, ONE])).root_valuations() == {Fraction(-1, 2): 2}
    # t + z + z^2/t: collinear points, one segment of slope -1
    assert newton_polygon(kp([T, ONE, t_power(-1)])).root_valuations() == {Fraction(1): 2}
    assert count_roots_in_valuation_range(kp([ZERO, ONE]), hi=None) == 1


def test_puiseux_auto_extension():
    p = kp([t_power(-1), ZERO, ONE])
    res = puiseux_roots(p, 3, QQF)
    assert res.field == QI and res.extended_from == QQF
    assert len(res.roots) == 2 and all(r.exact for r in res.roots)
    for r in res.roots:
        assert not kp_eval(p, r.value)
    with pytest.raises(ExtensionRequired):
        puiseux_roots(p, 3, QQF, extend="deny")


def test_puiseux_series_root_precision():
    # z^2 - z - t: roots -t + t^2 - ... and 1 + t - ...
    p = kp([-T, -ONE, ONE])
    res = puiseux_roots(p, 4, QQF)
    assert len(res.roots) == 2
    for r in res.roots:
        if not r.exact:
            assert kp_eval(p, r.value).valuation() > 4


small = st.sampled_from(["0", "1", "-2", "1/3", "t", "1/t", "t^(1/2)", "3 + t^2", "1/(1 + t)"])


@settings(max_examples=60, deadline=None)
@given(small, small, small)
def test_field_laws(a, b, c):
    x, y, z = (parse_ground(s) for s in (a, b, c))
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    if y:
        assert (x / y) * y == x
        assert (x * y).valuation() == x.valuation() + y.valuation() if x else True


# --- parsing ---------------------------------------------------------------

@pytest.mark.parametrize("text, pos", [("z^", 2), ("1/0", 2), ("foo", 0), ("2a", 1), ("z^(1/2)", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_rational_function(text)
    assert info.value.position == pos
    assert str(info.value).count("at position") == 1


def test_parse_rational_and_minpoly():
    assert parse_rational("-3/4") == Fraction(-3, 4)
    assert parse_field_polynomial("a^2+1") == (1, 0, 1)
    r = parse_rational_function("t^(-1/2)*z + z^2/(z - t)")
    assert not r.is_ground()
    assert isinstance(parse_ground("5/t", QI), GroundElement)


def test_large_automatic_extension_is_refused():
    # c^7 - 1 needs the degree-6 cyclotomic field
    p = kp([-ONE] + [ZERO] * 6 + [ONE])
    with pytest.raises(ExtensionRequired, match="degree 6"):
        puiseux_roots(p, 2, QQF)
    assert puiseux_roots(kp([ONE] + [ZERO] * 3 + [ONE]), 2, QQF).field.degree == 4
