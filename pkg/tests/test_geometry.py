from fractions import Fraction

from berkchain import (
    UP,
    BerkMap,
    ClosedDisk,
    OpenDisk,
    TypeIIPoint,
    VertexSet,
    disk_count,
    down,
    find_attracting_cycles,
    gauss_point,
    image_disk,
    join,
    locate,
    orbit_with_preperiodicity,
)
from berkchain.berkovich import disk_relation
from berkchain.cycles import closed_disk_image, verify_invariant_disk
from berkchain.series import ONE, ZERO, t_power
from berkchain.vertexset import hull_dot

G = gauss_point()
Z0 = down(Fraction(0))


def pt(c, q):
    return TypeIIPoint(c, Fraction(q))


def test_points_normalize_center():
    assert TypeIIPoint(ONE, Fraction(0)) == G
    assert pt(ONE, 1) != pt(ZERO, 1)


def test_directions_and_domination():
    p = pt(ONE, 1)
    assert p.dominated_by(G) and not G.dominated_by(p)
    assert G.direction_at(p) == UP
    assert p.direction_at(G) == down(Fraction(1))
    assert join(pt(ONE, 1), pt(ZERO, 1)) == G


def test_disk_relations():
    inner = OpenDisk(pt(ZERO, 1), Z0)
    assert disk_relation(inner, OpenDisk(G, Z0)) == "sub"
    assert disk_relation(OpenDisk(G, Z0), OpenDisk(pt(ZERO, 1), UP)) == "cover"


def test_vertex_set_domains_and_locate():
    gamma = VertexSet([G, pt(ZERO, 1), pt(ZERO, -1)])
    keys = [d.key() for d in gamma.inner_domains()]
    assert keys == ["I[V(0;-1)>0,V(0;0)>inf]", "I[V(0;0)>0,V(0;1)>inf]"]
    assert locate(gamma, pt(ZERO, Fraction(1, 2))).key() == keys[1]
    assert locate(gamma, pt(ONE, Fraction(1, 2))).key() == "D(0;0;1)"
    assert locate(gamma, G).kind == "vertex"
    dot = hull_dot(gamma)
    assert dot.startswith("graph hull") and "n2 -- n0" in dot


def test_local_data_and_surplus():
    f = BerkMap.from_strings("z - 1 + t/z")
    assert f.image(G) == G and f.local(G).degree == 1
    assert f.surplus(G, Z0) == 1
    assert f.local(G).tangent.apply(down(Fraction(3))) == (down(Fraction(2)), 1)
    img = image_disk(f, OpenDisk(G, Z0))
    assert (str(img.image), img.surplus, img.degree_on_disk) == (str(OpenDisk(G, down(Fraction(-1)))), 1, 1)
    # the surplus puts one preimage of the Gauss point inside D(0, 1)^-
    assert disk_count(f, G, Z0, G) == 1


def test_quadratic_escape():
    f = BerkMap.from_strings("z^2 + 1/t")
    assert f.image(G) == pt(t_power(-1), 0)
    assert f.local(G).degree == 2
    orbit = orbit_with_preperiodicity(f, G, 10)
    assert not orbit.closed
    assert [p.key() for p in orbit.points[:3]] == ["V(0;0)", "V(t^(-1);0)", "V(t^(-2);-1)"]


def test_ramification_of_coefficients():
    assert BerkMap.from_strings("z^2 + t^(1/3)").ramification() == 3


def test_attracting_infinity_and_fixed_point():
    cycles = find_attracting_cycles(BerkMap.from_strings("z^2 + t"))
    by_center = {c.describe()["centers"][0]: c for c in cycles}
    assert by_center["inf"].describe()["disks"] == [{"boundary": "V(0;-1)", "excluded_direction": "0"}]
    finite = [c for k, c in by_center.items() if k != "inf"]
    assert len(finite) == 1 and finite[0].multiplier_valuation == 1


def test_period_two_through_infinity():
    (cyc,) = find_attracting_cycles(BerkMap.from_strings("1/z^2"), max_period=2)
    assert cyc.period == 2
    assert [d["boundary"] for d in cyc.describe()["disks"]] == ["V(0;1)", "V(0;-2)"]


def test_closed_disk_image_and_invariance():
    f = BerkMap.from_strings("z^2 + 1/t")
    E = ClosedDisk(pt(ZERO, -1), Z0)  # complement of D(0, |t|^-1)^-, a neighbourhood of infinity
    img = closed_disk_image(f, E)
    assert img is not None and E.contains_closed(img)
    assert verify_invariant_disk(f, E, [G]) is not None
    # a polynomial maps the closed unit disk onto the closed disk D(1/t, 1)
    assert closed_disk_image(f, ClosedDisk(G, UP)) == ClosedDisk(pt(t_power(-1), 0), UP)
