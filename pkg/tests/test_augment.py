from fractions import Fraction

from berkchain import AugmentConfig, BerkMap, TypeIIPoint, check_stability, orbit_with_preperiodicity, stabilize
from berkchain.series import ONE, ZERO

from conftest import build


def test_escaping_gauss_gains_basin_boundary():
    _, f, gamma = build("escaping_gauss")
    res = stabilize(f, gamma)
    assert res.stable
    assert [p.key() for p in res.added] == ["V(0;-1)"]
    assert res.steps[0]["move"] == "adjoin-attracting-disk-boundary"
    certs = res.certificates
    assert certs["V(0;0)"]["type"] == "attracting-F-disk"
    assert certs["V(0;0)"]["detail"]["certificate"] == "attracting-disk"
    # the verdict is re-checked independently
    assert check_stability(f, res.gamma_prime).stable is True


def test_stable_input_is_unchanged():
    _, f, gamma = build("escaping_disks")
    res = stabilize(f, gamma)
    assert res.stable and res.gamma_prime == gamma and not res.added
    assert res.certificates == {"V(0;0)": {"type": "maps-into-gamma", "image": "V(0;0)"}}


def test_preperiodic_orbit_is_adjoined():
    # z^2 sends V(-1;1) to the fixed point V(1;1)
    f = BerkMap.from_strings("z^2")
    res = stabilize(f, [TypeIIPoint(-ONE, Fraction(1))])
    assert res.stable
    assert [p.key() for p in res.added] == ["V(1;1)"]
    assert res.steps[0]["move"] == "adjoin-preperiodic-orbit"


def test_cycle_through_infinity_is_used():
    f = BerkMap.from_strings("1", "z^2")
    res = stabilize(f, [TypeIIPoint(ZERO, Fraction(1))])
    assert res.stable
    assert [p.key() for p in res.gamma_prime] == ["V(0;1)", "V(0;-2)"]
    cert = res.certificates["V(0;-2)"]["detail"]
    assert cert["certificate"] == "attracting-disk" and cert["period"] == 2


def test_budget_exhaustion_is_inconclusive():
    _, f, _ = build("escaping_disks")
    res = stabilize(f, [TypeIIPoint(ZERO, Fraction(1, 3))], AugmentConfig(max_new_vertices=3))
    assert res.verdict == "inconclusive" and not res.stable
    assert res.report.stable is not True
    assert "max_new_vertices" in res.diagnostics["reason"]
    assert res.diagnostics["first_offending_vertex"] == "V(0;1/3)"


def test_overrides_apply_to_config():
    _, f, gamma = build("escaping_gauss")
    res = stabilize(f, gamma, max_new_vertices=0)
    assert res.verdict == "inconclusive"
    assert res.diagnostics["offending_vertex"] == "V(0;0)"
    assert res.diagnostics["pending"] == ["V(0;-1)"]


def test_height_budget_gives_up_honestly():
    # V(2;1) runs through V(2^(2^n);1): exact heights double every step
    f = BerkMap.from_strings("z^2")
    orbit = orbit_with_preperiodicity(f, TypeIIPoint(ONE + ONE, Fraction(1)), 64)
    assert not orbit.closed and orbit.stopped and "bits" in orbit.stopped
    assert len(orbit.points) < 20
    res = stabilize(f, [TypeIIPoint(ONE + ONE, Fraction(1))], max_new_vertices=4)
    assert res.verdict == "inconclusive"
