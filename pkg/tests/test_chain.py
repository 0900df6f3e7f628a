from fractions import Fraction

import pytest

from berkchain import (
    NotStable,
    NoVerdict,
    OracleRefused,
    TotallyInvariantVertex,
    brute_force_pullback,
    build_matrix,
    multiplicity,
    power,
    stationary,
)
from berkchain.markov import ORACLE_MAX_N, row_power, stationarity_defect, totally_invariant_vertices

from conftest import build, load_spec, state


@pytest.fixture(scope="module")
def escaping():
    _, f, gamma = build("escaping_disks")
    return f, gamma, build_matrix(f, gamma, 4)


def test_power_tracks_truncation_mass(escaping):
    _, _, P = escaping
    P3 = power(P, 3)
    U1 = state(P, "D(0;0;1)")
    # D1 -> D2 -> D3 leaves the enumerated rows with probability 1/4
    assert P3.uncertainty[U1] == Fraction(1, 4)
    assert not P3.exact_row(U1)
    g = state(P, "V(0;0)")
    assert P3.exact_row(g)
    assert P3[(g, g)] == Fraction(1, 8)
    assert sum(P3[(g, V)] for V in P.states) == 1


def test_row_power_matches_power(escaping):
    _, _, P = escaping
    for U in P.complete:
        row, sink = row_power(P, U, 2)
        P2 = power(P, 2)
        assert all(P2[(U, V)] == x for V, x in row.items())
        assert P2.uncertainty[U] == sink


def test_power_rejects_zero(escaping):
    with pytest.raises(ValueError):
        power(escaping[2], 0)


def test_tsv_marks_incomplete_rows(escaping):
    lines = escaping[2].to_tsv().splitlines()
    assert lines[0].split("\t")[0] == "state"
    assert lines[-1].split("\t")[1:] == ["?"] * 5


def test_multiplicity_needs_stable_pair(escaping):
    f, gamma, P = escaping
    assert multiplicity(f, gamma, P.states[0], P.states[1]) == 1
    _, g, gamma3 = build("escaping_gauss")
    with pytest.raises(NotStable):
        multiplicity(g, gamma3, None, None)


def test_totally_invariant_detection():
    _, f, gamma = build("square")
    assert [z.key() for z in totally_invariant_vertices(f, gamma)] == ["V(0;0)"]
    with pytest.raises(TotallyInvariantVertex):
        build_matrix(f, gamma, 3)
    P = build_matrix(f, gamma, 3, allow_degenerate=True)
    assert P.degenerate and P.to_dict()["degenerate_vertices"] == ["V(0;0)"]


def test_truncated_stationary_is_nearly_invariant():
    _, f, gamma = build("escaping_disks")
    P = build_matrix(f, gamma, 10)
    res = stationary(P)
    assert res.tail_mass == Fraction(1, 2 ** 9)
    assert stationarity_defect(P, res.nu) <= res.tail_mass
    assert res.diagnostics["reference"] == "V(0;0)"


def test_period_above_limit_gives_no_verdict():
    spec = load_spec("inversion_square")
    _, f, gamma = spec.build()
    P = build_matrix(f, gamma, 4, allow_degenerate=True)
    with pytest.raises(NoVerdict):
        stationary(P, period_max=1)


def test_oracle_refusals():
    _, f, gamma = build("split_basin_rational")
    P = build_matrix(f, gamma, 4)
    cls = next(s for s in P.states if s.kind == "disk")
    with pytest.raises(OracleRefused):
        brute_force_pullback(f, gamma, cls, cls, 1)
    with pytest.raises(OracleRefused):
        brute_force_pullback(f, gamma, P.states[0], P.states[0], ORACLE_MAX_N + 1)


def test_oracle_at_zero_is_indicator(escaping):
    f, gamma, P = escaping
    for U in P.states:
        for V in P.states:
            assert brute_force_pullback(f, gamma, U, V, 0) == (1 if U == V else 0)


def test_class_state_aggregates_over_rationals():
    _, f, gamma = build("split_basin_rational")
    P = build_matrix(f, gamma, 4)
    cls = next(s for s in P.states if s.kind == "disk")
    assert P[(state(P, "V(0;0)"), cls)] == 1
    assert P[(cls, cls)] == 1
