"""End-to-end acceptance checks on the worked examples.

Each test records one PASS/FAIL line that is printed in the terminal summary.
"""

import time
from fractions import Fraction

import pytest

from berkchain import (
    ProblemSpec,
    TotallyInvariantVertex,
    VertexSet,
    brute_force_pullback,
    build_matrix,
    check_stability,
    classify_boundary,
    gauss_point,
    power,
    stabilize,
    stationary,
)
from berkchain.markov import stationarity_defect
from berkchain.problem import VertexSpec

from conftest import build, keyed, load_spec, random_quadratics, state

H = Fraction(1, 2)


def _escaping_expected(depth):
    rows = {"V(0;0)": {"V(0;0)": "1/2", "D(0;0;0)": "1/2"}}
    for a in range(depth - 1):
        rows[f"D(0;0;{a})"] = {"D(0;0;0)": "1/2", f"D(0;0;{a + 1})": "1/2"}
    return rows


def test_criterion_1_escaping_disks(record):
    with record(1, "escaping disks: depth-8 matrix and stationary masses 2^-(a+1)"):
        t0 = time.perf_counter()
        _, f, gamma = build("escaping_disks")
        P = build_matrix(f, gamma, 8)
        assert keyed(P) == _escaping_expected(8)
        res = stationary(P)
        assert res.kind == "converged"
        assert res.nu.get(state(P, "V(0;0)"), 0) == 0
        for a in range(7):
            assert res.nu[state(P, f"D(0;0;{a})")] == Fraction(1, 2 ** (a + 1))
        assert res.tail_mass <= Fraction(1, 2 ** 7)
        assert time.perf_counter() - t0 <= 10


def test_criterion_2_inversion_square(record):
    with record(2, "inversion square: 5 states, displayed matrix, periodic(2) vectors"):
        t0 = time.perf_counter()
        _, f, gamma = build("inversion_square")
        P = build_matrix(f, gamma, 8, allow_degenerate=True)
        a_plus, a_minus = "I[V(0;0)>0,V(0;1)>inf]", "I[V(0;-1)>0,V(0;0)>inf]"
        assert sorted(s.key() for s in P.states) == sorted(
            ["V(0;0)", "V(0;1)", "V(0;-1)", a_plus, a_minus])
        assert P.closed
        assert keyed(P) == {
            a_plus: {a_minus: "1"},
            a_minus: {a_plus: "1"},
            "V(0;0)": {"V(0;0)": "1"},
            "V(0;1)": {a_minus: "1"},
            "V(0;-1)": {a_plus: "1"},
        }
        res = stationary(P)
        assert res.kind == "periodic" and res.period == 2
        want = [{state(P, a_plus): H, state(P, a_minus): H}, {state(P, "V(0;0)"): Fraction(1)}]
        assert sorted(res.vectors, key=len) == sorted(want, key=len)
        assert time.perf_counter() - t0 <= 5


def test_criterion_3_escaping_gauss(record):
    with record(3, "escaping Gauss point: unstable, stabilized, 3x3 matrix, all mass on A"):
        t0 = time.perf_counter()
        _, f, gamma = build("escaping_gauss")
        assert check_stability(f, gamma).status == "unstable"
        res = stabilize(f, gamma)
        assert res.verdict == "stable"
        keys = {p.key() for p in res.gamma_prime}
        assert {"V(0;0)", "V(0;-1)"} <= keys
        P = build_matrix(f, res.gamma_prime, 8, stability=res.report)
        assert len(P.states) == 3 and P.closed
        (A,) = [s for s in P.states if s.kind != "vertex"]
        assert keyed(P) == {s.key(): {A.key(): "1"} for s in P.states}
        nu = stationary(P).nu
        assert nu == {A: Fraction(1)}
        assert time.perf_counter() - t0 <= 5


def test_criterion_4_split_basin(record):
    with record(4, "split basin: 5x5 matrix over Q(i), nu(V+) = nu(V-) = 1/2, per-copy 1/2 over Q"):
        t0 = time.perf_counter()
        _, f, gamma = build("split_basin_gaussian")
        P = build_matrix(f, gamma, 8)
        vp, vm = "D(0;-1/2;(a))", "D(0;-1/2;(-a))"
        half = {vp: "1/2", vm: "1/2"}
        assert len(P.states) == 5 and P.closed
        assert keyed(P) == {
            vp: half, vm: half, "V(0;0)": half,
            "V(0;-1)": {"V(0;-1/2)": "1"},
            "V(0;-1/2)": half,
        }
        res = stationary(P)
        assert res.kind == "converged" and res.exact
        assert res.nu == {state(P, vp): H, state(P, vm): H}

        _, g, gamma_q = build("split_basin_rational")
        Q = build_matrix(g, gamma_q, 8)
        res_q = stationary(Q)
        (cls,) = [s for s in Q.states if s.kind == "disk"]
        assert cls.conjugacy_size == 2
        assert res_q.nu == {cls: Fraction(1)}
        assert res_q.per_copy() == {cls: H}
        assert time.perf_counter() - t0 <= 5


def _row_sums_are_one(P):
    return all(sum(P.row(U).values()) == 1 for U in P.complete)


def test_criterion_5_row_sums_examples(record):
    with record(5, "row sums are exactly 1 on the examples and on random stabilized quadratics"):
        for name in ("escaping_disks", "inversion_square", "split_basin_gaussian", "split_basin_rational"):
            spec = load_spec(name)
            _, f, gamma = spec.build()
            assert _row_sums_are_one(build_matrix(f, gamma, 8, allow_degenerate=spec.allow_degenerate))
        _, f, gamma = build("escaping_gauss")
        res = stabilize(f, gamma)
        assert _row_sums_are_one(build_matrix(f, res.gamma_prime, 8, stability=res.report))


def test_criterion_5_row_sums_random(record):
    with record(5, "row sums are exactly 1 on the examples and on random stabilized quadratics"):
        succeeded = 0
        for _, f in random_quadratics(20):
            res = stabilize(f, VertexSet([gauss_point()]), max_new_vertices=6)
            if not res.stable:
                continue
            succeeded += 1
            P = build_matrix(f, res.gamma_prime, 6, allow_degenerate=True, stability=res.report)
            assert _row_sums_are_one(P)
        assert succeeded >= 15


@pytest.mark.parametrize("name", ["escaping_disks", "inversion_square"])
def test_criterion_6_oracle(record, name):
    with record(6, "matrix powers equal brute-force pullback counts at depth 4, n = 1..3"):
        spec = load_spec(name)
        _, f, gamma = spec.build()
        P = build_matrix(f, gamma, 4, allow_degenerate=spec.allow_degenerate)
        checked = 0
        for n in (1, 2, 3):
            Pn = power(P, n)
            for U in P.complete:
                if not Pn.exact_row(U):
                    continue
                for V in P.states:
                    assert Pn[(U, V)] == brute_force_pullback(f, gamma, U, V, n), (n, U.key(), V.key())
                    checked += 1
        assert checked >= 40


def test_criterion_7_boundary_correspondence(record):
    with record(7, "indeterminacy of the boundary limit matches instability of the Gauss point"):
        maps = [(n, build(n)[1]) for n in ("escaping_disks", "inversion_square", "escaping_gauss")]
        maps += random_quadratics(20)
        g = VertexSet([gauss_point()])
        for label, f in maps:
            rep = check_stability(f, g)
            assert rep.stable is not None, label
            assert classify_boundary(f).in_indeterminacy == (rep.stable is False), label


def test_criterion_8_totally_invariant_refusal(record):
    with record(8, "z^2 with the Gauss point is refused as totally invariant"):
        _, f, gamma = build("square")
        with pytest.raises(TotallyInvariantVertex) as info:
            build_matrix(f, gamma, 8)
        assert info.value.kind == "totally-invariant-vertex"


def test_criterion_9_honest_failure(record):
    with record(9, "long pre-closure orbit with max_new_vertices = 3 is inconclusive, not stable"):
        base = load_spec("escaping_disks")
        spec = ProblemSpec(base.numerator, base.denominator, [VertexSpec("0", "1/3")])
        _, f, gamma = spec.build()
        res = stabilize(f, gamma, max_new_vertices=3)
        assert res.verdict == "inconclusive"
        assert not res.stable
        diag = res.diagnostics
        assert diag["offending_vertex"].startswith("V(")
        assert diag["first_offending_vertex"] == "V(0;1/3)"
        assert len(res.added) <= 3


def test_stationary_defect_is_within_tail():
    _, f, gamma = build("escaping_disks")
    P = build_matrix(f, gamma, 8)
    res = stationary(P)
    assert stationarity_defect(P, res.nu) <= res.tail_mass
