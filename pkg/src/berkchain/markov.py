"""Transition matrices on J-state spaces, exact powers, stationary vectors and the pullback oracle."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import sympy

from .berkovich import OpenDisk
from .dynamics import image_disk
from .errors import NoVerdict, OracleRefused, TotallyInvariantVertex
from .partition import check_stability, enumerate_states, row_counts
from .vertexset import VertexSet


def totally_invariant_vertices(f, gamma):
    return [z for z in gamma if f.image(z) == z and f.local(z).degree == f.d]


@dataclass
class TransitionMatrix:
    space: object  # StateSpace
    entries: dict  # (U, V) -> Fraction
    d: int
    degenerate: list = dc_field(default_factory=list)  # totally invariant vertices, if allowed

    @property
    def states(self):
        return self.space.states

    @property
    def complete(self):
        return self.space.complete_rows

    @property
    def closed(self):
        return len(self.complete) == len(self.states)

    def row(self, U):
        return {V: p for (W, V), p in self.entries.items() if W == U}

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0))

    def dense(self):
        return [[self[(U, V)] for V in self.states] for U in self.states]

    def to_dict(self):
        return {
            "states": self.space.to_dict()["states"],
            "d": self.d,
            "rows": {
                U.key(): {V.key(): str(p) for V, p in sorted(self.row(U).items(), key=lambda kv: self.states.index(kv[0]))}
                for U in self.states if U in self.complete
            },
            "degenerate_vertices": [z.key() for z in self.degenerate],
        }

    def to_tsv(self):
        keys = [s.key() for s in self.states]
        lines = ["state\t" + "\t".join(keys)]
        for U in self.states:
            if U in self.complete:
                cells = [str(self[(U, V)]) for V in self.states]
            else:
                cells = ["?"] * len(self.states)
            lines.append(U.key() + "\t" + "\t".join(cells))
        return "\n".join(lines)


def multiplicity(f, gamma, U, V, stability=None):
    gamma = gamma if isinstance(gamma, VertexSet) else VertexSet(gamma)
    if stability is None:
        stability = check_stability(f, gamma)
    if stability.stable is not True:
        from .errors import NotStable

        raise NotStable(f"(f, Gamma) is {stability.status}", stability)
    return row_counts(f, gamma, U).get(V, 0)


def build_matrix(f, gamma, depth, allow_degenerate=False, stability=None, orbit_bound=64):
    gamma = gamma if isinstance(gamma, VertexSet) else VertexSet(gamma)
    bad = totally_invariant_vertices(f, gamma)
    if bad and not allow_degenerate:
        raise TotallyInvariantVertex(bad[0].key())
    space = enumerate_states(f, gamma, depth, stability, orbit_bound=orbit_bound)
    entries = {}
    for U, row in space.rows.items():
        for V, m in row.items():
            entries[(U, V)] = Fraction(m, f.d)
    return TransitionMatrix(space, entries, f.d, bad)


# ---------------------------------------------------------------------------
# powers


def _step(P, dist):
    """One step of a row vector; mass on incomplete states goes to the sink."""
    out = {}
    lost = Fraction(0)
    for U, x in dist.items():
        if not x:
            continue
        if U not in P.complete:
            lost += x
            continue
        for V, p in P.row(U).items():
            out[V] = out.get(V, Fraction(0)) + x * p
    return out, lost


def row_power(P, U, n):
    """(P^n)_{U,.} restricted to known states, and the mass routed through incomplete rows."""
    dist = {U: Fraction(1)}
    sink = Fraction(0)
    for _ in range(n):
        dist, lost = _step(P, dist)
        sink += lost
    return {V: x for V, x in dist.items() if x}, sink


@dataclass
class MatrixPower:
    base: TransitionMatrix
    n: int
    entries: dict
    uncertainty: dict  # row -> additive bound on every entry of that row

    def __getitem__(self, key):
        return self.entries.get(key, Fraction(0))

    def exact_row(self, U):
        return self.uncertainty.get(U, Fraction(0)) == 0


def power(P, n):
    if n < 1:
        raise ValueError("n must be at least 1")
    entries, unc = {}, {}
    for U in P.states:
        if U not in P.complete:
            continue
        row, sink = row_power(P, U, n)
        unc[U] = sink
        for V, x in row.items():
            entries[(U, V)] = x
    return MatrixPower(P, n, entries, unc)


# ---------------------------------------------------------------------------
# stationary vectors


@dataclass
class StationaryResult:
    kind: str  # converged | periodic | refused
    nu: dict = dc_field(default_factory=dict)
    tail_mass: Fraction = Fraction(0)
    exact: bool = True
    period: int | None = None
    vectors: list = dc_field(default_factory=list)
    steps: int = 0
    reason: str = ""
    diagnostics: dict = dc_field(default_factory=dict)

    def describe(self, states=None):
        def vec(v):
            keys = states if states is not None else sorted(v, key=lambda s: s.key())
            return {s.key(): str(v.get(s, Fraction(0))) for s in keys}

        out = {"kind": self.kind, "steps": self.steps}
        if self.kind == "converged":
            out.update(nu=vec(self.nu), tail_mass=str(self.tail_mass), exact=self.exact)
            per_copy = self.per_copy()
            if per_copy:
                out["per_copy"] = {s.key(): str(x) for s, x in per_copy.items()}
        elif self.kind == "periodic":
            out.update(period=self.period, vectors=[vec(v) for v in self.vectors])
        else:
            out["reason"] = self.reason
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def _per_copy(self):
    """Mass of a single conjugate copy for aggregated class states."""
    return {s: x / s.conjugacy_size for s, x in self.nu.items() if s.conjugacy_size > 1}


StationaryResult.per_copy = _per_copy


def _dense_power_sequence(P, max_steps):
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in P.dense()])
    seq = [sympy.eye(M.rows), M]
    for _ in range(max_steps - 1):
        seq.append(seq[-1] * M)
    return M, seq


def _to_fraction(x):
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def _distinct_rows(M, states):
    out = []
    for i in range(M.rows):
        v = {states[j]: _to_fraction(M[i, j]) for j in range(M.cols) if M[i, j] != 0}
        if v not in out:
            out.append(v)
    return out


def _stationary_closed(P, max_steps, period_max):
    states = P.states
    M, seq = _dense_power_sequence(P, max_steps)
    for n in range(1, len(seq)):
        for p in range(1, min(period_max, n) + 1):
            if seq[n] == seq[n - p]:
                avg = sum((seq[n - k] for k in range(p)), sympy.zeros(M.rows, M.cols)) / p
                vectors = _distinct_rows(avg, states)
                if p == 1 and len(vectors) == 1:
                    return StationaryResult("converged", vectors[0], Fraction(0), True, steps=n)
                if p == 1:
                    return StationaryResult("periodic", period=1, vectors=vectors, steps=n,
                                            diagnostics={"note": "several closed classes"})
                return StationaryResult("periodic", period=p, vectors=vectors, steps=n)
    # no exact repetition: solve nu P = nu directly
    ns = (M.T - sympy.eye(M.rows)).nullspace()
    if len(ns) == 1:
        v = ns[0] / sum(ns[0])
        nu = {states[j]: _to_fraction(v[j]) for j in range(M.rows) if v[j] != 0}
        return StationaryResult("converged", nu, Fraction(0), True, steps=max_steps,
                                diagnostics={"method": "nullspace"})
    raise NoVerdict(f"no convergence or period <= {period_max} within {max_steps} steps")


def _stationary_truncated(P, max_steps, ref, tail_tol):
    states = P.states
    vertices = {s for s in states if s.kind == "vertex"}
    keep_vertices = {s for s in vertices if s.point in P.degenerate}
    watched = [s for s in states if s in P.complete and (s not in vertices or s in keep_vertices)]
    prev, sink = {ref: Fraction(1)}, Fraction(0)
    for n in range(1, max_steps + 1):
        cur, lost = _step(P, prev)
        sink += lost
        if n >= 2 and all(abs(cur.get(s, 0) - prev.get(s, 0)) <= max(sink, tail_tol) for s in watched):
            nu = {s: cur[s] for s in watched if cur.get(s)}
            tail = 1 - sum(nu.values())
            return StationaryResult("converged", nu, tail, tail == 0, steps=n,
                                    diagnostics={"reference": ref.key(), "sink_mass": str(sink)})
        prev = cur
    raise NoVerdict(f"rows did not settle within {max_steps} steps on the truncated space")


def stationary(P, max_steps=256, period_max=6, ref=None, tail_tol=Fraction(0)):
    if ref is None:
        ref = next(s for s in P.states if s.kind == "vertex")
    if P.closed:
        res = _stationary_closed(P, max_steps, period_max)
    else:
        res = _stationary_truncated(P, max_steps, ref, Fraction(tail_tol))
        others = [s for s in P.states if s.kind == "vertex" and s != ref]
        if others:
            try:
                alt = _stationary_truncated(P, max_steps, others[0], Fraction(tail_tol))
                gap = max((abs(alt.nu.get(s, 0) - res.nu.get(s, 0)) for s in set(alt.nu) | set(res.nu)), default=0)
                res.diagnostics["cross_check"] = {"reference": others[0].key(),
                                                  "max_gap": str(gap),
                                                  "within_tail": gap <= res.tail_mass + alt.tail_mass}
            except NoVerdict:
                res.diagnostics["cross_check"] = {"reference": others[0].key(), "max_gap": "no verdict"}
    return res


def stationarity_defect(P, nu):
    """max over complete states V of |(nu P)(V) - nu(V)|."""
    out = {}
    for U, x in nu.items():
        for V, p in P.row(U).items():
            out[V] = out.get(V, Fraction(0)) + x * p
    return max((abs(out.get(V, 0) - nu.get(V, 0)) for V in P.complete), default=Fraction(0))


# ---------------------------------------------------------------------------
# oracle


ORACLE_MAX_N = 6


def _preimage_count(f, n, target, y):
    """Multiplicity-weighted #{x in target : f^n(x) = y}."""
    kind = target[0]
    if kind == "point":
        z = target[1]
        if n == 0:
            return 1 if z == y else 0
        return f.local(z).degree * _preimage_count(f, n - 1, ("point", f.image(z)), y)
    if kind == "disk":
        D = target[1]
        if n == 0:
            return 1 if D.contains(y) else 0
        img = image_disk(f, D)
        k = D.direction.conjugacy_size
        k_img = img.image.direction.conjugacy_size
        return (k // k_img) * img.degree_on_disk * _preimage_count(f, n - 1, ("disk", img.image), y) \
            + k * img.surplus * f.d ** (n - 1)
    boundary = target[1]
    if n == 0:
        return 1 if all(OpenDisk(p, v).contains(y) for p, v in boundary) else 0
    total = -f.d * (len(boundary) - 1) * f.d ** (n - 1)
    for p, v in boundary:
        img = image_disk(f, OpenDisk(p, v))
        total += img.degree_on_disk * _preimage_count(f, n - 1, ("disk", img.image), y)
        total += img.surplus * f.d ** (n - 1)
    return total


def _as_target(V):
    if V.kind == "vertex":
        return ("point", V.point)
    if V.kind == "disk":
        return ("disk", V.disk)
    return ("inner", V.boundary)


def brute_force_pullback(f, gamma, U, V, n):
    """d^-n times the weighted count of n-th preimages in V of a representative of U."""
    if n < 0 or n > ORACLE_MAX_N:
        raise OracleRefused(f"n = {n} is outside the oracle range 0..{ORACLE_MAX_N}")
    if U.kind == "disk" and U.direction.kind == "class":
        raise OracleRefused("class disks have no representative over the ground field")
    y = U.representative()
    return Fraction(_preimage_count(f, n, _as_target(V), y), f.d ** n)
