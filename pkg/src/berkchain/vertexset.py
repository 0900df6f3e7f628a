"""Vertex sets, the partition S(Gamma) and canonical state keys."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .berkovich import (
    OpenDisk,
    SimpleDomain,
    TypeIIPoint,
    as_probe,
    direction_sort_key,
    join,
)


class VertexSet:
    """A finite nonempty set of type II points, kept in insertion order."""

    def __init__(self, points):
        pts = []
        for p in points:
            if p not in pts:
                pts.append(p)
        if not pts:
            raise ValueError("a vertex set must be nonempty")
        self.points = tuple(pts)
        self._inner = None

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, p):
        return p in self.points

    def __eq__(self, o):
        return isinstance(o, VertexSet) and set(self.points) == set(o.points)

    def __hash__(self):
        return hash(frozenset(self.points))

    def add(self, *points):
        return VertexSet(self.points + tuple(points))

    def ramification(self):
        e = 1
        for p in self.points:
            r = p.ramification()
            e = e * r // _gcd(e, r)
        return e

    def occupied_directions(self, p):
        """Directions at p (a vertex) that contain other vertices."""
        return {g.direction_at(p) for g in self.points if g != p}

    def inner_domains(self):
        if self._inner is None:
            found = {}
            for g in self.points:
                for d in sorted(self.occupied_directions(g), key=direction_sort_key):
                    boundary = [(g, d)]
                    disk = OpenDisk(g, d)
                    for h in self.points:
                        if h == g or not disk.contains(h):
                            continue
                        if any(separates_pts(k, g, h) for k in self.points if k not in (g, h)):
                            continue
                        boundary.append((h, g.direction_at(h)))
                    st = InnerState(boundary)
                    found.setdefault(st.key(), st)
            self._inner = tuple(found[k] for k in sorted(found))
        return self._inner

    def __str__(self):
        return "{" + ", ".join(p.key() for p in self.points) + "}"


def separates_pts(k, x, y):
    dx, dy = x.direction_at(k), y.direction_at(k)
    return dx is not None and dy is not None and dx != dy


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# states


class State:
    kind = "state"
    conjugacy_size = 1

    def __eq__(self, o):
        return isinstance(o, State) and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return self.key()

    def __repr__(self):
        return f"{type(self).__name__}({self.key()})"


class VertexState(State):
    kind = "vertex"

    def __init__(self, point):
        self.point = point

    def key(self):
        return self.point.key()

    def direction_at(self, p):
        return self.point.direction_at(p)

    def contains(self, x):
        return x == self.point

    def representative(self):
        return self.point


class DiskState(State):
    kind = "disk"

    def __init__(self, base, direction):
        self.base = base
        self.direction = direction
        self.disk = OpenDisk(base, direction)

    @property
    def conjugacy_size(self):
        return self.direction.conjugacy_size

    def key(self):
        return f"D({self.base.center};{self.base.q};{self.direction})"

    def direction_at(self, p):
        if p == self.base:
            return self.direction
        if self.disk.contains(p):
            raise ValueError(f"point {p} lies inside {self.key()}")
        return self.base.direction_at(p)

    def contains(self, x):
        return self.disk.contains(x)

    def representative(self):
        return self.base.lift(self.direction)


class InnerState(State):
    """A Gamma-domain with at least two boundary points."""

    kind = "inner"

    def __init__(self, boundary):
        self.boundary = tuple(sorted(boundary, key=lambda bd: (bd[0].key(), direction_sort_key(bd[1]))))
        self.domain = SimpleDomain(tuple(OpenDisk(p, d) for p, d in self.boundary))

    def key(self):
        return "I[" + ",".join(f"{p.key()}>{d}" for p, d in self.boundary) + "]"

    def boundary_points(self):
        return [p for p, _ in self.boundary]

    def direction_at(self, p):
        for b, d in self.boundary:
            if b == p:
                return d
        if self.domain.contains(p):
            raise ValueError(f"point {p} lies inside {self.key()}")
        return self.boundary[0][0].direction_at(p)

    def contains(self, x):
        return self.domain.contains(x)

    def representative(self):
        """A type II point on the hull segment between two boundary points."""
        (x, _), (y, _) = self.boundary[0], self.boundary[1]
        j = join(x, y)
        if j != x and j != y:
            return j
        lo, hi = (x, y) if j == y else (y, x)
        return TypeIIPoint(lo.center, (lo.q + hi.q) / 2)


def locate(gamma, x):
    """The element of S(Gamma) containing the type II (or type I) point x."""
    if isinstance(x, TypeIIPoint) and x in gamma:
        return VertexState(x)
    probe = as_probe(x)
    boundary = []
    for g in gamma:
        if any(
            k != g and _sep_probe(k, g, probe) for k in gamma
        ):
            continue
        boundary.append((g, probe.direction_at(g)))
    if len(boundary) == 1:
        return DiskState(*boundary[0])
    return InnerState(boundary)


def _sep_probe(k, g, probe):
    dg = g.direction_at(k)
    dx = probe.direction_at(k)
    return dx is not None and dg != dx


def is_gamma_disk(gamma, p, direction):
    return direction not in gamma.occupied_directions(p)


# ---------------------------------------------------------------------------
# hull tree


def hull_tree(gamma):
    """Nodes of the convex hull (vertices and branch points) with parent links."""
    nodes = list(gamma)
    changed = True
    while changed:
        changed = False
        for a in list(nodes):
            for b in list(nodes):
                j = join(a, b)
                if j not in nodes:
                    nodes.append(j)
                    changed = True
    parents = {}
    for n in nodes:
        above = [m for m in nodes if m != n and n.dominated_by(m)]
        if above:
            parents[n] = min(above, key=lambda m: -m.q)
    return nodes, parents


def hull_dot(gamma, states=()):
    """DOT text for the hull tree.

    `states` is a sequence of (State, label); domain states are drawn as boxes
    attached to their boundary vertices, vertex labels annotate hull nodes.
    """
    nodes, parents = hull_tree(gamma)
    names = {n: f"n{i}" for i, n in enumerate(nodes)}
    vertex_labels = {st.point: lab for st, lab in states if st.kind == "vertex"}
    lines = ["graph hull {"]
    for n in nodes:
        shape = "doublecircle" if n in gamma else "point"
        text = n.key()
        if n in vertex_labels:
            text += f"\\n{vertex_labels[n]}"
        lines.append(f'  {names[n]} [label="{text}", shape={shape}];')
    for n, p in parents.items():
        lines.append(f"  {names[p]} -- {names[n]};")
    for i, (st, lab) in enumerate(s for s in states if s[0].kind != "vertex"):
        lines.append(f'  s{i} [shape=box, label="{st.key()}\\n{lab}"];')
        bases = [st.base] if st.kind == "disk" else st.boundary_points()
        for b in bases:
            if b in names:
                lines.append(f"  {names[b]} -- s{i} [style=dashed];")
    lines.append("}")
    return "\n".join(lines)


def parse_point(center, q):
    return TypeIIPoint(center, Fraction(q))
