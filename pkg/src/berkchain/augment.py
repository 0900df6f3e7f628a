"""Growing a vertex set until the pair (f, Gamma) is analytically stable."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .cycles import AttractingCycle, find_attracting_cycles, orbit_with_preperiodicity
from .errors import ExtensionRequired, HeightBudgetExceeded
from .partition import check_stability
from .vertexset import VertexSet


@dataclass
class AugmentConfig:
    orbit_bound: int = 64
    depth: int = 8
    max_period: int = 4
    max_new_vertices: int = 8
    extend: str = "auto"  # field extension policy for periodic-point search


@dataclass
class AugmentationResult:
    gamma: VertexSet  # input
    gamma_prime: VertexSet
    verdict: str  # stable | inconclusive
    certificates: dict = dc_field(default_factory=dict)  # vertex key -> dict
    added: list = dc_field(default_factory=list)
    steps: list = dc_field(default_factory=list)
    diagnostics: dict = dc_field(default_factory=dict)
    report: object = None  # final StabilityReport

    @property
    def stable(self):
        return self.verdict == "stable"

    def describe(self):
        out = {
            "verdict": self.verdict,
            "gamma_prime": [p.key() for p in self.gamma_prime],
            "added": [p.key() for p in self.added],
            "steps": self.steps,
            "certificates": self.certificates,
        }
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def _certificate(verdict):
    if verdict.kind == "in-gamma":
        return {"type": "maps-into-gamma", "image": verdict.image.key()}
    cert = verdict.detail.certificate
    kind = cert.get("certificate")
    if kind in ("wandering", "escaping-residue-orbit", "inner-cycle") or (kind == "nesting" and not cert.get("strict")):
        label = "wandering-F-disk"
    else:
        label = "attracting-F-disk"
    return {"type": label, "image": verdict.image.key(), "domain": verdict.domain.key(), "detail": cert}


def _cycle_entry(orbit, cycles):
    """First k >= 1 with orbit[k] inside a certified cycle disk, and the cycle."""
    for k, x in enumerate(orbit.points[1:], 1):
        for cyc in cycles:
            if any(E.contains(x) for E in cyc.disks[:-1]):
                return k, cyc
    return None, None


def stabilize(f, gamma, config=None, **overrides):
    """Adjoin forward images of offending vertices until (f, Gamma') is stable.

    Never reports stable unless an independent stability check passes.
    """
    cfg = config or AugmentConfig()
    for k, v in overrides.items():
        setattr(cfg, k, v)
    start = gamma if isinstance(gamma, VertexSet) else VertexSet(gamma)
    cur = start
    added, steps = [], []
    cycles = {}
    cycle_log = []
    first = None

    while True:
        try:
            rep = check_stability(f, cur, cfg.orbit_bound, max_period=cfg.max_period)
        except HeightBudgetExceeded as exc:
            diag = {"reason": str(exc), "stability": "inconclusive"}
            if first is not None:
                diag["first_offending_vertex"] = first.key()
            return AugmentationResult(start, cur, "inconclusive", {}, added, steps, diag, None)
        if rep.stable is True:
            certs = {v.vertex.key(): _certificate(v) for v in rep.verdicts}
            diag = {"attracting_cycle_log": cycle_log} if cycle_log else {}
            return AugmentationResult(start, cur, "stable", certs, added, steps, diag, rep)

        bad = rep.offending()[0]
        z = bad.vertex
        first = first or z
        orbit = orbit_with_preperiodicity(f, z, cfg.orbit_bound)
        new, move = [], None

        if orbit.closed:
            new = [p for p in orbit.points[1:] if p not in cur]
            move = "adjoin-preperiodic-orbit"
        if not new:
            k, cyc = None, None
            for n in range(1, cfg.max_period + 1):
                if n not in cycles:
                    try:
                        cycles[n] = find_attracting_cycles(f, gamma=start, log=cycle_log, periods=[n],
                                                           extend=cfg.extend)
                    except ExtensionRequired as exc:  # pragma: no cover - logged per period
                        cycle_log.append(str(exc))
                        cycles[n] = []
                k, cyc = _cycle_entry(orbit, cycles[n])
                if cyc is not None:
                    break
            if cyc is not None:
                new = [p for p in orbit.points[1:k] if p not in cur]
                new += [E.boundary for E in cyc.disks[:-1] if E.boundary not in cur and E.boundary not in new]
                move = "adjoin-attracting-disk-boundary"
        if not new:
            try:
                nxt = f.image(z)
            except HeightBudgetExceeded as exc:
                return _give_up(start, cur, added, steps, rep, z, str(exc), first_offending_vertex=first.key())
            if nxt not in cur:
                new = [nxt]
                move = "adjoin-image"

        if not new:
            return _give_up(start, cur, added, steps, rep, z, "no vertex left to adjoin", first_offending_vertex=first.key())
        if len(added) + len(new) > cfg.max_new_vertices:
            return _give_up(start, cur, added, steps, rep, z,
                            f"max_new_vertices = {cfg.max_new_vertices} reached",
                            pending=[p.key() for p in new], orbit=orbit.describe(),
                            first_offending_vertex=first.key())
        steps.append({"vertex": z.key(), "move": move, "adjoined": [p.key() for p in new]})
        added.extend(new)
        cur = cur.add(*new)


def _give_up(start, cur, added, steps, rep, z, why, **extra):
    diag = {"offending_vertex": z.key(), "reason": why, "stability": rep.status}
    diag.update(extra)
    return AugmentationResult(start, cur, "inconclusive", {}, added, steps, diag, rep)
