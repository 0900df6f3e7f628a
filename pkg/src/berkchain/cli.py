"""Command-line front end.

    berkchain COMMAND [SPEC.json | -] [options]

Reads a problem spec (stdin by default), prints JSON (or TSV/DOT) on stdout
and diagnostics on stderr.  Exit status is 0 on success and the typed error
code otherwise; inconclusive verdicts exit with the inconclusive code.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .augment import AugmentConfig, stabilize
from .berkovich import gauss_point
from .errors import BerkChainError, Inconclusive
from .expr import parse_rational
from .markov import build_matrix, stationary
from .partition import check_stability, classify_boundary, enumerate_states
from .problem import parse_spec, to_jsonable
from .vertexset import VertexSet, hull_dot

COMMANDS = ("check-stability", "enumerate", "chain", "stationary", "augment", "classify-limit", "report")


def _parser():
    p = argparse.ArgumentParser(prog="berkchain", description="Markov chains of non-Archimedean rational maps.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("spec", nargs="?", default="-", help="problem spec JSON file, or - for stdin")
    p.add_argument("--depth", type=int, help="BFS levels of J-states to enumerate")
    p.add_argument("--orbit-bound", type=int, help="forward steps allowed when classifying a domain")
    p.add_argument("--max-period", type=int, help="longest attracting cycle to search for")
    p.add_argument("--max-new-vertices", type=int, help="vertices augmentation may add before giving up")
    p.add_argument("--power-steps", type=int, help="matrix powers tried for the stationary vector")
    p.add_argument("--period-max", type=int, help="longest period accepted for a periodic chain")
    p.add_argument("--tail-tol", help="extra slack (exact rational) for truncated convergence")
    p.add_argument("--format", choices=("json", "tsv", "dot"), default="json")
    p.add_argument("--extend-field", choices=("auto", "deny"),
                   help="whether periodic-point search may extend Q by a residue polynomial")
    p.add_argument("--allow-degenerate", action="store_true",
                   help="build the chain even if a vertex is totally invariant")
    return p


def _apply_flags(spec, args):
    b = spec.bounds
    for name in ("depth", "orbit_bound", "max_period", "max_new_vertices", "power_steps", "period_max"):
        val = getattr(args, name)
        if val is not None:
            if val < 1:
                raise BerkChainError(f"--{name.replace('_', '-')} must be positive")
            setattr(b, name, val)
    if args.tail_tol is not None:
        parse_rational(args.tail_tol)
        b.tail_tol = args.tail_tol
    if args.extend_field:
        spec.extend_field = args.extend_field
    if args.allow_degenerate:
        spec.allow_degenerate = True
    return spec


class Pipeline:
    """Runs commands on one spec, reusing intermediate results."""

    def __init__(self, spec):
        self.spec = spec
        self.field, self.f, self.gamma = spec.build()
        self.b = spec.bounds
        self.log = []

    def stability(self, gamma=None):
        return check_stability(self.f, gamma or self.gamma, self.b.orbit_bound, max_period=self.b.max_period)

    def augment(self):
        cfg = AugmentConfig(self.b.orbit_bound, self.b.depth, self.b.max_period, self.b.max_new_vertices,
                            self.spec.extend_field)
        res = stabilize(self.f, self.gamma, cfg)
        self.log.extend(res.diagnostics.get("attracting_cycle_log", []))
        return res

    def matrix(self, gamma=None, stability=None):
        return build_matrix(self.f, gamma or self.gamma, self.b.depth, self.spec.allow_degenerate,
                            stability, self.b.orbit_bound)

    def stationary(self, P):
        return stationary(P, self.b.power_steps, self.b.period_max, tail_tol=parse_rational(self.b.tail_tol))

    def classify_limit(self):
        bc = classify_boundary(self.f)
        rep = self.stability(VertexSet([gauss_point()]))
        out = bc.describe()
        out["gauss_point_stability"] = rep.status
        out["consistent"] = rep.stable is not None and bc.in_indeterminacy == (rep.stable is False)
        return out


def _matrix_payload(P):
    out = P.to_dict()
    if P.degenerate:
        out["note"] = "totally invariant vertex present; chain built on request"
    return out


def _dot(gamma, P, res):
    labels = []
    masses = {}
    if res.kind == "converged":
        masses = res.nu
    elif res.kind == "periodic":
        masses = {s: sum((v.get(s, Fraction(0)) for v in res.vectors), Fraction(0)) / len(res.vectors)
                  for s in P.states}
    for s in P.states:
        labels.append((s, f"mass {masses.get(s, Fraction(0))}"))
    return hull_dot(gamma, labels)


def run(command, spec):
    """Execute a command; returns (payload, text_output or None, exit_code)."""
    pipe = Pipeline(spec)
    t0 = time.perf_counter()
    payload = {"command": command, "field": pipe.field.describe(), "map": str(pipe.f), "degree": pipe.f.d}
    text = None
    code = 0

    if command == "check-stability":
        rep = pipe.stability()
        payload["stability"] = rep.describe()
        code = Inconclusive.code if rep.stable is None else 0
    elif command == "enumerate":
        space = enumerate_states(pipe.f, pipe.gamma, spec.bounds.depth, pipe.stability())
        payload["state_space"] = space.to_dict()
    elif command in ("chain", "stationary"):
        P = pipe.matrix()
        payload["matrix"] = _matrix_payload(P)
        if command == "chain":
            text = P.to_tsv()
        else:
            res = pipe.stationary(P)
            payload["stationary"] = res.describe(P.states)
            text = _dot(pipe.gamma, P, res)
    elif command == "augment":
        res = pipe.augment()
        payload["augmentation"] = res.describe()
        code = 0 if res.stable else Inconclusive.code
    elif command == "classify-limit":
        payload["boundary"] = pipe.classify_limit()
    elif command == "report":
        aug = pipe.augment()
        payload["augmentation"] = aug.describe()
        payload["classify_limit"] = pipe.classify_limit()
        if aug.stable:
            gp = aug.gamma_prime
            payload["stability"] = aug.report.describe()
            P = pipe.matrix(gp, aug.report)
            payload["state_space"] = P.space.to_dict()
            payload["matrix"] = _matrix_payload(P)
            res = pipe.stationary(P)
            payload["stationary"] = res.describe(P.states)
            text = _dot(gp, P, res)
        else:
            code = Inconclusive.code
    payload["extension_log"] = pipe.log
    payload["timing_ms"] = int((time.perf_counter() - t0) * 1000)
    return to_jsonable(payload), text, code


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        if args.spec == "-":
            text = sys.stdin.read()
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
        spec = _apply_flags(parse_spec(text), args)
        payload, extra, code = run(args.command, spec)
    except BerkChainError as exc:
        err = {"error": exc.kind, "message": str(exc)}
        for attr in ("diagnostics", "position"):
            if getattr(exc, attr, None) is not None:
                err[attr] = to_jsonable(getattr(exc, attr))
        print(json.dumps(err, indent=2), file=sys.stderr)
        return exc.code
    except OSError as exc:
        print(json.dumps({"error": "io-error", "message": str(exc)}), file=sys.stderr)
        return 1

    if args.format == "json":
        print(json.dumps(payload, indent=2))
    elif args.format == "tsv":
        if "matrix" not in payload:
            print("tsv output needs a matrix (use chain, stationary or report)", file=sys.stderr)
            return 1
        print(extra if args.command == "chain" else _tsv_from_payload(payload["matrix"]))
    else:
        if extra is None or args.command == "chain":
            print("dot output needs a stationary result (use stationary or report)", file=sys.stderr)
            return 1
        print(extra)
    return code


def _tsv_from_payload(matrix):
    keys = [s["key"] for s in matrix["states"]]
    lines = ["state\t" + "\t".join(keys)]
    for k in keys:
        row = matrix["rows"].get(k)
        cells = [row.get(v, "0") for v in keys] if row is not None else ["?"] * len(keys)
        lines.append(k + "\t" + "\t".join(cells))
    return "\n".join(lines)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
