import json
import random
from contextlib import contextmanager
from pathlib import Path

import pytest

from berkchain.problem import ProblemSpec, parse_spec

SPECS = Path(__file__).resolve().parent.parent / "specs"

_CRITERIA = {}


def load_spec(name):
    return parse_spec((SPECS / f"{name}.json").read_text())


def build(name):
    return load_spec(name).build()


def keyed(P):
    """Matrix as {row key: {col key: str}} over complete rows, zeros dropped."""
    return {U.key(): {V.key(): str(p) for V, p in P.row(U).items() if p} for U in P.complete}


def state(P, key):
    return next(s for s in P.states if s.key() == key)


COEFFS = ("1/t", "1", "t")


def random_quadratics(count=20, seed=2024):
    """Degree-2 maps with every coefficient drawn from {1/t, 1, t}."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        c = [rng.choice(COEFFS) for _ in range(5)]
        num = f"{c[0]}*z^2 + {c[1]}*z + {c[2]}"
        den = "1" if rng.random() < 0.5 else f"{c[3]}*z + {c[4]}"
        try:
            _, f, _ = ProblemSpec(num, den).build()
        except Exception:
            continue
        out.append((f"({num})/({den})", f))
    return out


@contextmanager
def criterion(n, text):
    """Record a pass/fail line for acceptance criterion n."""
    try:
        yield
    except BaseException:
        _CRITERIA[n] = ("FAIL", text)
        raise
    _CRITERIA.setdefault(n, ("PASS", text))


@pytest.fixture
def record():
    return criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, text = _CRITERIA[n]
        terminalreporter.write_line(f"{status} criterion {n}: {text}")
