import io
import json
import subprocess
import sys

import pytest

from berkchain.cli import main

from conftest import SPECS


def run(args, stdin=None, capsys=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def spec(name):
    return str(SPECS / f"{name}.json")


def test_chain_tsv(capsys):
    code, out, _ = run(["chain", spec("inversion_square"), "--format", "tsv"], capsys=capsys)
    assert code == 0
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert rows[0][0] == "state" and len(rows) == 6


def test_stationary_json(capsys):
    code, out, _ = run(["stationary", spec("split_basin_rational")], capsys=capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["stationary"]["per_copy"] == {"D(0;-1/2;{1 + w^2})": "1/2"}
    assert isinstance(payload["timing_ms"], int)


def test_report_dot(capsys):
    code, out, _ = run(["report", spec("escaping_disks"), "--format", "dot", "--depth", "6"], capsys=capsys)
    assert code == 0
    assert out.startswith("graph hull") and "mass 1/2" in out


def test_report_after_augmentation(capsys):
    code, out, _ = run(["report", spec("escaping_gauss")], capsys=capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["augmentation"]["verdict"] == "stable"
    assert payload["classify_limit"]["consistent"] is True
    assert payload["stationary"]["kind"] == "converged"


def test_check_stability_and_classify(capsys):
    code, out, _ = run(["check-stability", spec("escaping_gauss")], capsys=capsys)
    assert code == 0 and json.loads(out)["stability"]["status"] == "unstable"
    code, out, _ = run(["classify-limit", spec("escaping_gauss")], capsys=capsys)
    boundary = json.loads(out)["boundary"]
    assert boundary["in_indeterminacy"] is True and boundary["gauss_point_stability"] == "unstable"


def test_exit_codes(capsys, monkeypatch):
    code, _, err = run(["chain", spec("square")], capsys=capsys)
    assert code == 4 and json.loads(err)["error"] == "totally-invariant-vertex"
    code, _, err = run(["chain", "-"], stdin="{oops", capsys=capsys, monkeypatch=monkeypatch)
    assert code == 2 and json.loads(err)["error"] == "parse-error"
    code, _, err = run(["chain", spec("escaping_gauss")], capsys=capsys)
    assert code == 7
    code, _, err = run(["stationary", spec("inversion_square"), "--period-max", "1"], capsys=capsys)
    assert code == 6
    code, _, _ = run(["enumerate", "/nonexistent.json"], capsys=capsys)
    assert code == 1


def test_augment_inconclusive_exit(capsys, monkeypatch):
    text = json.dumps({
        "map": {"numerator": "z^2 - z + t", "denominator": "z"},
        "vertices": [{"center": "0", "radius_exponent": "1/3"}],
        "bounds": {"max_new_vertices": 3},
    })
    code, out, _ = run(["augment"], stdin=text, capsys=capsys, monkeypatch=monkeypatch)
    assert code == 3
    diag = json.loads(out)["augmentation"]["diagnostics"]
    assert diag["first_offending_vertex"] == "V(0;1/3)"


def test_extend_field_deny_still_stabilizes(capsys):
    code, out, _ = run(["augment", spec("escaping_gauss"), "--extend-field", "deny"], capsys=capsys)
    assert code == 0
    assert json.loads(out)["augmentation"]["verdict"] == "stable"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "berkchain", "classify-limit", spec("escaping_disks")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["boundary"]["in_indeterminacy"] is False


def test_output_is_deterministic(capsys):
    outs = []
    for _ in range(2):
        _, out, _ = run(["report", spec("split_basin_gaussian")], capsys=capsys)
        payload = json.loads(out)
        payload.pop("timing_ms")
        outs.append(payload)
    assert outs[0] == outs[1]


def test_examples_script(tmp_path):
    script = SPECS.parent / "scripts" / "run_examples.py"
    proc = subprocess.run([sys.executable, str(script), "--command", "classify-limit", "--out", str(tmp_path)],
                          capture_output=True, text=True, check=True)
    lines = proc.stdout.strip().splitlines()
    assert len(lines) == len(list(SPECS.glob("*.json")))
    assert (tmp_path / "escaping_gauss.classify-limit.json").exists()
