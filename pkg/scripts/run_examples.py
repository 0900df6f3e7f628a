#!/usr/bin/env python3
"""Run every bundled spec through the CLI and summarize the outcome.

    python3 scripts/run_examples.py [--command report] [--out results/]
"""

import argparse
import contextlib
import io
import json
import sys
from pathlib import Path

from berkchain.cli import main

ROOT = Path(__file__).resolve().parent.parent


def run_one(command, path):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main([command, str(path)])
    text = out.getvalue() or err.getvalue()
    try:
        payload = json.loads(text)
    except json.JSONDecodeError:
        payload = {"raw": text}
    return code, payload


def summary(payload):
    if "error" in payload:
        return payload["error"]
    for key in ("stationary", "augmentation", "stability", "boundary"):
        if key in payload:
            block = payload[key]
            return block.get("kind") or block.get("verdict") or block.get("status") or str(block)
    return "ok"


def main_cli(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--command", default="report")
    ap.add_argument("--specs", type=Path, default=ROOT / "specs")
    ap.add_argument("--out", type=Path, help="directory for full JSON payloads")
    args = ap.parse_args(argv)
    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
    for path in sorted(args.specs.glob("*.json")):
        code, payload = run_one(args.command, path)
        ms = payload.get("timing_ms", "-")
        print(f"{path.stem:28s} exit={code}  {summary(payload):14s} {ms} ms")
        if args.out:
            (args.out / f"{path.stem}.{args.command}.json").write_text(json.dumps(payload, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main_cli())
