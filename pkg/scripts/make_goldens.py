#!/usr/bin/env python3
"""Regenerate the golden CSVs in goldens/ from the committed run configs.

CI regenerates every figure config and diff-checks the bytes against these
files, so rerun this script (and commit the result) whenever a config or the
simulation itself changes intentionally.
"""
from __future__ import annotations

import pathlib
import sys

REPO = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from pulselab.cli import main  # noqa: E402


def run() -> None:
    for cfg in sorted((REPO / "configs").glob("fig*.cfg")):
        out = REPO / "goldens" / (cfg.stem + ".csv")
        code = main(["sweep", "--config", str(cfg), "--output", str(out)])
        if code != 0:
            raise SystemExit(f"sweep failed for {cfg} (exit {code})")
        print(f"wrote {out}")


if __name__ == "__main__":
    run()
