#!/usr/bin/env python3
"""Regenerate the committed CSV fixtures consumed by plots/render.py.

Runs the fixed experiment battery below into plots/fixtures/ and renames
the artifacts to the figure kinds.  Rerunning must reproduce the committed
bytes; these runs are seeded and single-threaded for that reason.
"""

import pathlib
import sys

from designlab.cli import main as designlab_main

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "plots" / "fixtures"

# experiment argv -> {artifact stem: fixture stem}
BATTERY = [
    (["spectral-mix", "--n", "12"],
     {"spectral-mix": "mixing_curve", "spectral-spectrum": "spectrum"}),
    (["coll-mc", "--ensemble", "cg", "--n", "3", "--s", "20",
      "--trials", "4000", "--seed", "77"],
     {"coll-mc": "coll_vs_depth"}),
    (["anticonc", "--ensemble", "cg", "--n", "4", "--s", "40",
      "--trials", "1000", "--seed", "78"],
     {"anticonc": "anticonc"}),
    (["gap-2d", "--d", "2", "--m", "2", "--t", "2", "--format", "csv"],
     {"gap-2d": "gap_table"}),
]


def run() -> int:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    out = str(FIXTURES)
    for argv, renames in BATTERY:
        code = designlab_main([*argv, "--threads", "1", "--out", out])
        if code != 0:
            return code
        for stem, target in renames.items():
            for suffix in (".csv", ".meta.json"):
                (FIXTURES / f"{stem}{suffix}").rename(
                    FIXTURES / f"{target}{suffix}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
