#!/usr/bin/env python3
"""Weight-chain and design diagnostics in one pass.

Runs hitting-time tables, the coupled-vs-direct waiting-time comparison,
the anticoncentration estimate, the subsystem scrambling check, the exact
permutation-algebra table, and the two-design gap report.
"""

import argparse
import sys

from designlab.cli import main as designlab_main


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="artifacts/diagnostics")
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args(argv)

    out = ["--out", args.out]
    seed = ["--seed", str(args.seed)]
    jobs = [
        ["hitting", "--n", "100", *out],
        ["waittime", "--n", "20", "--t", "25", "--trials", "20000", *seed, *out],
        ["anticonc", "--ensemble", "cg", "--n", "5", "--s", "80",
         "--trials", "2000", *seed, *out],
        ["scramble", "--ensemble", "cg", "--n", "6", "--s", "120",
         "--subset-size", "2", "--trials", "200", *seed, *out],
        ["perm-checks", "--t", "3", "--d", "3", *out],
        ["gap-2d", "--d", "2", "--m", "2", "--t", "2", *out],
    ]
    for job in jobs:
        code = designlab_main(job)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
