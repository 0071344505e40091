#!/usr/bin/env python3
"""Collision-probability experiment battery.

Produces, under --out:
  coll-chain.csv   exact transfer-matrix curve at n=4
  coll-mc.csv      Monte Carlo curve for the complete-graph ensemble
  coll-bound.csv   moment-method upper bound sweep at n=20
"""

import argparse
import sys

from designlab.cli import main as designlab_main


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="artifacts/collision")
    parser.add_argument("--n", type=int, default=3)
    parser.add_argument("--s", type=int, default=30)
    parser.add_argument("--trials", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=2024)
    args = parser.parse_args(argv)

    jobs = [
        ["coll-chain", "--n", "4", "--t", "40", "--out", args.out],
        ["coll-mc", "--ensemble", "cg", "--n", str(args.n), "--s", str(args.s),
         "--trials", str(args.trials), "--seed", str(args.seed), "--out", args.out],
        ["coll-bound", "--n", "20", "--out", args.out],
    ]
    for job in jobs:
        code = designlab_main(job)
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
