#!/usr/bin/env python3
"""Box-norm mixing curves of the accelerated weight chain for several n.

Each size writes spectral-mix.csv (curve) and spectral-spectrum.csv
(eigenvalue table) under <out>/n<size>/.
"""

import argparse
import sys

from designlab.cli import main as designlab_main


def run(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="artifacts/mixing")
    parser.add_argument("--sizes", type=int, nargs="+", default=[15, 20, 25])
    args = parser.parse_args(argv)

    for n in args.sizes:
        code = designlab_main(["spectral-mix", "--n", str(n),
                               "--out", f"{args.out}/n{n}"])
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
