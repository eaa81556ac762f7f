#!/usr/bin/env python3
"""Reproduce every bundled experiment with pinned seeds.

Thin composition of the CLI: each block below is exactly one `rcskit`
invocation, so the emitted files match what the command line produces
byte for byte.  Everything lands under --results (default ./results).
"""

import argparse
import sys
from pathlib import Path

from rcskit.cli import main as rcskit_main

RUNS = [
    ("paths", ["paths", "--random", "4", "--steps", "21", "--seed", "11"]),
    ("degree-audit", ["degree-audit", "--n", "4", "--trials", "20", "--seed", "12"]),
    ("haar-tvd", ["haar-tvd", "--n", "2", "--samples", "10000",
                  "--thetas", "0.02,0.05,0.1,0.2,0.4", "--seed", "13"]),
    ("bw-demo", ["bw-demo", "--k1", "6", "--k2", "6", "--t", "3", "--seed", "14"]),
    ("pipeline-exact", ["rcs-pipeline", "--m-gates", "1", "--theta-count", "9",
                        "--seed", "15"]),
    ("pipeline-decode", ["rcs-pipeline", "--m-gates", "1", "--theta-count", "13",
                         "--corrupt-count", "2", "--mode", "bw-decode", "--seed", "16"]),
    ("degree-probe", ["degree-probe", "--n-qubits", "3", "--m-gates", "3",
                      "--max-degree", "40", "--points", "170", "--seed", "17"]),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--results", default="results", help="output root directory")
    args = parser.parse_args()
    root = Path(args.results)
    worst = 0
    for label, argv in RUNS:
        outdir = root / label
        print(f"$ rcskit {' '.join(argv)} --out {outdir}")
        code = rcskit_main([*argv, "--out", str(outdir)])
        worst = max(worst, code)
        print()
    return worst


if __name__ == "__main__":
    sys.exit(main())
