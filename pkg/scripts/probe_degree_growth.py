#!/usr/bin/env python3
"""Minimal rational degree of p0(theta) as the circuit grows.

For each gate count m, scrambles seeded brickwork circuits and records the
smallest symmetric degree whose held-out residual meets the probe target.
The open question this probes: how the effective degree scales with m,
against the coarse upper bound of ~54 per gate.
"""

import argparse
import csv
from pathlib import Path

from rcskit.circuit import brickwork_circuit, scramble
from rcskit.rcs import degree_probe_report, probe_theta_grid


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-qubits", type=int, default=3)
    parser.add_argument("--m-values", default="1,2,3,4,5",
                        help="comma separated gate counts")
    parser.add_argument("--seeds", type=int, default=10, help="circuits per m")
    parser.add_argument("--max-degree", type=int, default=60)
    parser.add_argument("--points", type=int, default=244)
    parser.add_argument("--out", default="results/degree_growth.csv")
    args = parser.parse_args()

    grid = probe_theta_grid(args.points, 0.05, 0.98)
    rows = []
    for m in (int(v) for v in args.m_values.split(",")):
        degrees = []
        errors = []
        for seed in range(args.seeds):
            sc = scramble(
                brickwork_circuit(args.n_qubits, m, 5000 + seed), 6000 + seed
            )
            rep = degree_probe_report(sc, args.max_degree, grid)
            degrees.append(rep.chosen_degree)
            errors.append(rep.abs_error)
        rows.append(
            (
                m,
                min(degrees),
                sorted(degrees)[len(degrees) // 2],
                max(degrees),
                max(errors),
            )
        )
        print(
            f"m={m}: degree min/median/max = {rows[-1][1]}/{rows[-1][2]}/{rows[-1][3]}, "
            f"worst extrapolation error {rows[-1][4]:.2e}"
        )

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(
            ("m_gates", "degree_min", "degree_median", "degree_max", "worst_abs_error")
        )
        writer.writerows(rows)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
