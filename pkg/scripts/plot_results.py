#!/usr/bin/env python3
"""Plot the CSV/JSON outputs of the CLI and the other scripts.

Matplotlib is a plotting-only dependency; the core package never imports it.
Feed this the directory written by run_all_experiments.py (default ./results)
and it renders PNGs next to the data it finds, skipping anything missing.
"""

import argparse
import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_csv(path: Path):
    with path.open() as handle:
        reader = csv.reader(handle)
        header = next(reader)
        rows = list(reader)
    return header, rows


def plot_paths(path: Path) -> None:
    _, rows = read_csv(path)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for name in sorted({r[0] for r in rows}):
        sub = [r for r in rows if r[0] == name]
        thetas = [float(r[1]) for r in sub]
        ax1.semilogy(thetas, [max(float(r[2]), 1e-17) for r in sub], label=name)
        ax2.plot(thetas, [float(r[3]) for r in sub], label=name)
    ax1.set_xlabel("theta"); ax1.set_ylabel("unitarity defect"); ax1.legend()
    ax2.set_xlabel("theta"); ax2.set_ylabel("distance to start point"); ax2.legend()
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)
    print(f"plotted {path.with_suffix('.png')}")


def plot_tvd(path: Path) -> None:
    _, rows = read_csv(path)
    thetas = [float(r[0]) for r in rows]
    tvds = [float(r[1]) for r in rows]
    bounds = [float(r[2]) for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(thetas, tvds, yerr=bounds, fmt="o-", capsize=3)
    ax.set_xlabel("deformation strength theta")
    ax.set_ylabel("eigenangle TVD vs Haar")
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)
    print(f"plotted {path.with_suffix('.png')}")


def plot_pipeline_samples(path: Path) -> None:
    _, rows = read_csv(path)
    clean = [(float(r[0]), float(r[1])) for r in rows if r[2] == "0"]
    bad = [(float(r[0]), float(r[1])) for r in rows if r[2] != "0"]
    fig, ax = plt.subplots(figsize=(6, 4))
    if clean:
        ax.plot(*zip(*clean), "o", label="clean sample")
    if bad:
        ax.plot(*zip(*bad), "x", ms=10, label="corrupted sample")
    report = path.parent / "rcs_report.json"
    if report.exists():
        rep = json.loads(report.read_text())
        ax.plot(1.0, rep["recovered_p0_at_1"], "s", label="recovered p0(1)")
        ax.plot(1.0, rep["direct_p0"], "+", ms=12, label="direct p0(1)")
    ax.set_xlabel("theta"); ax.set_ylabel("p0(theta)"); ax.legend()
    fig.tight_layout()
    fig.savefig(path.with_suffix(".png"), dpi=150)
    print(f"plotted {path.with_suffix('.png')}")


def plot_probe(path: Path) -> None:
    probe = json.loads(path.read_text())
    rows = probe["table"]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.semilogy([r["degree"] for r in rows], [max(r["residual"], 1e-17) for r in rows],
                "o-", label="held-out residual")
    ax.semilogy([r["degree"] for r in rows], [max(r["best_so_far"], 1e-17) for r in rows],
                "--", label="best so far")
    ax.axhline(probe["residual_target"], color="k", lw=0.8, label="target")
    ax.set_xlabel("symmetric rational degree"); ax.set_ylabel("max residual")
    ax.legend()
    fig.tight_layout()
    out = path.with_suffix(".png")
    fig.savefig(out, dpi=150)
    print(f"plotted {out}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--results", default="results")
    args = parser.parse_args()
    root = Path(args.results)
    handlers = [
        ("paths.csv", plot_paths),
        ("haar_tvd.csv", plot_tvd),
        ("tvd_scaling.csv", plot_tvd),
        ("rcs_samples.csv", plot_pipeline_samples),
        ("degree_probe.json", plot_probe),
    ]
    found = 0
    for name, handler in handlers:
        for path in sorted(root.rglob(name)):
            handler(path)
            found += 1
    if not found:
        print(f"nothing to plot under {root}; run run_all_experiments.py first")


if __name__ == "__main__":
    main()
