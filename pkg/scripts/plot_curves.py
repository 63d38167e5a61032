#!/usr/bin/env python3
"""Plot fidelity-curve CSV files produced by ``cpseq curve``.

    cpseq curve --family simple --theta 90 --ideal 0 --out simple.csv
    cpseq curve --family nb1    --theta 90 --ideal 0 --out nb1.csv
    python3 scripts/plot_curves.py simple.csv nb1.csv --out fig.png

Needs matplotlib (``pip install cpseq[plot]``); the CSV format itself is
the interchange contract, this script is only a convenience.
"""

import argparse
import csv
from pathlib import Path


def read_curve(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    gs = [float(r["g"]) for r in rows]
    fs = [float(r["F"]) for r in rows]
    return gs, fs


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("csv_files", nargs="+", help="curve CSV files (g,F)")
    parser.add_argument("--out", default=None, help="write PNG instead of showing")
    parser.add_argument("--title", default="fidelity vs fractional error g")
    args = parser.parse_args()

    import matplotlib

    if args.out:
        matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.5, 4.5))
    for path in args.csv_files:
        gs, fs = read_curve(path)
        ax.plot(gs, fs, label=Path(path).stem)
    ax.set_xlabel("g")
    ax.set_ylabel("F")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(args.title)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()

    if args.out:
        fig.savefig(args.out, dpi=150)
        print(f"wrote {args.out}")
    else:
        plt.show()


if __name__ == "__main__":
    main()
