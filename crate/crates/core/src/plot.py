#!/usr/bin/env python3
"""Plot phase evolution and containing arc from the CSVs in this directory.

Usage: python3 plot.py [--show]
Writes phases.png and arc.png next to the CSV files.
"""
import csv
import os
import sys

import matplotlib

if "--show" not in sys.argv:
    matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read(name):
    with open(os.path.join(HERE, name), newline="") as f:
        rows = list(csv.reader(f))
    return rows[0], [[float(x) for x in r] for r in rows[1:]]


def title():
    try:
        with open(os.path.join(HERE, "report.txt")) as f:
            first = f.readline().strip()
        return first.split(":", 1)[1].strip()
    except (OSError, IndexError):
        return ""


def main():
    header, rows = read("phases.csv")
    n = (len(header) - 1) // 2
    t = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4))
    for i in range(n):
        ax.plot(t, [r[1 + i] for r in rows], ".", markersize=1, label=f"{i + 1}")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("phase")
    ax.set_ylim(0, 1)
    ax.set_title(title())
    if n <= 10:
        ax.legend(loc="upper right", markerscale=8, fontsize="small")
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "phases.png"), dpi=150)

    _, arc = read("arc.csv")
    fig, ax = plt.subplots(figsize=(8, 4))
    ta = [r[0] for r in arc]
    la = [max(r[1], 1e-17) for r in arc]
    ax.semilogy(ta, la)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("containing arc")
    ax.set_title(title())
    fig.tight_layout()
    fig.savefig(os.path.join(HERE, "arc.png"), dpi=150)

    if "--show" in sys.argv:
        plt.show()


if __name__ == "__main__":
    main()
