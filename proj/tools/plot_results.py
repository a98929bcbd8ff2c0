#!/usr/bin/env python3
"""Plot or tabulate benchmark CSVs produced by the bench tool.

Usage:
    python3 tools/plot_results.py results.csv [-o outdir]

One chart per (objects, workload, contention, backoff) group: median
elapsed time versus thread count, one line per implementation. Falls back
to a text table when matplotlib is unavailable.
"""

import argparse
import csv
import statistics
import sys
from collections import defaultdict
from pathlib import Path


def load(path):
    rows = []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            row["threads"] = int(row["threads"])
            row["elapsed_ns"] = int(row["elapsed_ns"])
            rows.append(row)
    return rows


def group_medians(rows):
    groups = defaultdict(lambda: defaultdict(list))
    for r in rows:
        fig = (r["objects"], r["workload"], r["contention"], r["backoff"])
        groups[fig][(r["impl"], r["threads"])].append(r["elapsed_ns"])
    return {
        fig: {key: statistics.median(v) for key, v in lines.items()}
        for fig, lines in groups.items()
    }


def text_report(medians):
    for fig, lines in sorted(medians.items()):
        objects, workload, contention, backoff = fig
        print(f"\n{objects}/{workload} contention={contention} backoff={backoff}")
        impls = sorted({impl for impl, _ in lines})
        threads = sorted({t for _, t in lines})
        header = "threads " + " ".join(f"{i:>14}" for i in impls)
        print(header)
        for t in threads:
            cells = [f"{lines.get((i, t), float('nan')) / 1e6:>12.3f}ms" for i in impls]
            print(f"{t:>7} " + " ".join(cells))


def plot(medians, outdir):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir.mkdir(parents=True, exist_ok=True)
    for fig_key, lines in sorted(medians.items()):
        objects, workload, contention, backoff = fig_key
        fig, ax = plt.subplots(figsize=(6, 4))
        impls = sorted({impl for impl, _ in lines})
        for impl in impls:
            threads = sorted(t for i, t in lines if i == impl)
            ys = [lines[(impl, t)] / 1e6 for t in threads]
            ax.plot(threads, ys, marker="o", label=impl)
        ax.set_xlabel("threads")
        ax.set_ylabel("median elapsed (ms)")
        ax.set_title(f"{objects} / {workload} ({contention} contention, backoff {backoff})")
        ax.legend()
        ax.grid(True, alpha=0.3)
        name = f"{objects}_{workload}_{contention}_backoff-{backoff}.png"
        fig.tight_layout()
        fig.savefig(outdir / name)
        plt.close(fig)
        print(f"wrote {outdir / name}")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("csv", help="CSV file written by bench --csv")
    ap.add_argument("-o", "--outdir", default="plots", help="output directory")
    args = ap.parse_args()

    rows = load(args.csv)
    if not rows:
        print("no rows in CSV", file=sys.stderr)
        return 1
    medians = group_medians(rows)
    try:
        plot(medians, Path(args.outdir))
    except ImportError:
        text_report(medians)
    return 0


if __name__ == "__main__":
    sys.exit(main())
