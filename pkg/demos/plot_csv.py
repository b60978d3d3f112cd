"""Plot ``infft-bench`` CSV output.

One panel per metric; one line per experiment id and node kind, against the
swept size.  Sweeps over the window cut-off (ids ending in ``:m`` or ``:p``)
get their own row of panels, drawn against ``m``.

    infft-bench errors-over --out over.csv
    python3 demos/plot_csv.py over.csv --out over.png
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _is_param_sweep(exp):
    return exp.endswith((":m", ":p"))


def load(path):
    series = defaultdict(list)
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            series[(row["metric"], row["experiment"], row["nodes"])].append(row)
    return series


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--out", default="plot.png")
    args = ap.parse_args(argv)

    series = load(args.csv)
    metrics = sorted({k[0] for k in series})
    kinds = sorted({_is_param_sweep(k[1]) for k in series})
    fig, axes = plt.subplots(len(kinds), len(metrics), figsize=(4.5 * len(metrics), 3.8 * len(kinds)),
                             squeeze=False)
    for row, param in zip(axes, kinds):
        for ax, metric in zip(row, metrics):
            for (mt, exp, nodes), rows in sorted(series.items()):
                if mt != metric or _is_param_sweep(exp) != param:
                    continue
                if param:
                    xs = [int(r["m"]) for r in rows]
                    ax.set_xlabel("m")
                else:
                    # the swept size is whichever of N, M varies
                    swept = "N" if len({r["N"] for r in rows}) > 1 else "M"
                    xs = [int(r[swept]) for r in rows]
                    ax.set_xscale("log", base=2)
                    ax.set_xlabel(swept)
                ax.plot(xs, [float(r["value"]) for r in rows], "o-", ms=3, label=f"{exp} ({nodes})")
            ax.set_yscale("log")
            ax.set_title(metric)
            ax.legend(fontsize=6)
    fig.tight_layout()
    fig.savefig(args.out, dpi=130)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
