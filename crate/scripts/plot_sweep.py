"""Plot the confusion bounds from an `fbl sweep` CSV file.

    fbl sweep --k 16 --axis blocklength --grid 17:128:1 --out k16.csv
    python3 scripts/plot_sweep.py k16.csv k16.png

Needs matplotlib. Rows marked infeasible are drawn hollow.
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main(src, dst):
    with open(src, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        sys.exit("no rows")
    x = [float(r["axis_value"] or r["n"]) for r in rows]
    feasible = [r["feasible"] == "true" for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, label, marker in (("log10_pcon_ub", "upper", "o"), ("log10_pcon_lb", "lower", "s")):
        y = [float(r[key]) for r in rows]
        ax.plot(x, y, lw=0.8, label=label)
        ax.scatter([a for a, f in zip(x, feasible) if f], [b for b, f in zip(y, feasible) if f], marker=marker, s=10)
        ax.scatter(
            [a for a, f in zip(x, feasible) if not f],
            [b for b, f in zip(y, feasible) if not f],
            marker=marker,
            s=10,
            facecolors="none",
            edgecolors="grey",
        )
    ax.set_ylabel("log10 confusion rate")
    ax.set_xlabel("axis value")
    ax.legend()
    fig.tight_layout()
    fig.savefig(dst, dpi=150)


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])
