"""Density curves of the Maxwell-Boltzmann law and the half noncentral chi laws."""

import argparse
from pathlib import Path

import numpy as np

from riffleguess.cli import OutputSpec, render_table
from riffleguess.limit_laws import chi_half_density, gg_density, linexp_density

B_VALUES = (0.25, 0.5, 1.0, 1.5, 2.0)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--x-max", type=float, default=3.5)
    ap.add_argument("--points", type=int, default=351)
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    xs = np.linspace(0.0, args.x_max, args.points)
    rows = []
    for i, x in enumerate(xs):
        row = {"x": x, "gg": float(gg_density(x))}
        for b in B_VALUES:
            row[f"chi_b{b}"] = float(chi_half_density(x, b))
        for rho in (0.0, 1.0):
            row[f"linexp_rho{rho}"] = float(linexp_density(x, rho))
        rows.append(row)
    cols = list(rows[0])
    (out / "densities.csv").write_text(render_table(rows, cols, OutputSpec()))
    peaks = {c: xs[int(np.argmax([r[c] for r in rows]))] for c in cols[1:]}
    print("modes: " + ", ".join(f"{c}={v:.3f}" for c, v in peaks.items()))


if __name__ == "__main__":
    main()
