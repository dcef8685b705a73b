"""Switch thresholds n0, n1 over a grid of p < 1/2, and where the mode is ever guessed."""

import argparse
from pathlib import Path

import numpy as np

from riffleguess.cli import OutputSpec, render_table
from riffleguess.strategy import build_strategy_table, threshold_n0, threshold_n1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p-min", type=float, default=0.02)
    ap.add_argument("--p-max", type=float, default=0.49)
    ap.add_argument("--steps", type=int, default=48)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = []
    for p in np.linspace(args.p_min, args.p_max, args.steps):
        p = float(round(p, 6))
        n0, n1 = threshold_n0(p), threshold_n1(p)
        table = build_strategy_table(p, max(n1, 1))
        switched = int((~table.a_indicator[1:]).sum())
        rows.append({"p": p, "n0": n0, "n1": n1, "mode_sizes": switched,
                     "non_monotone": len(table.non_monotone)})
    (out / "thresholds.csv").write_text(
        render_table(rows, ["p", "n0", "n1", "mode_sizes", "non_monotone"], OutputSpec()))
    never = [r["p"] for r in rows if r["mode_sizes"] == 0]
    print(f"mode never guessed for p >= {min(never) if never else 'none'} on this grid")
    for r in rows[:: max(1, len(rows) // 8)]:
        print(r)


if __name__ == "__main__":
    main()
