"""Strategy table and first-card maxima for p = 0.15 (guess 1, then the mode, then 1 again)."""

import argparse
from pathlib import Path

from riffleguess.cli import OutputSpec, render_rpoints, render_table, rpoints_rows
from riffleguess.shuffle_model import ShuffleParams, first_card_pmf
from riffleguess.strategy import build_strategy_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=float, default=0.15)
    ap.add_argument("--n-max", type=int, default=45)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    table = build_strategy_table(args.p, args.n_max)
    rows = table.rows()
    for r in rows:
        r["p_first_is_1"] = first_card_pmf(ShuffleParams(r["n"], args.p))[1]
    cols = ["n", "n0_flag", "A_n", "kappa_n", "first_guess", "p_first_is_1"]
    (out / "strategy.csv").write_text(render_table(rows, cols, OutputSpec()))
    (out / "unRifflePoints.csv").write_text(render_rpoints(rpoints_rows(args.p, args.n_max), OutputSpec()))
    switch = [r["n"] for r in rows if not r["A_n"]]
    print(f"p={args.p}: n0={table.n0} n1={table.n1} mode guessed for n in "
          f"{switch[0] if switch else '-'}..{switch[-1] if switch else '-'}")


if __name__ == "__main__":
    main()
