"""Distances to the limit laws along every regime, written as CSV tables."""

import argparse
import time
from pathlib import Path

from riffleguess.cli import OutputSpec, render_table
from riffleguess.limit_laws import RegimeSpec, convergence_report

REGIMES = {
    "fixed_p075": (RegimeSpec.fixed(0.75), [100, 200, 400, 800]),
    "fixed_p025": (RegimeSpec.fixed(0.25), [100, 200, 400, 800]),
    "fixed_p05": (RegimeSpec.fixed(0.5), [400, 1600]),
    "half_plus_b1_c05": (RegimeSpec.half_plus(1.0, 0.5), [100, 400, 1600]),
    "half_plus_b1_c025": (RegimeSpec.half_plus(1.0, 0.25), [100, 400, 1600]),
    "half_plus_b1_c1": (RegimeSpec.half_plus(1.0, 1.0), [100, 400, 1600]),
    "one_minus_l1_c1": (RegimeSpec.one_minus(1.0, 1.0), [250, 500, 1000, 2000]),
    "one_minus_l1_c2": (RegimeSpec.one_minus(1.0, 2.0), [250, 500, 1000]),
    "one_minus_l1_c05": (RegimeSpec.one_minus(1.0, 0.5), [250, 500, 1000]),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results")
    ap.add_argument("--only", nargs="*", default=None, help="subset of regime keys")
    args = ap.parse_args()
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for key, (regime, n_list) in REGIMES.items():
        if args.only and key not in args.only:
            continue
        t0 = time.time()
        rows = [r.as_dict() for r in convergence_report(regime, n_list)]
        base = ["n", "p", "law", "metric", "distance"]
        cols = base + sorted({c for r in rows for c in r} - set(base))
        for r in rows:
            for c in cols:
                r.setdefault(c, None)
        (out / f"converge_{key}.csv").write_text(render_table(rows, cols, OutputSpec()))
        dist = ", ".join(f"{r['distance']:.4g}" for r in rows)
        print(f"{key:20s} {rows[0]['law']:28s} {rows[0]['metric']}: {dist}  ({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
