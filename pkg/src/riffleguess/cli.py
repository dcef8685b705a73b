"""Command-line interface: every table and pmf as CSV or JSON.

Exit codes: 0 success, 1 invalid input, 2 a size guard refused the request.
Diagnostics go to stderr; nothing is written to the output on failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import limit_laws as ll
from .exact_dist import GuardError, c_pmf, x_pmf
from .montecarlo import McConfig, simulate_x
from .pmf import Pmf
from .shuffle_model import ShuffleParams, first_card_pmf
from .strategy import build_strategy_table, threshold_n0, threshold_n1

SIG_DIGITS = 12


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass(frozen=True)
class OutputSpec:
    format: str = "csv"
    path: str | None = None


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.{SIG_DIGITS}g}"
    return str(x)


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x):.{SIG_DIGITS}g}")
    return x


def render_table(rows: list[dict], columns: list[str], spec: OutputSpec) -> str:
    if spec.format == "json":
        return json.dumps([{c: _json_value(r[c]) for c in columns} for r in rows]) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def render_pmf(pmf: Pmf, spec: OutputSpec) -> str:
    if spec.format == "json":
        masses = [_json_value(m) for m in pmf.masses]
        return json.dumps({"support_offset": pmf.offset, "masses": masses}) + "\n"
    rows = [{"k": k, "prob": v} for k, v in pmf.items()]
    return render_table(rows, ["k", "prob"], spec)


def render_rpoints(rows: list[dict], spec: OutputSpec) -> str:
    """CSV in the R `write.csv` layout: quoted header ``"x","y"``."""
    if spec.format == "json":
        return render_table(rows, ["x", "y"], spec)
    lines = ['"x","y"'] + [f"{fmt(r['x'])},{fmt(r['y'])}" for r in rows]
    return "\n".join(lines) + "\n"


def _params(n, p) -> ShuffleParams:
    return ShuffleParams(n, p)


def rpoints_rows(p: float, n_max: int) -> list[dict]:
    """``max_{m >= 2} P(FC_n = m)`` for ``n = 1..n_max``; ``y = 0`` at ``n = 1``."""
    rows = [{"x": 1, "y": 0.0}]
    for n in range(2, n_max + 1):
        rows.append({"x": n, "y": float(first_card_pmf(_params(n, p)).masses[1:].max())})
    return rows


def _n_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad --n-list {text!r}") from None


def _regime(args) -> ll.RegimeSpec:
    chosen = [x for x in (args.fixed_p, args.half_plus, args.one_minus) if x is not None]
    if len(chosen) != 1:
        raise InputError("give exactly one of --fixed-p, --half-plus, --one-minus")
    if args.fixed_p is not None:
        return ll.RegimeSpec.fixed(args.fixed_p)
    if args.half_plus is not None:
        return ll.RegimeSpec.half_plus(*args.half_plus)
    return ll.RegimeSpec.one_minus(*args.one_minus)


def _law(name: str, param: float | None) -> ll.LimitLaw:
    if name == "gg":
        return ll.MaxwellBoltzmann()
    if name == "rayleigh":
        return ll.Rayleigh()
    if name == "exp":
        return ll.Exponential()
    if param is None:
        raise InputError(f"law {name!r} needs --param")
    if name == "linexp":
        return ll.LinExp(param)
    if name == "chi":
        return ll.HalfNoncentralChi3(param)
    return ll.ShiftedExponential(param)


def cmd_first_card(args, spec):
    pmf = first_card_pmf(_params(args.n, args.p))
    rows = [{"m": m, "prob": v} for m, v in pmf.items()]
    return render_table(rows, ["m", "prob"], spec)


def cmd_strategy(args, spec):
    table = build_strategy_table(args.p, args.n_max)
    return render_table(table.rows(), ["n", "n0_flag", "A_n", "kappa_n", "first_guess"], spec)


def cmd_thresholds(args, spec):
    p = _params(1, args.p).p
    if p >= 0.5:
        raise InputError("thresholds exist only for p < 1/2")
    n0, n1 = threshold_n0(p), threshold_n1(p)
    table = build_strategy_table(p, max(n1, 1))
    rows = [{"p": p, "n0": n0, "n1": n1, "switch_sizes": int((~table.a_indicator[1:]).sum()),
             "non_monotone": len(table.non_monotone)}]
    return render_table(rows, ["p", "n0", "n1", "switch_sizes", "non_monotone"], spec)


def cmd_rpoints(args, spec):
    _params(max(args.n_max, 1), args.p)
    return render_rpoints(rpoints_rows(args.p, args.n_max), spec)


def cmd_exact(args, spec):
    return render_pmf(x_pmf(_params(args.n, args.p)), spec)


def cmd_mc(args, spec):
    params = _params(args.n, args.p)
    cfg = McConfig(args.trials, args.seed, args.chunk_size)
    pmf = simulate_x(params, build_strategy_table(params.p, params.n), cfg, workers=args.workers)
    return render_pmf(pmf, spec)


def cmd_cpmf(args, spec):
    return render_pmf(c_pmf(args.m1, args.m2), spec)


def cmd_converge(args, spec):
    regime = _regime(args)
    mode = "montecarlo" if args.mode == "mc" else "exact"
    rows = ll.convergence_report(regime, _n_list(args.n_list), mode=mode, target=args.target,
                                 trials=args.trials, seed=args.seed, workers=args.workers)
    dicts = [r.as_dict() for r in rows]
    extra = sorted({k for r in rows for k in r.extras})
    for d in dicts:
        for k in extra:
            d.setdefault(k, None)
    return render_table(dicts, ["n", "p", "law", "metric", "distance", *extra], spec)


def cmd_rif_id(args, spec):
    rows = ll.rif_id_limit(ll.RegimeSpec.one_minus(args.lam, args.c), _n_list(args.n_list))
    dicts = [{"n": r.n, "p": r.p, "value": r.value, "limit": r.limit} for r in rows]
    return render_table(dicts, ["n", "p", "value", "limit"], spec)


def cmd_density(args, spec):
    law = _law(args.law, args.param)
    xs = np.linspace(0.0, args.x_max, args.points)
    rows = [{"x": x, "density": float(d)} for x, d in zip(xs, law.pdf(xs))]
    return render_table(rows, ["x", "density"], spec)


def cmd_two_color_region(args, spec):
    m1, m2 = max(args.m1, args.m2), min(args.m1, args.m2)
    region = ll.kpp_region(m1, m2)
    rows = [{"m1": m1, "m2": m2, "region": region.label, "law": region.law.describe(),
             "scale": region.scale}]
    return render_table(rows, ["m1", "m2", "region", "law", "scale"], spec)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riffleguess", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output file (default: stdout)")
        sp.set_defaults(func=func)
        return sp

    sp = add("first-card", cmd_first_card, "law of the top card")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)

    sp = add("strategy", cmd_strategy, "first-guess table")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n-max", type=int, required=True)

    sp = add("thresholds", cmd_thresholds, "switch thresholds n0 and n1 for p < 1/2")
    sp.add_argument("--p", type=float, required=True)

    sp = add("rpoints", cmd_rpoints, "best non-minimum first-card probability per n")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--n-max", type=int, required=True)

    sp = add("exact", cmd_exact, "exact law of the number of correct guesses")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)

    sp = add("mc", cmd_mc, "Monte Carlo law of the number of correct guesses")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--chunk-size", type=int, default=1 << 16)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("cpmf", cmd_cpmf, "law of correct guesses in the two-color game")
    sp.add_argument("--m1", type=int, required=True)
    sp.add_argument("--m2", type=int, required=True)

    sp = add("converge", cmd_converge, "distance to the limit law along a regime")
    sp.add_argument("--fixed-p", type=float)
    sp.add_argument("--half-plus", type=float, nargs=2, metavar=("B", "C"))
    sp.add_argument("--one-minus", type=float, nargs=2, metavar=("LAMBDA", "C"))
    sp.add_argument("--n-list", required=True)
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    sp.add_argument("--target", choices=("x", "cjn"), default="x")
    sp.add_argument("--trials", type=int, default=10 ** 6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)

    sp = add("rif-id", cmd_rif_id, "probability of the sorted deck along p = 1 - lambda n^-c")
    sp.add_argument("--lambda", dest="lam", type=float, required=True)
    sp.add_argument("--c", type=float, required=True)
    sp.add_argument("--n-list", required=True)

    sp = add("density", cmd_density, "limit density on a grid (plot data)")
    sp.add_argument("--law", choices=("gg", "chi", "rayleigh", "linexp", "exp", "shifted-exp"),
                    required=True)
    sp.add_argument("--param", type=float, default=None, help="b for chi/shifted-exp, rho for linexp")
    sp.add_argument("--x-max", type=float, default=3.0)
    sp.add_argument("--points", type=int, default=301)

    sp = add("two-color-region", cmd_two_color_region, "two-color game region and limit law")
    sp.add_argument("--m1", type=int, required=True)
    sp.add_argument("--m2", type=int, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = OutputSpec(args.format, args.out)
    try:
        text = args.func(args, spec)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if spec.path:
        with open(spec.path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
