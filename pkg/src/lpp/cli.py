"""Command-line front end.

Exit codes: 0 ok, 2 usage/config error, 3 precondition violated, 4 internal failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path as FsPath

import numpy as np

from . import dfs as dfs_mod
from .analysis import bounds, campaigns
from .errors import ConfigError, PreconditionError
from .exact import brute_force_wn, exact_wn
from .graph import (
    EdgeWeights,
    graph_from_edgelist,
    sample_weights,
    threshold_subgraph,
    weights_from_csv,
    weights_to_csv,
)
from .lower_bound import best_threshold_lower_bound, default_grid
from .weights import essential_supremum, f_of_n, g_of_n, is_bounded, parse_dist

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_INTERNAL = 0, 2, 3, 4

CAMPAIGN_CSV_HELP = """\
CSV columns (one row per n):
  time-constant: n, mode, replicates, mean, variance, ci_half_width, min, max, var_wn
  deviation:     n, mode, replicates, events, p_hat, se, ln_p_hat, ln_ci_low, ln_ci_high,
                 floor, floor_respected, insufficient
  sandwich:      n, mode, replicates, f_n, g_n, upper_event_freq, upper_event_se,
                 union_bound_prediction, ratio_mean, ratio_min, ratio_max
The first line is a '#' comment holding the JSON config echo."""


def _number(value: float):
    return value if math.isfinite(value) else ("inf" if value > 0 else "-inf")


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _seed(args) -> int:
    if args.seed is None:
        args.seed = int(np.random.SeedSequence().entropy % (1 << 64))
        print(f"seed={args.seed}", file=sys.stderr)
    if not (0 <= args.seed < 1 << 64):
        raise ConfigError("--seed must be a 64-bit unsigned integer")
    return args.seed


def _echo(args) -> dict:
    # where the output goes and how many workers made it never change its content
    skip = {"func", "out", "jobs"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        if key == "dist" and value is not None:
            value = parse_dist(value).spec()
        out[key] = value
    return out


def _instance(args) -> EdgeWeights:
    if getattr(args, "weights", None):
        return weights_from_csv(FsPath(args.weights).read_text())
    if args.dist is None or args.n is None:
        raise ConfigError("give --weights FILE or both --dist and --n")
    seed = _seed(args)
    return sample_weights(args.n, parse_dist(args.dist), np.random.default_rng(seed))


def cmd_gen(args) -> str:
    w = _instance(args)
    if args.format == "json":
        return _dump_json({"config": _echo(args), "n": w.n, "weights": w.w.tolist()})
    return weights_to_csv(w, header_comment="config=" + json.dumps(_echo(args), sort_keys=True))


def cmd_exact(args) -> str:
    w = _instance(args)
    solver = brute_force_wn if args.method == "brute" else exact_wn
    res = solver(w)
    return _dump_json({
        "config": _echo(args),
        "n": w.n,
        "value": res.value,
        "witness": str(res.witness),
        "method": args.method,
    })


def cmd_dfs_trace(args) -> str:
    if args.graph:
        g = graph_from_edgelist(FsPath(args.graph).read_text(), n=args.n)
    else:
        if args.tau is None:
            raise ConfigError("give --graph FILE, or --dist/--n/--tau for a threshold graph")
        g = threshold_subgraph(_instance(args), args.tau)
    compact = None if args.format == "json" else False
    trace = dfs_mod.run_dfs(g, compact=compact)
    longest = dfs_mod.longest_u_excursion(trace)
    if args.format == "csv":
        return "# config=" + json.dumps(_echo(args), sort_keys=True) + "\n" + dfs_mod.trace_to_csv(trace)
    return _dump_json({
        "config": _echo(args),
        "n": g.n,
        "N": trace.N,
        "epochs": [{"start": e.start, "end": e.end, "vertices": list(e.vertices)} for e in trace.epochs],
        "events": [[e.step, e.op, e.vertex] for e in trace.events],
        "longest_excursion": str(longest),
        "longest_excursion_length": longest.length,
    })


def cmd_lower_bound(args) -> str:
    w = _instance(args)
    grid = args.tau if args.tau else default_grid(w)
    lb = best_threshold_lower_bound(w, grid)
    out = {
        "config": _echo(args),
        "n": w.n,
        "path": str(lb.path),
        "value": lb.value,
        "tau": lb.tau,
        "excursion_length": lb.excursion.length,
        "grid": grid,
    }
    if args.compare_exact:
        out["exact"] = exact_wn(w).value
    return _dump_json(out)


def cmd_bounds(args) -> str:
    dist = parse_dist(args.dist)
    mu = essential_supremum(dist)
    out: dict = {"config": _echo(args), "mu": _number(mu)}
    if is_bounded(dist):
        if args.x is not None:
            eps = args.epsilon
            if eps is None:
                if args.n is None:
                    raise ConfigError("--epsilon or --n (to optimize ε) required with --x")
                eps = bounds.optimize_epsilon(dist, args.x, args.n)
                out["epsilon_optimized"] = eps
            consts = bounds.deviation_constants(dist, args.x, eps)
            out["deviation_constants"] = consts.to_dict()
            if args.n is not None:
                out["upper_log_bound"] = consts.upper_log(args.n)
                out["lower_log_bound"] = consts.lower_log(args.n)
        if args.n is not None:
            var = bounds.variance_upper_bound(dist, args.n)
            out["variance_bound_wn_over_n"] = var
            out["variance_bound_wn"] = var * args.n**2
            if dist.kind != "twopoint" and args.n >= 3:
                out["xbar"] = bounds.xbar(dist, args.n)
    elif args.n is not None:
        out["f_n"] = f_of_n(dist, args.n)
        if args.n >= 16:
            out["g_n"] = g_of_n(dist, args.n)
            out["n2_tail_g"] = args.n**2 * float(dist.tail(out["g_n"]))
    return _dump_json(out)


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def cmd_campaign(args) -> str:
    seed = _seed(args)
    if args.kind == "aks":
        if args.theta is None or not args.n_list:
            raise ConfigError("aks campaign needs --theta and --n-list")
        rows = [campaigns.aks_comparison(n, args.theta, seed) for n in args.n_list]
        report = campaigns.CampaignReport("aks", {}, rows)
    else:
        if args.dist is None or not args.n_list:
            raise ConfigError("campaign needs --dist and --n-list")
        dist = parse_dist(args.dist)
        if args.kind == "time-constant":
            report = campaigns.estimate_time_constant(dist, args.n_list, args.replicates, seed, args.jobs)
        elif args.kind == "deviation":
            if args.x is None:
                raise ConfigError("deviation campaign needs --x")
            report = campaigns.estimate_deviation(dist, args.x, args.n_list, args.replicates, seed, args.jobs)
        else:
            if len(args.n_list) != 1:
                raise ConfigError("sandwich campaign takes a single n")
            report = campaigns.sandwich_experiment(dist, args.n_list[0], args.replicates, seed, args.jobs)
    report.config = {**report.config, "cli": _echo(args)}
    return report.to_csv() if args.format == "csv" else report.to_json()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lpp", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("json",), default_fmt="json"):
        p.add_argument("--dist", help='e.g. "uniform:lo=0,hi=1", "twopoint:a=1,b=2,p0=0.05", "exp:lambda=1", "pareto:alpha=2,scale=1"')
        p.add_argument("--n", type=int)
        p.add_argument("--seed", type=int, help="64-bit unsigned; drawn and printed to stderr if omitted")
        p.add_argument("--out", help="output file (default stdout)")
        p.add_argument("--format", choices=fmt, default=default_fmt)

    p = sub.add_parser("gen", help="sample an edge-weight instance")
    common(p, ("csv", "json"), "csv")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("exact", help="exact W_n by subset DP or brute force")
    common(p)
    p.add_argument("--weights", help="instance CSV (i,j,weight) instead of --dist/--n")
    p.add_argument("--method", choices=("dp", "brute"), default="dp")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("dfs-trace", help="step-by-step DFS trace (columns step,S,U,T,Ehat)")
    common(p, ("csv", "json"), "csv")
    p.add_argument("--graph", help="edge list file: 'i j' per line, '#' comments")
    p.add_argument("--weights", help="instance CSV, thresholded at --tau")
    p.add_argument("--tau", type=float)
    p.set_defaults(func=cmd_dfs_trace)

    p = sub.add_parser("lower-bound", help="threshold/DFS/surgery lower bound on W_n")
    common(p)
    p.add_argument("--weights", help="instance CSV instead of --dist/--n")
    p.add_argument("--tau", type=float, action="append", help="threshold (repeatable); default: weight quantiles")
    p.add_argument("--compare-exact", action="store_true", help="also report exact W_n (n <= 22)")
    p.set_defaults(func=cmd_lower_bound)

    p = sub.add_parser("bounds", help="closed-form bound calculators")
    p.add_argument("--dist", required=True)
    p.add_argument("--x", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("campaign", help="seeded Monte Carlo campaigns", epilog=CAMPAIGN_CSV_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--kind", choices=("time-constant", "deviation", "sandwich", "aks"), required=True)
    p.add_argument("--dist")
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--replicates", type=int, default=200)
    p.add_argument("--seed", type=int)
    p.add_argument("--x", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.func(args)
    except ConfigError as exc:
        print(f"lpp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PreconditionError as exc:
        print(f"lpp: precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"lpp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"lpp: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out:
        FsPath(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
