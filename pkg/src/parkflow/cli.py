"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 feasible-set cap hit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path as FsPath

from . import __version__
from .baselines import Strategy
from .export import aggregate, export_aggregate, export_cells, export_series
from .ingest import ClusteredParkSpec, ParkFormatError, SyntheticParkSpec, generate_clustered_park, generate_park, load_park, write_park
from .park import DEFAULT_WALKING_SPEED
from .paths import DEFAULT_DIST_CAP, DEFAULT_MAX_PATHS, FeasibleSetTooLarge, find_feasible_paths, write_paths_csv
from .simulation import DEFAULT_BUDGETS, DEFAULT_LAMBDAS, GridCellError, simulate_grid
from .transition import DEFAULT_Q_MIN, construct_tm, write_matrix_csv

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_LIMIT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _strategies(text: str) -> list[Strategy]:
    try:
        return [Strategy.parse(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_park_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("park source")
    g.add_argument("--park", action="append", type=FsPath, default=[], help="park CSV file (repeatable)")
    g.add_argument("--gen", type=int, metavar="N", help="generate a synthetic park with N facilities")
    g.add_argument("--seed", type=int, action="append", help="generator seed (repeatable; default 42)")
    g.add_argument("--layout", choices=("uniform", "clustered"), default="uniform",
                   help="synthetic layout; clustered puts the entrance amid 3 clusters")
    g.add_argument("--start", type=int, default=0, help="start facility id for park files")
    g.add_argument("--walking-speed", type=float, default=DEFAULT_WALKING_SPEED, help="m/min")


def _add_grid_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dist-cap", type=float, default=DEFAULT_DIST_CAP, help="max hop in meters")
    p.add_argument("--max-paths", type=int, default=DEFAULT_MAX_PATHS, help="feasible-set size cap")


def _synthetic(n: int, seed: int, layout: str, speed: float):
    if layout == "clustered":
        if n < 2 or (n - 1) % 3:
            raise UsageError("clustered layout needs N = 1 + 3k facilities")
        return generate_clustered_park(ClusteredParkSpec(n_clusters=3, cluster_size=(n - 1) // 3, seed=seed), speed)
    return generate_park(SyntheticParkSpec(n_facilities=n, seed=seed), speed)


def _parks(args) -> list:
    parks = [load_park(p, args.start, args.walking_speed) for p in args.park]
    if args.gen is not None:
        for seed in args.seed or [42]:
            parks.append(_synthetic(args.gen, seed, args.layout, args.walking_speed))
    if not parks:
        raise UsageError("give --park FILE or --gen N")
    return parks


def _one_park(args):
    parks = _parks(args)
    if len(parks) != 1:
        raise UsageError("this subcommand takes exactly one park")
    return parks[0]


def _meta(args, **extra) -> dict:
    # never echo --workers: parallelism must not change output bytes
    meta = {"parkflow": __version__, "command": args.command}
    if args.park:
        meta["parks"] = ";".join(str(p) for p in args.park)
    if args.gen is not None:
        meta["gen"] = f"n={args.gen} layout={args.layout} seeds={','.join(map(str, args.seed or [42]))}"
    meta["walking_speed"] = args.walking_speed
    meta.update(extra)
    return meta


def cmd_run(args) -> int:
    parks = _parks(args)
    budgets = args.budgets or list(DEFAULT_BUDGETS)
    lambdas = args.lambdas or list(DEFAULT_LAMBDAS)
    strategies = args.strategies or list(Strategy)
    results = simulate_grid(
        parks, budgets, lambdas, strategies, args.dist_cap, args.horizon, args.q_min,
        workers=args.workers, max_paths=args.max_paths,
    )
    rows = aggregate(results)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    meta = _meta(
        args,
        budgets=",".join(f"{b:g}" for b in budgets),
        lambdas=",".join(f"{x:g}" for x in lambdas),
        strategies=",".join(s.value for s in strategies),
        dist_cap=args.dist_cap,
        horizon="budget" if args.horizon is None else args.horizon,
        q_min=args.q_min,
        max_paths=args.max_paths,
    )
    export_cells(results, out / "cells.csv", meta)
    export_aggregate(rows, out / "aggregate.csv", meta)
    export_series(rows, out / "series.csv", meta)
    print(f"{'park':<28} {'strategy':<8} {'budget':>7} {'qt_ratio':>20} {'avg_pop':>10} {'utility':>12}")
    for a in rows:
        qt = f"{a.qt_ratio_mean:.3f}+-{a.qt_ratio_std:.3f}"
        print(f"{a.park:<28} {Strategy(a.strategy).label:<8} {a.budget:>7g} {qt:>20} {a.avg_pop_mean:>10.2f} {a.utility_mean:>12.3f}")
    print(f"wrote {len(results)} cells to {out}")
    return 0


def cmd_paths(args) -> int:
    park = _one_park(args)
    feasible = find_feasible_paths(park, args.budget, args.dist_cap, args.max_paths)
    meta = f"park={park.name}\nbudget={args.budget:g}\ndist_cap={args.dist_cap:g}\nwalking_speed={args.walking_speed:g}"
    write_paths_csv(feasible, args.out or sys.stdout, meta)
    return 0


def cmd_matrix(args) -> int:
    park = _one_park(args)
    feasible = find_feasible_paths(park, args.budget, args.dist_cap, args.max_paths)
    tm = construct_tm(park, feasible, args.lam, args.q_min)
    meta = (
        f"park={park.name}\nbudget={args.budget:g}\nlambda={args.lam:g}\n"
        f"dist_cap={args.dist_cap:g}\nq_min={args.q_min:g}"
    )
    if args.out:
        write_matrix_csv(tm, args.out, meta)
    for i, s in enumerate(tm.entries.sum(axis=1)):
        print(f"row {i}: sum={s:.6f}")
    return 0


def cmd_gen_park(args) -> int:
    park = _synthetic(args.n, args.seed, args.layout, DEFAULT_WALKING_SPEED)
    write_park(park, args.out)
    print(f"wrote {len(park)} facilities to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parkflow", description="Crowd-aware theme park itinerary simulation.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="simulate the park x budget x lambda x strategy grid")
    _add_park_args(run)
    _add_grid_args(run)
    run.add_argument("--budgets", type=_floats, help=f"minutes (default {DEFAULT_BUDGETS[0]}..{DEFAULT_BUDGETS[-1]} step 30)")
    run.add_argument("--lambdas", type=_floats, help="arrival intervals in minutes (default 0.01..0.09, 0.1..1.0)")
    run.add_argument("--strategies", type=_strategies, help="comma list of disop,popop,podop,scair (default all)")
    run.add_argument("--horizon", type=float, help="minutes during which agents arrive (default: the budget)")
    run.add_argument("--q-min", type=float, default=DEFAULT_Q_MIN, help="queue floor in utility denominators")
    run.add_argument("--workers", type=int, default=1, help="worker processes across grid cells")
    run.add_argument("--out", type=FsPath, default=FsPath("results"), help="output directory")
    run.set_defaults(func=cmd_run)

    paths = sub.add_parser("paths", help="write the feasible itinerary set as CSV")
    _add_park_args(paths)
    _add_grid_args(paths)
    paths.add_argument("--budget", type=float, required=True)
    paths.add_argument("--out", type=FsPath, help="output file (default stdout)")
    paths.set_defaults(func=cmd_paths)

    matrix = sub.add_parser("matrix", help="build the transition matrix and print its row sums")
    _add_park_args(matrix)
    _add_grid_args(matrix)
    matrix.add_argument("--budget", type=float, required=True)
    matrix.add_argument("--lam", "--lambda", type=float, required=True, dest="lam")
    matrix.add_argument("--q-min", type=float, default=DEFAULT_Q_MIN)
    matrix.add_argument("--out", type=FsPath, help="matrix CSV output file")
    matrix.set_defaults(func=cmd_matrix)

    gen = sub.add_parser("gen-park", help="write a synthetic park CSV")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=42)
    gen.add_argument("--layout", choices=("uniform", "clustered"), default="uniform")
    gen.add_argument("--out", type=FsPath, required=True)
    gen.set_defaults(func=cmd_gen_park)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"parkflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FeasibleSetTooLarge, GridCellError) as exc:
        limit = isinstance(exc, FeasibleSetTooLarge) or isinstance(exc.__cause__, FeasibleSetTooLarge)
        print(f"parkflow: error: {exc}", file=sys.stderr)
        return EXIT_LIMIT if limit else EXIT_DATA
    except FileNotFoundError as exc:
        print(f"parkflow: error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_DATA
    except (ParkFormatError, ValueError, OSError) as exc:
        print(f"parkflow: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
