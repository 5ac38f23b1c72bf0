"""Command line entry point: ``minlat run|ttt|gen``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .bench import ExperimentConfig, budgets_from_summary, load_instance, run_experiment, ttt_experiment
from .search import ConfigError, Strategy
from .tsplib import dump_instance, generate_instance


def _search_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--imax", type=int, help="multi-start iterations (default 10)")
    p.add_argument("--iils", type=int, help="ILS rounds without improvement (default min(100, n))")
    p.add_argument("--d", type=int, help="elite set size (default 10)")
    p.add_argument("--sup-min", type=float, help="minimum support in (0, 1] (default 0.7)")
    p.add_argument("--max-p", type=int, help="patterns kept per mining (default 5)")
    p.add_argument("--variant", choices=["circuit", "path"], default="circuit")
    p.add_argument("--euclidean", choices=["nint", "floor"], default="nint",
                   help="rounding of EUC_2D distances (default nint)")


def _params(ns) -> dict:
    names = {"imax": "i_max", "iils": "i_ils", "d": "d", "sup_min": "sup_min", "max_p": "max_p"}
    return {dst: getattr(ns, src) for src, dst in names.items() if getattr(ns, src) is not None}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minlat", description="Minimum latency problem solver and benchmark harness")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="seeded multi-run experiment")
    run.add_argument("--instances", nargs="+", required=True,
                     help="TSPLib files, instance dumps or gen:N:SEED[:BOX] specs")
    run.add_argument("--strategy", nargs="+", default=["baseline"], choices=[s.value for s in Strategy])
    run.add_argument("--runs", type=int, default=10)
    run.add_argument("--seed", type=int, default=0, help="base seed; run k uses seed + k")
    run.add_argument("--time-budget", type=float, help="wall-clock seconds per run")
    run.add_argument("--time-budget-from", type=Path,
                     help="summary CSV whose baseline average times become per-instance budgets")
    run.add_argument("--jobs", type=int, default=1,
                     help="worker processes; keep 1 for timing-faithful results")
    run.add_argument("--out", type=Path, help="output directory for CSV files")
    run.add_argument("--logs", action="store_true", help="also keep JSON-lines run logs")
    _search_args(run)

    ttt = sub.add_parser("ttt", help="time-to-target runs")
    ttt.add_argument("--instances", nargs=1, required=True)
    ttt.add_argument("--strategy", default="dm", choices=[s.value for s in Strategy])
    ttt.add_argument("--target", type=float, required=True)
    ttt.add_argument("--runs", type=int, default=100, help="executions")
    ttt.add_argument("--seed", type=int, default=0)
    ttt.add_argument("--out", type=Path)
    _search_args(ttt)

    gen = sub.add_parser("gen", help="write a random instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--box", type=int, default=100)
    gen.add_argument("--out", type=Path, help="output file (default stdout)")
    return parser


def _cmd_run(ns) -> int:
    params = _params(ns)
    if ns.time_budget is not None:
        params["time_budget"] = ns.time_budget
    budgets = budgets_from_summary(ns.time_budget_from) if ns.time_budget_from else {}
    config = ExperimentConfig(ns.instances, ns.strategy, ns.variant, ns.euclidean, ns.runs, ns.seed, params,
                              budgets, ns.out, ns.jobs, ns.logs)
    rows = run_experiment(config)
    print(f"{'instance':<16}{'strategy':<10}{'best':>12}{'average':>14}{'time(s)':>10}")
    for r in rows:
        if r.error:
            print(f"{r.instance:<16}{r.strategy:<10}  error: {r.error}")
        else:
            print(f"{r.instance:<16}{r.strategy:<10}{r.best:>12}{r.average:>14.1f}{r.avg_time:>10.2f}")
    return 1 if any(r.error for r in rows) else 0


def _cmd_ttt(ns) -> int:
    instance = load_instance(ns.instances[0], ns.variant, ns.euclidean)
    res = ttt_experiment(instance, ns.strategy, ns.target, ns.runs, ns.seed, _params(ns))
    if ns.out:
        ns.out.mkdir(parents=True, exist_ok=True)
        res.write_csv(ns.out / "ttt_runs.csv")
        res.write_ecdf(ns.out / "ttt_ecdf.csv")
    for t, p in res.ecdf():
        print(f"{t:.4f} {p:.4f}")
    print(f"# hits {len(res.sorted_hits)}/{res.executions}", file=sys.stderr)
    return 0


def _cmd_gen(ns) -> int:
    text = dump_instance(generate_instance(ns.n, ns.seed, ns.box))
    if ns.out:
        ns.out.write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return {"run": _cmd_run, "ttt": _cmd_ttt, "gen": _cmd_gen}[ns.command](ns)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"minlat: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
