"""Seeded multi-run experiments, time gaps and time-to-target data.

Each (instance, strategy) pair is solved ``runs`` times with seeds
``seed, seed + 1, ...``. Wall time is measured with a monotonic clock around
the solve call only. Results go to plain CSV so any statistics package can
pick them up.
"""
from __future__ import annotations

import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from statistics import fmean
from typing import Sequence

from .core import Instance, Variant
from .search import ConfigError, SearchParams, Strategy, solve
from .tsplib import generate_instance, load_tsplib, parse_dump

log = logging.getLogger(__name__)


@dataclass
class ExperimentConfig:
    """What to run.

    ``instances`` entries are TSPLib paths, instance dumps written by
    ``gen``, or generator specs ``gen:N:SEED[:BOX]``. ``params`` overrides
    :class:`SearchParams` fields (the seed and strategy are set per run).
    ``time_budgets`` maps instance names to per-run wall-clock budgets for
    equal-time comparisons.
    """

    instances: Sequence[str]
    strategies: Sequence[str] = ("baseline",)
    variant: str = "circuit"
    euclidean: str = "nint"
    runs: int = 10
    seed: int = 0
    params: dict = field(default_factory=dict)
    time_budgets: dict[str, float] = field(default_factory=dict)
    out_dir: Path | None = None
    jobs: int = 1
    keep_logs: bool = False

    def validate(self) -> None:
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if not self.instances:
            raise ConfigError("no instances given")
        for s in self.strategies:
            try:
                Strategy(s)
            except ValueError:
                raise ConfigError(f"unknown strategy {s!r}") from None
        Variant(self.variant)
        for spec in self.instances:
            if not spec.startswith("gen:") and not Path(spec).is_file():
                raise ConfigError(f"instance file not found: {spec}")
        unknown = set(self.params) - set(SearchParams.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"unknown search parameters: {sorted(unknown)}")
        for strategy in self.strategies:
            SearchParams(**{**self.params, "strategy": strategy}).validate()


@dataclass
class ResultRow:
    instance: str
    strategy: str
    best: int | None = None
    average: float | None = None
    avg_time: float | None = None
    costs: list[int] = field(default_factory=list)
    times: list[float] = field(default_factory=list)
    seeds: list[int] = field(default_factory=list)
    error: str | None = None


def load_instance(spec: str, variant: str = "circuit", euclidean: str = "nint") -> Instance:
    if spec.startswith("gen:"):
        parts = spec.split(":")[1:]
        if len(parts) not in (2, 3):
            raise ValueError(f"generator spec must be gen:N:SEED[:BOX], got {spec!r}")
        n, seed = int(parts[0]), int(parts[1])
        box = int(parts[2]) if len(parts) == 3 else 100
        return generate_instance(n, seed, box, variant)
    path = Path(spec)
    if path.suffix.lower() == ".tsp":
        return load_tsplib(path, variant, euclidean)
    return parse_dump(path.read_text(), variant, path.stem)


_warm = False


def warm_up() -> None:
    """Load the compiled kernels once so the first timed run does not pay for it."""
    global _warm
    if not _warm:
        for strategy in Strategy:
            solve(generate_instance(6, 0), SearchParams(i_max=2, i_ils=2, strategy=strategy))
        _warm = True


def _timed_solve(instance: Instance, params: SearchParams):
    warm_up()
    start = time.perf_counter()
    best, run_log = solve(instance, params)
    return best.cost, time.perf_counter() - start, run_log


def compute_gap(dm_time: float, base_time: float) -> float:
    """Percent change of ``dm_time`` relative to ``base_time``."""
    if base_time <= 0:
        raise ValueError("base_time must be positive")
    return 100.0 * (dm_time - base_time) / base_time


def _safe_name(text: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in text)


def run_experiment(config: ExperimentConfig) -> list[ResultRow]:
    config.validate()
    rows: list[ResultRow] = []
    out = Path(config.out_dir) if config.out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    pool = ProcessPoolExecutor(config.jobs) if config.jobs > 1 else None
    try:
        for spec in config.instances:
            try:
                instance = load_instance(spec, config.variant, config.euclidean)
            except (OSError, ValueError) as exc:
                log.error("cannot load %s: %s", spec, exc)
                rows.extend(ResultRow(spec, s, error=str(exc)) for s in config.strategies)
                continue
            budget = config.time_budgets.get(instance.name)
            for strategy in config.strategies:
                base = SearchParams(**{**config.params, "strategy": strategy})
                if budget is not None:
                    base = replace(base, time_budget=budget)
                seeds = [config.seed + k for k in range(config.runs)]
                runs = [replace(base, seed=sd) for sd in seeds]
                if pool is None:
                    results = [_timed_solve(instance, p) for p in runs]
                else:
                    results = list(pool.map(_timed_solve, [instance] * len(runs), runs))
                costs = [r[0] for r in results]
                times = [r[1] for r in results]
                row = ResultRow(instance.name, strategy, min(costs), fmean(costs), fmean(times),
                                costs, times, seeds)
                rows.append(row)
                log.info("%s %s best=%d avg=%.1f time=%.2fs", row.instance, strategy, row.best,
                         row.average, row.avg_time)
                if out is not None:
                    _write_raw(out / f"raw_{_safe_name(instance.name)}_{strategy}.csv", row)
                    if config.keep_logs:
                        logdir = out / "logs"
                        logdir.mkdir(exist_ok=True)
                        for k, (_, _, run_log) in enumerate(results):
                            path = logdir / f"{_safe_name(instance.name)}_{strategy}_run{k}.jsonl"
                            with path.open("w") as fp:
                                run_log.write_jsonl(fp)
    finally:
        if pool is not None:
            pool.shutdown()
    if out is not None:
        write_summary(out / "summary.csv", rows)
    return rows


def _write_raw(path: Path, row: ResultRow) -> None:
    with path.open("w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(["run", "seed", "cost", "seconds"])
        for k, (sd, c, t) in enumerate(zip(row.seeds, row.costs, row.times)):
            w.writerow([k, sd, c, f"{t:.6f}"])


def write_summary(path: Path, rows: Sequence[ResultRow]) -> None:
    with Path(path).open("w", newline="") as fp:
        w = csv.writer(fp)
        w.writerow(["instance", "strategy", "best", "average", "avg_time", "runs", "error"])
        for r in rows:
            w.writerow([r.instance, r.strategy, "" if r.best is None else r.best,
                        "" if r.average is None else f"{r.average:.1f}",
                        "" if r.avg_time is None else f"{r.avg_time:.4f}", len(r.costs), r.error or ""])


def read_raw(path: str | os.PathLike) -> tuple[list[int], list[float]]:
    with open(path, newline="") as fp:
        recs = list(csv.DictReader(fp))
    return [int(r["cost"]) for r in recs], [float(r["seconds"]) for r in recs]


def budgets_from_summary(path: str | os.PathLike, strategy: str = "baseline") -> dict[str, float]:
    """Per-instance average times of ``strategy`` from a summary CSV."""
    with open(path, newline="") as fp:
        return {r["instance"]: float(r["avg_time"]) for r in csv.DictReader(fp)
                if r["strategy"] == strategy and r["avg_time"]}


@dataclass
class TTTResult:
    target: int
    executions: int
    hit_times: list[float | None]

    @property
    def sorted_hits(self) -> list[float]:
        return sorted(t for t in self.hit_times if t is not None)

    def ecdf(self) -> list[tuple[float, float]]:
        """``(t_i, i / executions)`` for the sorted hit times."""
        return [(t, (i + 1) / self.executions) for i, t in enumerate(self.sorted_hits)]

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="") as fp:
            w = csv.writer(fp)
            w.writerow(["execution", "hit_time"])
            for k, t in enumerate(self.hit_times):
                w.writerow([k, "" if t is None else f"{t:.6f}"])

    def write_ecdf(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="") as fp:
            w = csv.writer(fp)
            w.writerow(["time", "probability"])
            for t, p in self.ecdf():
                w.writerow([f"{t:.6f}", f"{p:.6f}"])


def ttt_experiment(instance: Instance, strategy: str, target: float, executions: int, seed: int = 0,
                   params: dict | None = None) -> TTTResult:
    """Time for each of ``executions`` seeded runs to reach ``target``.

    A run stops as soon as its incumbent cost is at most ``target``; runs
    that finish without reaching it are recorded as ``None``.
    """
    if executions < 1:
        raise ValueError("executions must be at least 1")
    stop = int(target) if math.isfinite(target) else 2 ** 62
    base = SearchParams(**{**(params or {}), "strategy": strategy})
    hits: list[float | None] = []
    warm_up()
    for k in range(executions):
        _, run_log = solve(instance, replace(base, seed=seed + k), stop_at=stop)
        hit = next((h.elapsed for h in run_log.hits if h.target == stop), None)
        hits.append(hit)
    return TTTResult(stop, executions, hits)
