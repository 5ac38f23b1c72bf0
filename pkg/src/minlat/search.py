"""Multi-start iterated local search for the MLP and its data-mining hybrids.

Three strategies share one driver:

``baseline``
    ``i_max`` multi-start iterations; each builds a greedy randomized tour
    and runs an ILS loop (RVND, then a double-bridge kick of the best tour of
    the loop) until ``i_ils`` consecutive kicks fail to improve.
``dm``
    The first half is the baseline plus elite-set maintenance. The elite
    set is then mined once and the second half builds its starting tours
    from the mined patterns, taken round-robin.
``mdm``
    Like ``dm``, but the elite set keeps being updated in the second half
    and is re-mined before any iteration that follows an elite change.

All randomness comes from one PCG64 generator seeded with ``params.seed``
and consumed in a fixed order, so a run is fully reproducible. Elite-set
bookkeeping draws no random numbers, which keeps the first half of the
hybrids identical to the baseline.
"""
from __future__ import annotations

import bisect
import enum
import json
import time
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .construct import greedy_randomized, hybrid_construct
from .core import Instance, MLPError, Solution, latency_cost
from .mining import decode_pattern, mine_maximal, select_patterns, to_transactions
from .neighborhoods import rvnd
from .subseq import SubseqTables


class ConfigError(MLPError, ValueError):
    pass


class Strategy(str, enum.Enum):
    BASELINE = "baseline"
    DM = "dm"
    MDM = "mdm"


#: alpha grid 0.00, 0.01, ..., 0.25
DEFAULT_R = tuple(k / 100 for k in range(26))


@dataclass
class SearchParams:
    i_max: int = 10
    i_ils: int | None = None  # None: min(100, n)
    r_set: Sequence[float] = DEFAULT_R
    d: int = 10
    sup_min: float = 0.7
    max_p: int = 5
    strategy: Strategy = Strategy.BASELINE
    time_budget: float | None = None
    seed: int = 0
    elite_identity: str = "tour"  # "tour" or "cost"
    pattern_order: str | None = None  # "ascending" / "descending"; None: per strategy

    def __post_init__(self):
        self.strategy = Strategy(self.strategy)

    def validate(self) -> None:
        if self.i_max < 1:
            raise ConfigError("i_max must be positive")
        if self.strategy is not Strategy.BASELINE and (self.i_max < 2 or self.i_max % 2):
            raise ConfigError("the mining strategies need an even i_max >= 2")
        if self.i_ils is not None and self.i_ils < 1:
            raise ConfigError("i_ils must be positive")
        if not self.r_set or any(not 0 <= a < 1 for a in self.r_set):
            raise ConfigError("r_set must be a nonempty list of values in [0, 1)")
        if self.d < 1 or self.max_p < 1:
            raise ConfigError("d and max_p must be positive")
        if not 0 < self.sup_min <= 1:
            raise ConfigError("sup_min must be in (0, 1]")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ConfigError("time_budget must be positive")
        if self.elite_identity not in ("tour", "cost"):
            raise ConfigError("elite_identity must be 'tour' or 'cost'")
        if self.pattern_order not in (None, "ascending", "descending"):
            raise ConfigError("pattern_order must be 'ascending' or 'descending'")

    def ils_budget(self, n: int) -> int:
        return self.i_ils if self.i_ils is not None else min(100, n)

    def descending_patterns(self) -> bool:
        if self.pattern_order is None:
            return self.strategy is Strategy.MDM
        return self.pattern_order == "descending"


class EliteSet:
    """The ``capacity`` best distinct solutions seen, kept sorted by cost."""

    def __init__(self, capacity: int, identity: str = "tour"):
        self.capacity = capacity
        self.identity = identity
        self._entries: list[Solution] = []
        self._keys: set = set()

    def _key(self, s: Solution):
        return s.key() if self.identity == "tour" else s.cost

    def __len__(self):
        return len(self._entries)

    def __iter__(self):
        return iter(self._entries)

    @property
    def full(self) -> bool:
        return len(self._entries) >= self.capacity

    @property
    def worst(self) -> Solution | None:
        return self._entries[-1] if self._entries else None

    def update(self, s: Solution) -> bool:
        key = self._key(s)
        if key in self._keys:
            return False
        if self.full:
            if s.cost >= self._entries[-1].cost:
                return False
            evicted = self._entries.pop()
            self._keys.discard(self._key(evicted))
        costs = [e.cost for e in self._entries]
        self._entries.insert(bisect.bisect_right(costs, s.cost), s.copy())
        self._keys.add(key)
        return True


def update_elite(elite: EliteSet, s: Solution) -> bool:
    return elite.update(s)


def double_bridge(s: Solution, instance: Instance, rng: np.random.Generator) -> Solution:
    """Reorder the customers as A|C|B|D using three random cut points."""
    n = instance.n
    if n < 4:
        return s.copy()
    p1, p2, p3 = np.sort(rng.choice(np.arange(1, n + 1), size=3, replace=False))
    return double_bridge_at(s, instance, int(p1), int(p2), int(p3))


def double_bridge_at(s: Solution, instance: Instance, p1: int, p2: int, p3: int) -> Solution:
    """Double-bridge with explicit cuts ``0 < p1 < p2 < p3 <= n`` in the customer sequence."""
    body = s.tour[1:]
    tour = np.concatenate([[0], body[:p1], body[p2:p3], body[p1:p2], body[p3:]]).astype(np.int64)
    return Solution(tour, latency_cost(instance, tour))


@dataclass
class IterationRecord:
    iteration: int
    phase: int
    alpha: float
    pattern: int | None
    constructive_cost: int
    ils_cost: int
    best_cost: int
    initial_tour: list[int]
    elapsed: float


@dataclass
class MiningEvent:
    iteration: int
    elite_size: int
    patterns: list[list[tuple[int, int]]]
    elapsed: float

    @property
    def sizes(self) -> list[int]:
        return [len(p) for p in self.patterns]


@dataclass
class TargetHit:
    target: int
    cost: int
    elapsed: float


@dataclass
class RunLog:
    instance: str
    strategy: str
    seed: int
    iterations: list[IterationRecord] = field(default_factory=list)
    mining: list[MiningEvent] = field(default_factory=list)
    hits: list[TargetHit] = field(default_factory=list)
    best_cost: int | None = None
    elapsed: float = 0.0
    stopped: str | None = None  # "time_budget" or "target" when cut short

    def trace(self, upto: int | None = None) -> list[tuple]:
        """Iteration records without wall-clock fields, for replay comparisons."""
        out = []
        for rec in self.iterations[:upto]:
            d = asdict(rec)
            d.pop("elapsed")
            out.append(tuple((k, tuple(v) if isinstance(v, list) else v) for k, v in d.items()))
        return out

    def events(self) -> Iterable[dict]:
        yield {"event": "start", "instance": self.instance, "strategy": self.strategy, "seed": self.seed}
        merged = [(r.elapsed, 1, {"event": "iteration", **asdict(r)}) for r in self.iterations]
        merged += [(m.elapsed, 0, {"event": "mining", "iteration": m.iteration, "elite_size": m.elite_size,
                                   "sizes": m.sizes, "patterns": m.patterns, "elapsed": m.elapsed})
                   for m in self.mining]
        merged += [(h.elapsed, 2, {"event": "target", **asdict(h)}) for h in self.hits]
        for _, _, ev in sorted(merged, key=lambda x: (x[0], x[1])):
            yield ev
        yield {"event": "end", "best_cost": self.best_cost, "elapsed": self.elapsed, "stopped": self.stopped}

    def write_jsonl(self, fp: IO[str]) -> None:
        for ev in self.events():
            fp.write(json.dumps(ev) + "\n")


class _Stop(Exception):
    def __init__(self, reason: str):
        self.reason = reason


class _Watch:
    """Tracks the incumbent and enforces the time budget and stop target."""

    def __init__(self, log: RunLog, budget: float | None, targets: Sequence[int], stop_at: int | None):
        self.log = log
        self.start = time.perf_counter()
        self.deadline = None if budget is None else self.start + budget
        self.pending = sorted(set(int(t) for t in targets), reverse=True)
        self.stop_at = stop_at
        self.incumbent: Solution | None = None

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def offer(self, tour: np.ndarray, cost: int) -> None:
        if self.incumbent is None or cost < self.incumbent.cost:
            self.incumbent = Solution(tour.copy(), int(cost))
            while self.pending and cost <= self.pending[0]:
                self.log.hits.append(TargetHit(self.pending.pop(0), int(cost), self.elapsed()))

    def checkpoint(self, tour: np.ndarray, cost: int) -> None:
        self.offer(tour, cost)
        if self.stop_at is not None and self.incumbent.cost <= self.stop_at:
            raise _Stop("target")
        if self.deadline is not None and time.perf_counter() >= self.deadline:
            raise _Stop("time_budget")


def solve(instance: Instance, params: SearchParams, *, targets: Sequence[int] = (),
          stop_at: int | None = None) -> tuple[Solution, RunLog]:
    """Run one search and return the best solution with its log.

    ``targets`` are costs whose first crossing time is logged; ``stop_at``
    ends the run as soon as the incumbent reaches that cost.
    """
    params.validate()
    strategy = params.strategy
    log = RunLog(instance.name, strategy.value, params.seed)
    watch = _Watch(log, params.time_budget, list(targets) + ([stop_at] if stop_at is not None else []), stop_at)
    rng = np.random.Generator(np.random.PCG64(params.seed))
    i_ils = params.ils_budget(instance.n)
    tables = SubseqTables(instance, np.arange(instance.n + 1))
    mining = strategy is not Strategy.BASELINE
    half = params.i_max // 2 if mining else params.i_max
    elite = EliteSet(params.d, params.elite_identity)
    patterns: list[frozenset] = []
    decoded: list[list[tuple[int, int]]] = []
    cursor = 0
    elite_changed = False
    best: Solution | None = None

    try:
        for it in range(params.i_max):
            phase_two = it >= half
            if phase_two and (it == half or (strategy is Strategy.MDM and elite_changed)):
                mined = mine_maximal(to_transactions(elite, instance), params.sup_min)
                patterns = select_patterns(mined, params.max_p, params.descending_patterns())
                decoded = [decode_pattern(p, instance.n) for p in patterns]
                log.mining.append(MiningEvent(it + 1, len(elite), decoded, watch.elapsed()))
                cursor = 0
                elite_changed = False

            alpha = float(params.r_set[int(rng.integers(len(params.r_set)))])
            pattern_idx = None
            if phase_two and patterns:
                pattern_idx = cursor % len(patterns)
                cursor += 1
                s = hybrid_construct(instance, alpha, decoded[pattern_idx], rng)
            else:
                s = greedy_randomized(instance, alpha, rng)
            initial = s
            watch.checkpoint(s.tour, s.cost)

            keep_elite = not phase_two or strategy is Strategy.MDM
            s_best = s
            iter_ils = 0
            while iter_ils < i_ils:
                s = rvnd(s, instance, rng, on_evaluated=watch.checkpoint, tables=tables)
                if mining and keep_elite and elite.update(s) and phase_two:
                    elite_changed = True
                if s.cost < s_best.cost:
                    s_best = s
                    iter_ils = 0
                s = double_bridge(s_best, instance, rng)
                iter_ils += 1

            if best is None or s_best.cost < best.cost:
                best = s_best
            log.iterations.append(IterationRecord(
                it + 1, 2 if phase_two else 1, alpha, pattern_idx, initial.cost, s_best.cost,
                best.cost, initial.tour.tolist(), watch.elapsed()))
    except _Stop as stop:
        log.stopped = stop.reason
        best = watch.incumbent

    log.best_cost = best.cost
    log.elapsed = watch.elapsed()
    return best.copy(), log
