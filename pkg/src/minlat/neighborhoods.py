"""The five classic tour neighborhoods and random variable neighborhood descent.

Positions refer to the working sequence of :class:`~minlat.subseq.SubseqTables`:
the depot sits at position 0 and never moves, customers occupy ``1..n`` and,
for circuits, the terminal depot copy sits at ``n + 1``. A move is the triple
``(kind, i, j)``:

* ``SWAP``: exchange the customers at positions ``i < j``.
* ``TWO_OPT``: reverse positions ``i..j`` (``i < j``).
* ``REINSERTION``, ``OR_OPT2``, ``OR_OPT3``: move the block of 1, 2 or 3
  customers starting at ``i`` so it begins at position ``j`` of the resulting
  tour; the block keeps its orientation.
"""
from __future__ import annotations

import enum
from typing import Callable

import numpy as np
from numba import njit

from .core import Instance, MLPError, Solution
from .subseq import SubseqTables


class MoveKind(enum.IntEnum):
    SWAP = 0
    TWO_OPT = 1
    REINSERTION = 2
    OR_OPT2 = 3
    OR_OPT3 = 4

    @property
    def block(self) -> int:
        return {MoveKind.REINSERTION: 1, MoveKind.OR_OPT2: 2, MoveKind.OR_OPT3: 3}.get(self, 0)


ALL_KINDS = tuple(MoveKind)


class StaleTablesError(MLPError, RuntimeError):
    pass


@njit(cache=True)
def _join(t, c, link, seg_w, seg_t, seg_c):
    # scalars only: array arguments would cost a refcount round-trip per call
    return t + link + seg_t, c + seg_w * (t + link) + seg_c


@njit(cache=True)
def _count_moves(kind, n):
    if kind <= 1:
        return n * (n - 1) // 2
    k = kind - 1
    blocks = n - k + 1
    if blocks <= 0:
        return 0
    return blocks * (n - k)


# One scan loop per kind with the cost formula written out in the loop body:
# numba functions taking array arguments are not inlined cheaply, so only
# the scalar ``_join`` is factored out. Each scan returns the first cheapest
# move strictly below ``bound`` (indices -1 when none) and, if ``record`` is
# set, writes every candidate to ``out`` as ``(i, j, cost)``.

@njit(cache=True)
def _scan_swap(n, seq, dist, W, T, Cf, Cr, bound, record, out):
    end = seq.shape[0] - 1
    best, bi, bj, idx = bound, -1, -1, 0
    for i in range(1, n):
        t0, c0, before, vi = T[0, i - 1], Cf[0, i - 1], seq[i - 1], seq[i]
        for j in range(i + 1, n + 1):
            # prefix, j, [i+1..j-1], i, suffix
            vj = seq[j]
            t, c = _join(t0, c0, dist[before, vj], 1, 0, 0)
            if j > i + 1:
                t, c = _join(t, c, dist[vj, seq[i + 1]], W[i + 1, j - 1], T[i + 1, j - 1], Cf[i + 1, j - 1])
                t, c = _join(t, c, dist[seq[j - 1], vi], 1, 0, 0)
            else:
                t, c = _join(t, c, dist[vj, vi], 1, 0, 0)
            if j < end:
                t, c = _join(t, c, dist[vi, seq[j + 1]], W[j + 1, end], T[j + 1, end], Cf[j + 1, end])
            if record:
                out[idx, 0], out[idx, 1], out[idx, 2] = i, j, c
                idx += 1
            if c < best:
                best, bi, bj = c, i, j
    return best, bi, bj


@njit(cache=True)
def _scan_two_opt(n, seq, dist, W, T, Cf, Cr, bound, record, out):
    end = seq.shape[0] - 1
    best, bi, bj, idx = bound, -1, -1, 0
    for i in range(1, n):
        t0, c0, before, vi = T[0, i - 1], Cf[0, i - 1], seq[i - 1], seq[i]
        for j in range(i + 1, n + 1):
            # prefix, reversed [i..j], suffix
            t, c = _join(t0, c0, dist[before, seq[j]], W[i, j], T[i, j], Cr[i, j])
            if j < end:
                t, c = _join(t, c, dist[vi, seq[j + 1]], W[j + 1, end], T[j + 1, end], Cf[j + 1, end])
            if record:
                out[idx, 0], out[idx, 1], out[idx, 2] = i, j, c
                idx += 1
            if c < best:
                best, bi, bj = c, i, j
    return best, bi, bj


@njit(cache=True)
def _scan_or_opt(k, n, seq, dist, W, T, Cf, Cr, bound, record, out):
    end = seq.shape[0] - 1
    best, bi, bj, idx = bound, -1, -1, 0
    last_start = n - k + 1
    for i in range(1, last_start + 1):
        b_end = i + k - 1
        bw, bt, bc = W[i, b_end], T[i, b_end], Cf[i, b_end]
        head, tail = seq[i], seq[b_end]
        # j is where the block starts in the new tour
        for j in range(1, last_start + 1):
            if j == i:
                continue
            if j > i:
                # prefix, [i+k..j+k-1], block, rest
                stop = j + k - 1
                t, c = _join(T[0, i - 1], Cf[0, i - 1], dist[seq[i - 1], seq[i + k]],
                             W[i + k, stop], T[i + k, stop], Cf[i + k, stop])
                t, c = _join(t, c, dist[seq[stop], head], bw, bt, bc)
                if stop < end:
                    t, c = _join(t, c, dist[tail, seq[stop + 1]], W[stop + 1, end], T[stop + 1, end], Cf[stop + 1, end])
            else:
                # [0..j-1], block, [j..i-1], rest
                t, c = _join(T[0, j - 1], Cf[0, j - 1], dist[seq[j - 1], head], bw, bt, bc)
                t, c = _join(t, c, dist[tail, seq[j]], W[j, i - 1], T[j, i - 1], Cf[j, i - 1])
                if b_end < end:
                    t, c = _join(t, c, dist[seq[i - 1], seq[b_end + 1]], W[b_end + 1, end], T[b_end + 1, end], Cf[b_end + 1, end])
            if record:
                out[idx, 0], out[idx, 1], out[idx, 2] = i, j, c
                idx += 1
            if c < best:
                best, bi, bj = c, i, j
    return best, bi, bj


def _scan(kind: int, n, seq, dist, W, T, Cf, Cr, bound, record, out):
    if kind == 0:
        return _scan_swap(n, seq, dist, W, T, Cf, Cr, bound, record, out)
    if kind == 1:
        return _scan_two_opt(n, seq, dist, W, T, Cf, Cr, bound, record, out)
    return _scan_or_opt(kind - 1, n, seq, dist, W, T, Cf, Cr, bound, record, out)


def move_segments(kind: MoveKind, i: int, j: int, n: int) -> list[tuple[int, int, bool]]:
    """The move as an ordered list of ``(start, end, reversed)`` tour slices."""
    kind = MoveKind(kind)
    parts: list[tuple[int, int, bool]]
    if kind is MoveKind.SWAP:
        parts = [(0, i - 1, False), (j, j, False), (i + 1, j - 1, False), (i, i, False), (j + 1, n, False)]
    elif kind is MoveKind.TWO_OPT:
        parts = [(0, i - 1, False), (i, j, True), (j + 1, n, False)]
    else:
        k = kind.block
        if j > i:
            parts = [(0, i - 1, False), (i + k, j + k - 1, False), (i, i + k - 1, False), (j + k, n, False)]
        else:
            parts = [(0, j - 1, False), (i, i + k - 1, False), (j, i - 1, False), (i + k, n, False)]
    return [p for p in parts if p[0] <= p[1]]


_NO_OUT = np.zeros((1, 3), dtype=np.int64)


def _check_tables(tour: np.ndarray, tables: SubseqTables, cost: int | None) -> None:
    if not np.array_equal(tables.tour, tour):
        raise StaleTablesError("subsequence tables were built for a different tour")
    if cost is not None and tables.cost != cost:
        raise StaleTablesError(f"tables give cost {tables.cost}, solution says {cost}")


def best_neighbor(kind: MoveKind, tour, tables: SubseqTables, instance: Instance,
                  cost: int | None = None) -> tuple[int, tuple[MoveKind, int, int]] | None:
    """Best strictly improving move of ``kind``, or None at a local optimum."""
    kind = MoveKind(kind)
    tour = np.asarray(tour)
    _check_tables(tour, tables, cost)
    current = tables.cost
    best, i, j = _scan(int(kind), instance.n, tables.seq, instance.dist, tables.W, tables.T,
                       tables.Cf, tables.Cr, current, False, _NO_OUT)
    if i < 0:
        return None
    return int(best), (kind, int(i), int(j))


def neighborhood_costs(kind: MoveKind, tables: SubseqTables) -> np.ndarray:
    """All candidates of ``kind`` as rows ``(i, j, cost)`` in scan order."""
    kind = MoveKind(kind)
    n = tables.instance.n
    out = np.zeros((max(_count_moves(int(kind), n), 0), 3), dtype=np.int64)
    if out.shape[0]:
        _scan(int(kind), n, tables.seq, tables.instance.dist, tables.W, tables.T,
              tables.Cf, tables.Cr, np.iinfo(np.int64).max, True, out)
    return out


def move_cost(kind: MoveKind, i: int, j: int, tables: SubseqTables) -> int:
    """Cost of a single move, evaluated through the generic segment algebra."""
    return tables.eval_reordering(move_segments(kind, i, j, tables.instance.n))


def apply_move(tour: np.ndarray, kind: MoveKind, i: int, j: int) -> np.ndarray:
    """Return a new tour with the move applied."""
    kind = MoveKind(kind)
    out = np.array(tour, dtype=np.int64, copy=True)
    if kind is MoveKind.SWAP:
        out[i], out[j] = out[j], out[i]
    elif kind is MoveKind.TWO_OPT:
        out[i:j + 1] = out[i:j + 1][::-1]
    else:
        k = kind.block
        block = out[i:i + k].copy()
        rest = np.concatenate([out[:i], out[i + k:]])
        out = np.concatenate([rest[:j], block, rest[j:]])
    return out


def rvnd(solution: Solution, instance: Instance, rng: np.random.Generator,
         on_evaluated: Callable[[np.ndarray, int], None] | None = None,
         tables: SubseqTables | None = None) -> Solution:
    """Random variable neighborhood descent with best-improvement moves.

    ``on_evaluated(tour, cost)`` is called after every complete neighborhood
    scan; it may raise to abort the descent (used for time budgets).
    """
    tour = solution.tour.copy()
    cost = solution.cost
    if tables is None:
        tables = SubseqTables(instance, tour)
    else:
        tables.rebuild(tour)
    active = list(ALL_KINDS)
    while active:
        kind = active[int(rng.integers(len(active)))]
        found = best_neighbor(kind, tour, tables, instance)
        if found is not None:
            cost, (_, i, j) = found
            tour = apply_move(tour, kind, i, j)
            tables.rebuild(tour)
            active = list(ALL_KINDS)
        else:
            active.remove(kind)
        if on_evaluated is not None:
            on_evaluated(tour, cost)
    return Solution(tour, cost)
