"""Greedy randomized and pattern-guided tour construction.

Both builders grow the tour from the depot. At every step the candidate
list is sorted by travel time from the last appended vertex (ties broken by
vertex index) and the next vertex is drawn uniformly from the first
``max(1, floor(alpha * len(CL)))`` candidates.

The pattern-guided builder first chains the pattern's arcs into segments
(the consecutive-arcs lists). Only a segment's first vertex competes in the
candidate list; picking it appends the whole segment.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .core import Instance, MLPError, Solution, latency_cost

Arc = tuple[int, int]


class MalformedPatternError(MLPError, ValueError):
    pass


def rcl_size(alpha: float, cl_len: int) -> int:
    # the epsilon keeps 0.29 * 100 (28.999999999999996) from flooring to 28
    return max(1, math.floor(alpha * cl_len + 1e-9))


def _pick(instance: Instance, cl: np.ndarray, last: int, alpha: float, rng: np.random.Generator) -> int:
    """Index into ``cl`` of the vertex drawn from the restricted candidate list."""
    order = np.lexsort((cl, instance.dist[last, cl]))
    size = rcl_size(alpha, cl.shape[0])
    return int(order[int(rng.integers(size))]) if size > 1 else int(order[0])


def greedy_randomized(instance: Instance, alpha: float, rng: np.random.Generator) -> Solution:
    tour = [0]
    cl = np.arange(1, instance.n + 1, dtype=np.int64)
    last = 0
    while cl.shape[0]:
        k = _pick(instance, cl, last, alpha, rng)
        last = int(cl[k])
        tour.append(last)
        cl = np.delete(cl, k)
    arr = np.array(tour, dtype=np.int64)
    return Solution(arr, latency_cost(instance, arr))


def build_cal(pattern: Iterable[Arc]) -> list[list[int]]:
    """Chain the arcs of ``pattern`` into maximal vertex sequences.

    The depot only ever starts a segment; an arc into the depot (the closing
    arc of a circuit) ends its segment with ``0``. Segments are returned
    sorted by their first vertex.
    """
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for u, v in pattern:
        u, v = int(u), int(v)
        if u == v:
            raise MalformedPatternError(f"self-loop arc ({u}, {v})")
        if u in succ and succ[u] != v:
            raise MalformedPatternError(f"vertex {u} has two outgoing arcs")
        if v in pred and pred[v] != u:
            raise MalformedPatternError(f"vertex {v} has two incoming arcs")
        succ[u] = v
        pred[v] = u

    heads = sorted(u for u in succ if u not in pred or u == 0)
    segments = []
    used = 0
    for head in heads:
        seg = [head]
        v = head
        while v in succ:
            v = succ[v]
            used += 1
            seg.append(v)
            if v == 0:
                break
            if v == head:
                raise MalformedPatternError("pattern contains a cycle")
        segments.append(seg)
    if used != len(succ):
        raise MalformedPatternError("pattern contains a cycle that avoids the depot")
    return segments


def hybrid_construct(instance: Instance, alpha: float, pattern: Iterable[Arc],
                     rng: np.random.Generator) -> Solution:
    """Greedy randomized construction that inserts pattern segments whole.

    A segment ending at the depot fixes the last customers of a circuit, so
    it is kept out of the candidate list and appended once everything else
    is placed.
    """
    segments = build_cal(pattern)
    n = instance.n
    for seg in segments:
        if max(seg) > n:
            raise MalformedPatternError(f"pattern references vertex {max(seg)} but n = {n}")

    tour = [0]
    by_head: dict[int, list[int]] = {}
    closing: list[int] | None = None
    in_segment = np.zeros(n + 1, dtype=bool)
    for seg in segments:
        in_segment[seg] = True
        if seg[0] == 0:
            body = seg[1:-1] if seg[-1] == 0 else seg[1:]
            if seg[-1] == 0 and len(body) != n:
                raise MalformedPatternError("a depot-to-depot segment must cover every customer")
            tour.extend(body)
        elif seg[-1] == 0:
            closing = seg[:-1]
        else:
            by_head[seg[0]] = seg

    free = np.flatnonzero(~in_segment)
    cl = np.sort(np.concatenate([free[free != 0], np.fromiter(by_head, dtype=np.int64)]))
    last = tour[-1]
    while cl.shape[0]:
        k = _pick(instance, cl, last, alpha, rng)
        c = int(cl[k])
        tour.extend(by_head.get(c, (c,)))
        last = tour[-1]
        cl = np.delete(cl, k)
    if closing is not None:
        tour.extend(closing)

    arr = np.array(tour, dtype=np.int64)
    return Solution(arr, latency_cost(instance, arr))
