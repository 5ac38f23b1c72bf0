"""Subsequence data for constant-time evaluation of reordered tours.

Every contiguous slice of the tour is summarised by a triple ``(W, T, C)``:
the number of vertices in the slice that accrue latency, the time needed to
traverse it, and its latency cost when traversal starts at time zero. Two
summaries join in O(1)::

    W = a.W + b.W
    T = a.T + link + b.T
    C = a.C + b.W * (a.T + link) + b.C

The tables cover a *working sequence*: the tour itself for the path
variant, and the tour followed by a terminal copy of the depot for the
circuit variant. The leading depot carries ``W = 0``; every other position,
including the terminal depot, carries ``W = 1``. Both variants then share
one algebra and the full cost is ``C`` of the whole sequence.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np
from numba import njit

from .core import Instance, MLPError


class SubseqData(NamedTuple):
    W: int
    T: int
    C: int


EMPTY = SubseqData(0, 0, 0)


class SegmentError(MLPError, ValueError):
    pass


def concat(a: SubseqData, b: SubseqData, link: int) -> SubseqData:
    return SubseqData(a.W + b.W, a.T + link + b.T, a.C + b.W * (a.T + link) + b.C)


@njit(cache=True)
def _rebuild(seq, dist, W, T, Cf, Cr):
    m = seq.shape[0]
    for i in range(m):
        W[i, i] = 0 if i == 0 else 1
        T[i, i] = 0
        Cf[i, i] = 0
        Cr[i, i] = 0
        for j in range(i + 1, m):
            link = dist[seq[j - 1], seq[j]]
            W[i, j] = W[i, j - 1] + 1
            T[i, j] = T[i, j - 1] + link
            # forward: slice i..j-1 then vertex j
            Cf[i, j] = Cf[i, j - 1] + T[i, j]
            # reversed: vertex j then the reversed slice i..j-1
            Cr[i, j] = Cr[i, j - 1] + W[i, j - 1] * link


def working_sequence(instance: Instance, tour: np.ndarray) -> np.ndarray:
    if instance.circuit:
        return np.append(tour, 0).astype(np.int64)
    return np.ascontiguousarray(tour, dtype=np.int64)


class SubseqTables:
    """Forward and reversed summaries of every slice of the current tour.

    ``W`` and ``T`` are shared by both orientations because instances are
    symmetric; ``Cf``/``Cr`` hold the forward and reversed latency costs.
    Entries with ``i > j`` are unused.
    """

    def __init__(self, instance: Instance, tour):
        self.instance = instance
        m = instance.n + 2 if instance.circuit else instance.n + 1
        self.W = np.zeros((m, m), dtype=np.int64)
        self.T = np.zeros((m, m), dtype=np.int64)
        self.Cf = np.zeros((m, m), dtype=np.int64)
        self.Cr = np.zeros((m, m), dtype=np.int64)
        self.seq = np.zeros(m, dtype=np.int64)
        self.rebuild(tour)

    @property
    def size(self) -> int:
        """Length of the working sequence."""
        return self.seq.shape[0]

    @property
    def tour(self) -> np.ndarray:
        return self.seq[: self.instance.n + 1]

    @property
    def cost(self) -> int:
        return int(self.Cf[0, -1])

    def rebuild(self, tour) -> None:
        self.seq[:] = working_sequence(self.instance, np.asarray(tour, dtype=np.int64))
        _rebuild(self.seq, self.instance.dist, self.W, self.T, self.Cf, self.Cr)

    def fwd(self, i: int, j: int) -> SubseqData:
        return SubseqData(int(self.W[i, j]), int(self.T[i, j]), int(self.Cf[i, j]))

    def rev(self, i: int, j: int) -> SubseqData:
        return SubseqData(int(self.W[i, j]), int(self.T[i, j]), int(self.Cr[i, j]))

    def eval_reordering(self, segments: Sequence[tuple[int, int, bool]]) -> int:
        """Cost of the tour obtained by concatenating ``segments``.

        Each segment is ``(i, j, reversed)`` over positions ``i <= j`` of the
        tour. Segments must partition positions ``0..n`` and the first one
        must start with the depot; the circuit terminal is appended here.
        """
        n = self.instance.n
        covered = np.zeros(n + 1, dtype=np.int64)
        for i, j, _ in segments:
            if not 0 <= i <= j <= n:
                raise SegmentError(f"segment ({i}, {j}) outside positions 0..{n}")
            covered[i:j + 1] += 1
        if np.any(covered != 1):
            raise SegmentError("segments must cover every tour position exactly once")
        i0, _, r0 = segments[0]
        if i0 != 0 or r0:
            raise SegmentError("the first segment must start at the depot, unreversed")

        seq, dist = self.seq, self.instance.dist
        acc = EMPTY
        last = -1
        for i, j, reverse in segments:
            part = self.rev(i, j) if reverse else self.fwd(i, j)
            first = seq[j] if reverse else seq[i]
            acc = part if last < 0 else concat(acc, part, int(dist[last, first]))
            last = seq[i] if reverse else seq[j]
        if self.instance.circuit:
            acc = concat(acc, SubseqData(1, 0, 0), int(dist[last, 0]))
        return acc.C


def rebuild(tour, instance: Instance) -> SubseqTables:
    return SubseqTables(instance, tour)
