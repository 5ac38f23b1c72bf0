"""Arc transactions from elite tours and maximal frequent itemset mining.

A tour becomes the set of its directed arcs, arc ``(i, j)`` encoded as
``i * (n + 1) + j``. The miner is an FP-tree search in the style of FPMax:
conditional trees are explored from the least frequent item up, single-path
trees are emitted whole, and a branch is skipped when its head plus every
remaining frequent item is already covered by a known maximal set.
"""
from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

from .core import Instance, Solution

Transaction = frozenset
Pattern = frozenset


def arc_id(i: int, j: int, n: int) -> int:
    return i * (n + 1) + j


def decode_arc(item: int, n: int) -> tuple[int, int]:
    return divmod(int(item), n + 1)


def decode_pattern(pattern: Iterable[int], n: int) -> list[tuple[int, int]]:
    return sorted(decode_arc(a, n) for a in pattern)


def tour_arcs(tour, circuit: bool) -> list[tuple[int, int]]:
    arcs = [(int(a), int(b)) for a, b in zip(tour[:-1], tour[1:])]
    if circuit:
        arcs.append((int(tour[-1]), 0))
    return arcs


def to_transactions(elite: Iterable[Solution], instance: Instance) -> list[Transaction]:
    n = instance.n
    return [frozenset(arc_id(i, j, n) for i, j in tour_arcs(s.tour, instance.circuit)) for s in elite]


def min_count(sup_min: float, m: int) -> int:
    """Smallest occurrence count that reaches a support of ``sup_min``."""
    if not 0 < sup_min <= 1:
        raise ValueError(f"sup_min must be in (0, 1], got {sup_min}")
    # tolerance for computed fractions: (3 * 0.1) * 10 evaluates to 3.0000000000000004
    return max(1, math.ceil(sup_min * m - 1e-9))


class _Node:
    __slots__ = ("item", "count", "parent", "children")

    def __init__(self, item, parent):
        self.item = item
        self.count = 0
        self.parent = parent
        self.children = {}


def _build_tree(paths, threshold):
    counts: Counter = Counter()
    for items, cnt in paths:
        for it in items:
            counts[it] += cnt
    order = sorted((it for it, c in counts.items() if c >= threshold), key=lambda it: (-counts[it], it))
    rank = {it: r for r, it in enumerate(order)}
    root = _Node(None, None)
    header: dict = {it: [] for it in order}
    for items, cnt in paths:
        node = root
        for it in sorted((it for it in items if it in rank), key=rank.__getitem__):
            child = node.children.get(it)
            if child is None:
                child = node.children[it] = _Node(it, node)
                header[it].append(child)
            child.count += cnt
            node = child
    return root, header, order


def _single_path(root) -> bool:
    node = root
    while node.children:
        if len(node.children) > 1:
            return False
        node = next(iter(node.children.values()))
    return True


class _MaximalSets:
    def __init__(self):
        self.sets: list[frozenset] = []

    def covers(self, candidate: frozenset) -> bool:
        return any(candidate <= s for s in self.sets)

    def add(self, candidate: frozenset) -> None:
        if candidate and not self.covers(candidate):
            self.sets = [s for s in self.sets if not s < candidate]
            self.sets.append(candidate)


def _fpmax(paths, head: frozenset, threshold: int, found: _MaximalSets) -> None:
    root, header, order = _build_tree(paths, threshold)
    if not order:
        found.add(head)
        return
    everything = head | frozenset(order)
    if found.covers(everything):
        return
    if _single_path(root):
        found.add(everything)
        return
    for item in reversed(order):
        cond = []
        for node in header[item]:
            prefix = []
            p = node.parent
            while p.item is not None:
                prefix.append(p.item)
                p = p.parent
            if prefix:
                cond.append((prefix, node.count))
        _fpmax(cond, head | {item}, threshold, found)


def mine_maximal(transactions: Sequence[Iterable[int]], sup_min: float) -> list[Pattern]:
    """All maximal itemsets occurring in at least ``ceil(sup_min * m)`` transactions.

    Returned sorted by decreasing size, then by sorted item ids.
    """
    if not transactions:
        raise ValueError("no transactions to mine")
    threshold = min_count(sup_min, len(transactions))
    found = _MaximalSets()
    _fpmax([(list(t), 1) for t in transactions], frozenset(), threshold, found)
    return sorted(found.sets, key=lambda s: (-len(s), sorted(s)))


def select_patterns(mined: Iterable[Pattern], max_p: int, descending: bool = False) -> list[Pattern]:
    """Keep the ``max_p`` largest patterns, ordered by arc count.

    Ascending order is the single-mining strategy's convention; the
    multi-mining strategy asks for ``descending``. Equal sizes fall back to
    lexicographic order of the sorted ids.
    """
    ranked = sorted(mined, key=lambda p: (-len(p), sorted(p)))[:max_p]
    if descending:
        return ranked
    return sorted(ranked, key=lambda p: (len(p), sorted(p)))


def support(pattern: Iterable[int], transactions: Sequence[frozenset]) -> int:
    p = frozenset(pattern)
    return sum(1 for t in transactions if p <= t)


def format_fimi(transactions: Iterable[Iterable[int]]) -> str:
    """Transactions in the FIMI text format: one per line, ids space-separated."""
    return "".join(" ".join(str(i) for i in sorted(t)) + "\n" for t in transactions)
