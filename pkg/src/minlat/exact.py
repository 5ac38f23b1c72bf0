"""Exhaustive enumeration for tiny instances."""
from __future__ import annotations

import itertools

import numpy as np

from .core import Instance, Solution

MAX_N = 10


def brute_force(instance: Instance) -> Solution:
    """Optimal solution by enumerating all ``n!`` customer orders.

    Ties go to the lexicographically first tour.
    """
    n = instance.n
    if n > MAX_N:
        raise ValueError(f"enumeration is limited to n <= {MAX_N}, got {n}")
    perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64).reshape(-1, n)
    tours = np.hstack([np.zeros((perms.shape[0], 1), dtype=np.int64), perms])
    arrivals = np.cumsum(instance.dist[tours[:, :-1], tours[:, 1:]], axis=1)
    costs = arrivals.sum(axis=1)
    if instance.circuit:
        costs += arrivals[:, -1] + instance.dist[tours[:, -1], 0]
    k = int(np.argmin(costs))
    return Solution(tours[k].copy(), int(costs[k]))
