"""Problem instances, solutions and exact latency evaluation.

Vertex 0 is always the depot. A tour is a permutation of ``0..n`` that
starts at the depot. The latency of a customer is its arrival time along
the tour; the objective is the sum of all latencies. In the circuit
variant the arrival back at the depot counts as one extra latency term.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class MLPError(Exception):
    """Base class for all errors raised by this package."""


class InvalidTourError(MLPError, ValueError):
    pass


class InvalidInstanceError(MLPError, ValueError):
    pass


class Variant(str, enum.Enum):
    CIRCUIT = "circuit"
    PATH = "path"


@dataclass(frozen=True, eq=False)
class Instance:
    """An immutable symmetric MLP instance.

    ``dist`` is an ``(n+1) x (n+1)`` int64 matrix of travel times. The
    array is made read-only on construction so an instance can be shared
    freely between threads and worker processes.
    """

    dist: np.ndarray
    variant: Variant = Variant.CIRCUIT
    name: str = ""
    coords: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        dist = np.array(self.dist, dtype=np.int64, copy=True)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise InvalidInstanceError(f"distance matrix must be square, got shape {dist.shape}")
        if dist.shape[0] < 2:
            raise InvalidInstanceError("an instance needs at least one customer")
        if np.any(np.diag(dist) != 0):
            raise InvalidInstanceError("distance matrix must have a zero diagonal")
        if np.any(dist < 0):
            raise InvalidInstanceError("travel times must be non-negative")
        if not np.array_equal(dist, dist.T):
            raise InvalidInstanceError("distance matrix must be symmetric")
        dist.flags.writeable = False
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def n(self) -> int:
        """Number of customers (depot excluded)."""
        return self.dist.shape[0] - 1

    @property
    def circuit(self) -> bool:
        return self.variant is Variant.CIRCUIT

    def with_variant(self, variant: Variant | str) -> Instance:
        return Instance(self.dist, Variant(variant), self.name, self.coords)

    def __repr__(self):
        return f"Instance(name={self.name!r}, n={self.n}, variant={self.variant.value})"


@dataclass
class Solution:
    tour: np.ndarray
    cost: int

    def copy(self) -> Solution:
        return Solution(self.tour.copy(), self.cost)

    def key(self) -> bytes:
        """Hashable identity of the tour, used for duplicate detection."""
        return self.tour.tobytes()

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return self.cost == other.cost and np.array_equal(self.tour, other.tour)


def validate_tour(instance: Instance, tour) -> np.ndarray:
    """Return ``tour`` as an int64 array, raising InvalidTourError if malformed."""
    arr = np.asarray(tour)
    if arr.ndim != 1 or arr.shape[0] != instance.n + 1:
        raise InvalidTourError(
            f"tour must list all {instance.n + 1} vertices, got {arr.shape[0] if arr.ndim == 1 else arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InvalidTourError("tour entries must be integers")
    arr = arr.astype(np.int64, copy=False)
    if arr[0] != 0:
        raise InvalidTourError(f"tour must start at the depot, starts at {arr[0]}")
    if arr.min() < 0 or arr.max() > instance.n:
        raise InvalidTourError(f"tour has vertices outside 0..{instance.n}")
    counts = np.bincount(arr, minlength=instance.n + 1)
    dup = np.flatnonzero(counts > 1)
    if dup.size:
        raise InvalidTourError(f"vertex {dup[0]} visited more than once")
    return arr


def latency_cost(instance: Instance, tour) -> int:
    """Total latency of ``tour``; adds the depot-return arrival for circuits."""
    arr = validate_tour(instance, tour)
    arrivals = np.cumsum(instance.dist[arr[:-1], arr[1:]])
    cost = int(arrivals.sum())
    if instance.circuit:
        cost += int(arrivals[-1]) + int(instance.dist[arr[-1], 0])
    return cost


def make_solution(instance: Instance, tour) -> Solution:
    arr = validate_tour(instance, tour).copy()
    return Solution(arr, latency_cost(instance, arr))


def tsp_length(instance: Instance, tour) -> int:
    """Plain travel length of the tour (closing arc included for circuits)."""
    arr = validate_tour(instance, tour)
    length = int(instance.dist[arr[:-1], arr[1:]].sum())
    if instance.circuit:
        length += int(instance.dist[arr[-1], 0])
    return length
