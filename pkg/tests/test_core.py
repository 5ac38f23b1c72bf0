import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minlat.core import (Instance, InvalidInstanceError, InvalidTourError, Variant, latency_cost, make_solution,
                         tsp_length, validate_tour)

from conftest import instances, naive_latency, random_instance, random_tour


def line_instance(n, variant):
    x = np.arange(n + 1)
    return Instance(np.abs(x[:, None] - x[None, :]), variant)


def test_single_customer_path_and_circuit():
    d = [[0, 5], [5, 0]]
    assert latency_cost(Instance(d, "path"), [0, 1]) == 5
    assert latency_cost(Instance(d, "circuit"), [0, 1]) == 15


def test_unit_line_path():
    assert latency_cost(line_instance(3, "path"), [0, 1, 2, 3]) == 6


def test_circuit_n7_matches_naive_double_loop():
    inst = random_instance(7, 11, "circuit")
    rng = np.random.default_rng(0)
    for _ in range(20):
        t = random_tour(7, rng)
        assert latency_cost(inst, t) == naive_latency(inst.dist, t, True)


def test_thousand_random_pairs_against_oracle():
    rng = np.random.default_rng(1)
    for k in range(1000):
        n = int(rng.integers(1, 51))
        inst = random_instance(n, k, "circuit" if k % 2 else "path")
        t = random_tour(n, rng)
        assert latency_cost(inst, t) == naive_latency(inst.dist, t, inst.circuit)


def test_circuit_decomposes_into_path_plus_return_arrival():
    rng = np.random.default_rng(2)
    for k in range(1000):
        n = int(rng.integers(1, 30))
        circ = random_instance(n, k, "circuit")
        path = circ.with_variant("path")
        t = random_tour(n, rng)
        extra = int(circ.dist[t[:-1], t[1:]].sum()) + int(circ.dist[t[-1], 0])
        assert latency_cost(circ, t) == latency_cost(path, t) + extra


@given(instances(max_n=20), st.randoms(use_true_random=False))
@settings(max_examples=200, deadline=None)
def test_cost_at_least_first_arc(inst, r):
    body = list(range(1, inst.n + 1))
    r.shuffle(body)
    t = [0] + body
    assert latency_cost(inst, t) >= inst.dist[t[0], t[1]]
    assert latency_cost(inst, t) == naive_latency(inst.dist, t, inst.circuit)


@pytest.mark.parametrize("tour, msg", [
    ([1, 0, 2, 3], "depot"),
    ([0, 1, 1, 3], "more than once"),
    ([0, 1, 2], "all 4"),
    ([0, 1, 2, 4], "outside"),
])
def test_malformed_tours_rejected(tour, msg):
    inst = line_instance(3, "path")
    with pytest.raises(InvalidTourError, match=msg):
        latency_cost(inst, tour)


def test_float_tour_rejected():
    with pytest.raises(InvalidTourError):
        validate_tour(line_instance(2, "path"), np.array([0.0, 1.0, 2.0]))


@pytest.mark.parametrize("dist", [
    [[0]],
    [[0, 1], [2, 0]],
    [[1, 1], [1, 0]],
    [[0, -1], [-1, 0]],
    [[0, 1, 2], [1, 0, 3]],
])
def test_invalid_instances(dist):
    with pytest.raises(InvalidInstanceError):
        Instance(dist)


def test_instance_is_read_only_and_typed():
    inst = Instance([[0, 3], [3, 0]], "path")
    assert inst.dist.dtype == np.int64
    assert inst.n == 1 and not inst.circuit and inst.variant is Variant.PATH
    with pytest.raises(ValueError):
        inst.dist[0, 1] = 4


def test_make_solution_and_tsp_length():
    inst = line_instance(3, "circuit")
    s = make_solution(inst, [0, 2, 1, 3])
    assert s.cost == latency_cost(inst, [0, 2, 1, 3])
    assert tsp_length(inst, [0, 2, 1, 3]) == 2 + 1 + 2 + 3
    assert s == s.copy() and s.copy() is not s


def test_oracles_agree():
    from conftest import running_latency
    rng = np.random.default_rng(4)
    for k in range(200):
        inst = random_instance(int(rng.integers(1, 20)), k, "circuit" if k % 2 else "path")
        t = random_tour(inst.n, rng)
        assert running_latency(inst.dist, t, inst.circuit) == naive_latency(inst.dist, t, inst.circuit)
