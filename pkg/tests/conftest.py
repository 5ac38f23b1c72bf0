from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from minlat.core import Instance
from minlat.neighborhoods import MoveKind

DATA = Path(__file__).parent / "data" / "tsplib"


def naive_latency(dist, tour, circuit):
    """Independent double-loop oracle: arrival times summed one by one."""
    total = 0
    for k in range(1, len(tour)):
        arrival = 0
        for j in range(1, k + 1):
            arrival += int(dist[tour[j - 1]][tour[j]])
        total += arrival
    if circuit:
        arrival = 0
        for j in range(1, len(tour)):
            arrival += int(dist[tour[j - 1]][tour[j]])
        total += arrival + int(dist[tour[-1]][0])
    return total


def running_latency(dist, tour, circuit):
    """Single-pass oracle: keep a running clock and add it at every stop."""
    clock = total = 0
    for a, b in zip(tour[:-1], tour[1:]):
        clock += int(dist[a][b])
        total += clock
    if circuit:
        total += clock + int(dist[tour[-1]][0])
    return total


def random_instance(n, seed, variant="circuit", high=100):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, high, size=(n + 1, n + 1))
    m = np.triu(m, 1)
    return Instance(m + m.T, variant, f"r{n}-{seed}")


def random_tour(n, rng):
    return np.concatenate([[0], rng.permutation(np.arange(1, n + 1))]).astype(np.int64)


def read_opt_tour(path):
    nodes, on = [], False
    for line in Path(path).read_text().splitlines():
        s = line.strip()
        if s == "TOUR_SECTION":
            on = True
        elif on:
            for tok in s.split():
                if tok == "-1":
                    return [x - 1 for x in nodes]
                if tok != "EOF":
                    nodes.append(int(tok))
    return [x - 1 for x in nodes]


@st.composite
def instances(draw, min_n=1, max_n=12, variant=None):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    v = variant or draw(st.sampled_from(["circuit", "path"]))
    return random_instance(n, seed, v)


@pytest.fixture
def data_dir():
    return DATA


def naive_neighborhood(kind, tour, n):
    """Every neighbor of ``kind`` built by explicit list surgery, in scan order."""
    out = []
    t = list(tour)
    if kind in (MoveKind.SWAP, MoveKind.TWO_OPT):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                new = t.copy()
                if kind is MoveKind.SWAP:
                    new[i], new[j] = new[j], new[i]
                else:
                    new[i:j + 1] = reversed(new[i:j + 1])
                out.append((i, j, new))
    else:
        k = kind.block
        for i in range(1, n - k + 2):
            block, rest = t[i:i + k], t[:i] + t[i + k:]
            for j in range(1, n - k + 2):
                if j != i:
                    out.append((i, j, rest[:j] + block + rest[j:]))
    return out


# acceptance results, filled by test_acceptance.py and echoed in the terminal summary
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, title, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
