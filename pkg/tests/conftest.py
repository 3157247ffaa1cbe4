"""Shared instance builders for the test suite."""
from __future__ import annotations

import random
from itertools import combinations

import pytest

from detcut.graph import Graph


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def dumbbell(clique: int = 5) -> Graph:
    """Two K_clique joined by a single bridge edge (0 .. c-1 | c .. 2c-1)."""
    edges = list(combinations(range(clique), 2))
    edges += [(clique + u, clique + v) for u, v in combinations(range(clique), 2)]
    edges.append((clique - 1, clique))
    return Graph(2 * clique, edges)


def glued_cliques(size: int, shared: int) -> Graph:
    """Two K_size sharing `shared` vertices (ids 0..shared-1)."""
    left = list(range(size))
    right = list(range(shared)) + list(range(size, 2 * size - shared))
    edges = set()
    for group in (left, right):
        edges.update(tuple(sorted(e)) for e in combinations(group, 2))
    return Graph(2 * size - shared, sorted(edges))


def random_connected(n: int, extra_edges: int, seed: int) -> Graph:
    """Random spanning tree plus `extra_edges` distinct random non-tree edges."""
    rng = random.Random(seed)
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for i in range(1, n):
        j = rng.randrange(i)
        edges.add(tuple(sorted((order[i], order[j]))))
    candidates = [e for e in combinations(range(n), 2) if e not in edges]
    rng.shuffle(candidates)
    edges.update(candidates[:extra_edges])
    return Graph(n, sorted(edges))


def random_multigraph(n: int, m: int, seed: int) -> Graph:
    """Connected random multigraph: spanning tree plus random repeatable edges."""
    rng = random.Random(seed)
    edges = [(i, rng.randrange(i)) for i in range(1, n)]
    while len(edges) < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.append((min(u, v), max(u, v)))
    return Graph(n, edges)


@pytest.fixture
def c8() -> Graph:
    return cycle(8)


@pytest.fixture
def k4() -> Graph:
    return complete(4)
