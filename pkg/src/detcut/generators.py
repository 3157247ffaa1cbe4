"""Deterministic benchmark instance families.

Every family is a pure function of (name, n, seed); the seed of each
instance is derived from its parameters and recorded by the harness, so
"random" families reproduce bit-identically.
"""
from __future__ import annotations

import hashlib
import random
from itertools import combinations

from .expanders import gabber_galil
from .graph import DomainError, Graph

FAMILIES = ("dumbbell", "planted", "expander", "cycle-power", "random-regular")


def instance_seed(family: str, n: int) -> int:
    digest = hashlib.sha256(f"{family}:{n}".encode()).digest()
    return int.from_bytes(digest[:4], "big") or 1


def dumbbell_graph(n: int) -> Graph:
    """Two near-equal cliques joined by one bridge edge."""
    if n < 4:
        raise DomainError("dumbbell needs n >= 4")
    a = n // 2
    edges = list(combinations(range(a), 2))
    edges += [(u, v) for u, v in combinations(range(a, n), 2)]
    edges.append((a - 1, a))
    return Graph(n, edges)


def planted_graph(n: int, seed: int) -> Graph:
    """Two dense random halves with a thin random crossing set."""
    if n < 6:
        raise DomainError("planted family needs n >= 6")
    rng = random.Random(seed)
    half = n // 2
    edges = set()
    for group in (range(half), range(half, n)):
        group = list(group)
        for i in range(1, len(group)):
            edges.add((group[rng.randrange(i)], group[i]))
        want = len(group) * 3
        pool = [e for e in combinations(group, 2) if e not in edges]
        rng.shuffle(pool)
        edges.update(pool[: max(0, want - len(group) + 1)])
    crossing = max(1, n // 20)
    for _ in range(crossing):
        u = rng.randrange(half)
        v = half + rng.randrange(n - half)
        edges.add((u, v))
    return Graph(n, sorted(edges))


def expander_graph(n: int) -> Graph:
    return gabber_galil(n).without_loops()


def cycle_power_graph(n: int, power: int = 3) -> Graph:
    """Cycle plus chords to the `power` nearest neighbors each way."""
    if n < 2 * power + 2:
        raise DomainError("cycle-power needs more vertices than twice the power")
    edges = set()
    for v in range(n):
        for d in range(1, power + 1):
            u = (v + d) % n
            edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


def random_regular_graph(n: int, degree: int, seed: int) -> Graph:
    """Pairing-model d-regular multigraph, resampled until connected."""
    if n * degree % 2 != 0:
        raise DomainError("n * degree must be even for a regular graph")
    rng = random.Random(seed)
    for _ in range(64):
        stubs = [v for v in range(n) for _ in range(degree)]
        rng.shuffle(stubs)
        edges = []
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            edges.append((min(u, v), max(u, v)))
        if not ok:
            continue
        g = Graph(n, edges)
        if g.is_connected():
            return g
    raise DomainError(f"could not sample a connected {degree}-regular graph on {n} vertices")


def make_instance(family: str, n: int) -> tuple[Graph, int]:
    """(graph, seed actually used); deterministic per (family, n)."""
    seed = instance_seed(family, n)
    if family == "dumbbell":
        return dumbbell_graph(n), 0
    if family == "planted":
        return planted_graph(n, seed), seed
    if family == "expander":
        return expander_graph(n), 0
    if family == "cycle-power":
        return cycle_power_graph(n), 0
    if family == "random-regular":
        return random_regular_graph(n, 4, seed), seed
    raise DomainError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
