"""Core graph types: multigraphs, cut metrics, separation triples, edge-list I/O.

Vertex ids are dense 0-based integers and every iteration order is fixed by
id, so all downstream algorithms are bit-reproducible.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

ABS_TOL = 1e-9


class DetcutError(Exception):
    """Base error; carries the CLI exit code."""

    exit_code = 1


class DomainError(DetcutError):
    """Invalid input or violated precondition."""

    exit_code = 2


class BudgetError(DetcutError):
    """Instance too large for an exhaustive oracle; never silently degraded."""

    exit_code = 3


class ParseError(DomainError):
    """Malformed graph file; message names the offending line."""


class Graph:
    """Immutable unweighted multigraph in compressed adjacency form.

    Parallel edges are separate records. A self-loop contributes 2 to the
    degree of its endpoint and never to any boundary.
    """

    __slots__ = ("n", "edges", "adjacency", "degree")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], allow_loops: bool = False):
        if n < 0:
            raise DomainError(f"vertex count must be nonnegative, got {n}")
        edges = tuple((int(u), int(v)) for u, v in edges)
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        degree = [0] * n
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has endpoint outside [0, {n})")
            if u == v and not allow_loops:
                raise DomainError(f"self-loop at vertex {u} requires allow_loops")
            adjacency[u].append((v, eid))
            degree[u] += 1
            if u == v:
                degree[u] += 1
            else:
                adjacency[v].append((u, eid))
                degree[v] += 1
        for row in adjacency:
            row.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(row) for row in adjacency))
        object.__setattr__(self, "degree", tuple(degree))

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adjacency[v]]

    def volume(self, vertices: Iterable[int]) -> int:
        return sum(self.degree[v] for v in vertices)

    @property
    def total_volume(self) -> int:
        return 2 * self.m

    def boundary_size(self, members: frozenset[int] | set[int]) -> int:
        count = 0
        for u, v in self.edges:
            if u != v and ((u in members) != (v in members)):
                count += 1
        return count

    def has_loops(self) -> bool:
        return any(u == v for u, v in self.edges)

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return len(self.component_of(0)) == self.n

    def component_of(self, start: int) -> set[int]:
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u, _ in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return seen

    def components(self, removed: frozenset[int] | set[int] = frozenset()) -> list[list[int]]:
        """Connected components of G - removed, each sorted, ordered by minimum id."""
        seen = set(removed)
        out = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                v = stack.pop()
                for u, _ in self.adjacency[v]:
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        stack.append(u)
            out.append(sorted(comp))
        return out

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on `vertices` (id order preserved) plus old->new map."""
        order = sorted(set(vertices))
        remap = {v: i for i, v in enumerate(order)}
        sub = [
            (remap[u], remap[v])
            for u, v in self.edges
            if u in remap and v in remap
        ]
        return Graph(len(order), sub, allow_loops=True), remap

    def without_loops(self) -> "Graph":
        return Graph(self.n, [e for e in self.edges if e[0] != e[1]])

    def fingerprint(self) -> str:
        payload = f"{self.n} {self.m} " + " ".join(
            f"{min(u, v)}-{max(u, v)}" for u, v in sorted(tuple(sorted(e)) for e in self.edges)
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class WeightedGraph:
    """Graph topology plus nonnegative float edge weights (for sparsifiers)."""

    __slots__ = ("n", "edges", "weight", "adjacency", "degree")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]], weight: Iterable[float]):
        edges = tuple((int(u), int(v)) for u, v in edges)
        weight = tuple(float(w) for w in weight)
        if len(weight) != len(edges):
            raise DomainError("weight list length must match edge count")
        for w in weight:
            if not (w >= 0.0) or w != w or w == float("inf"):
                raise DomainError(f"edge weights must be finite and >= 0, got {w}")
        adjacency: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        degree = [0] * n
        for eid, (u, v) in enumerate(edges):
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) has endpoint outside [0, {n})")
            adjacency[u].append((v, eid))
            degree[u] += 2 if u == v else 1
            if u != v:
                adjacency[v].append((u, eid))
                degree[v] += 1
        for row in adjacency:
            row.sort()
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "adjacency", tuple(tuple(row) for row in adjacency))
        object.__setattr__(self, "degree", tuple(degree))

    def __setattr__(self, name, value):
        raise AttributeError("WeightedGraph is immutable")

    @property
    def m(self) -> int:
        return len(self.edges)

    def cut_weight(self, members: frozenset[int] | set[int]) -> float:
        total = 0.0
        for eid, (u, v) in enumerate(self.edges):
            if u != v and ((u in members) != (v in members)):
                total += self.weight[eid]
        return total

    def weighted_degree(self, v: int) -> float:
        total = 0.0
        for u, eid in self.adjacency[v]:
            total += self.weight[eid] * (2 if u == v else 1)
        return total

    def is_connected(self) -> bool:
        return self.support().is_connected()

    def support(self) -> Graph:
        return Graph(self.n, self.edges, allow_loops=True)

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={self.m})"


def as_weighted(g: Graph) -> WeightedGraph:
    return WeightedGraph(g.n, g.edges, [1.0] * g.m)


@dataclass(frozen=True)
class Cut:
    """A vertex subset with cached boundary count, volumes, and ratios."""

    members: frozenset[int]
    boundary: int
    volume_in: int
    volume_out: int

    @staticmethod
    def from_members(g: Graph, members: Iterable[int]) -> "Cut":
        members = frozenset(members)
        if not members or len(members) >= g.n:
            raise DomainError("cut side must be a nonempty proper subset")
        if any(v < 0 or v >= g.n for v in members):
            raise DomainError("cut contains a vertex outside the graph")
        vol_in = g.volume(members)
        return Cut(
            members=members,
            boundary=g.boundary_size(members),
            volume_in=vol_in,
            volume_out=g.total_volume - vol_in,
        )

    @property
    def conductance(self) -> float:
        return self.boundary / min(self.volume_in, self.volume_out)

    def sparsity(self, n: int) -> float:
        return self.boundary / min(len(self.members), n - len(self.members))


def conductance(g: Graph, members: Iterable[int]) -> float:
    """|E(S, V-S)| / min(vol(S), vol(V-S)) for a nonempty proper subset S."""
    return Cut.from_members(g, members).conductance


def sparsity(g: Graph, members: Iterable[int]) -> float:
    """|E(S, V-S)| / min(|S|, n-|S|)."""
    cut = Cut.from_members(g, members)
    return cut.sparsity(g.n)


@dataclass(frozen=True)
class SeparationTriple:
    """Ordered partition (L, S, R) of V with no L-R edge and L, R nonempty."""

    left: frozenset[int]
    separator: frozenset[int]
    right: frozenset[int]

    @property
    def expansion(self) -> float:
        return len(self.separator) / (min(len(self.left), len(self.right)) + len(self.separator))

    def swapped(self) -> "SeparationTriple":
        return SeparationTriple(self.right, self.separator, self.left)


def validate_triple(
    g: Graph, left: Iterable[int], separator: Iterable[int], right: Iterable[int]
) -> SeparationTriple:
    """Build a SeparationTriple, naming the violated invariant on failure."""
    left, separator, right = frozenset(left), frozenset(separator), frozenset(right)
    if not left:
        raise DomainError("separation triple has empty L")
    if not right:
        raise DomainError("separation triple has empty R")
    if left & separator or left & right or separator & right:
        raise DomainError("separation triple parts overlap")
    union = left | separator | right
    if len(union) != g.n or any(v < 0 or v >= g.n for v in union):
        raise DomainError("separation triple does not partition the vertex set")
    for u, v in g.edges:
        if (u in left and v in right) or (v in left and u in right):
            raise DomainError(f"edge ({min(u, v)}, {max(u, v)}) joins L and R")
    return SeparationTriple(left, separator, right)


def triple_expansion(triple: SeparationTriple) -> float:
    """h(L,S,R) = |S| / (min(|L|,|R|) + |S|)."""
    if not triple.left or not triple.right:
        raise DomainError("separation triple must have nonempty L and R")
    return triple.expansion


def require_connected(g: Graph, where: str) -> None:
    if not g.is_connected():
        raise DomainError(f"{where} requires a connected graph")


def load_graph(path: str, weighted: bool = False, allow_loops: bool = False):
    """Parse the edge-list text format; errors name the offending line."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    return parse_graph(text, weighted=weighted, allow_loops=allow_loops)


def parse_graph(text: str, weighted: bool = False, allow_loops: bool = False):
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    weights: list[float] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 2:
                raise ParseError(f"expected header '<n> <m>' at line {lineno}")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"non-integer header at line {lineno}") from None
            if n < 0 or m < 0:
                raise ParseError(f"negative header value at line {lineno}")
            header = (n, m)
            continue
        n, m = header
        want = 3 if weighted else 2
        if len(parts) != want:
            raise ParseError(f"expected {want} fields at line {lineno}, got {len(parts)}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"non-integer endpoint at line {lineno}") from None
        for endpoint in (u, v):
            if endpoint < 0:
                raise ParseError(f"negative endpoint {endpoint} at line {lineno}")
            if endpoint >= n:
                raise ParseError(f"endpoint {endpoint} >= n={n} at line {lineno}")
        if u == v and not allow_loops:
            raise ParseError(f"self-loop at line {lineno} (pass --allow-loops to accept)")
        if weighted:
            try:
                w = float(parts[2])
            except ValueError:
                raise ParseError(f"non-numeric weight at line {lineno}") from None
            weights.append(w)
        edges.append((u, v))
    if header is None:
        raise ParseError("missing header line '<n> <m>'")
    n, m = header
    if len(edges) != m:
        raise ParseError(f"header promises {m} edges but file lists {len(edges)}")
    if weighted:
        return WeightedGraph(n, edges, weights)
    return Graph(n, edges, allow_loops=allow_loops)


def dump_graph(g) -> str:
    """Serialize a Graph or WeightedGraph back to the edge-list format."""
    lines = [f"{g.n} {g.m}"]
    if isinstance(g, WeightedGraph):
        for (u, v), w in zip(g.edges, g.weight):
            lines.append(f"{u} {v} {w!r}")
    else:
        for u, v in g.edges:
            lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"
