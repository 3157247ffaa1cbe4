"""Vertex-capacitated max flow, s-t vertex cuts (Menger), path decomposition.

Vertex splitting: every vertex v becomes v_in -> v_out joined by an arc of
capacity cap(v); each edge becomes a pair of infinite-capacity arcs between
out- and in-nodes. Direct source-sink edges cannot be capped by any vertex,
so each such (parallel) edge contributes exactly one length-1 path unit.
Arc exploration order is ascending by neighbor id, making flows and path
sets identical across runs.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graph import DomainError, Graph

INF = float("inf")


class _Residual:
    """Paired-arc residual network; arc aid and aid^1 are twins."""

    def __init__(self, num_nodes: int):
        self.head: list[int] = []
        self.cap: list[float] = []
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]

    def add_arc(self, u: int, v: int, cap: float) -> int:
        aid = len(self.head)
        self.head.append(v)
        self.cap.append(cap)
        self.adj[u].append(aid)
        self.head.append(u)
        self.cap.append(0.0)
        self.adj[v].append(aid + 1)
        return aid

    def push(self, aid: int, amount: float) -> None:
        self.cap[aid] -= amount
        self.cap[aid ^ 1] += amount

    def flow_on(self, aid: int) -> float:
        # forward arcs start with zero reverse capacity, so the twin's
        # current capacity is exactly the flow pushed forward
        return self.cap[aid ^ 1]

    def sort_adjacency(self) -> None:
        for row in self.adj:
            row.sort(key=lambda aid: (self.head[aid], aid))


class FlowNetwork:
    """Vertex-capacitated s-t network over a Graph."""

    def __init__(self, base: Graph, vertex_capacity: dict[int, float], source: int, sink: int):
        if source == sink:
            raise DomainError("source and sink must differ")
        if not (0 <= source < base.n and 0 <= sink < base.n):
            raise DomainError("source or sink outside the graph")
        for v, cap in vertex_capacity.items():
            if cap != INF and cap < 1:
                raise DomainError(f"vertex capacity at {v} must be >= 1, got {cap}")
        self.base = base
        self.vertex_capacity = dict(vertex_capacity)
        self.source = source
        self.sink = sink
        self.direct_edges = sum(
            1 for u, v in base.edges if {u, v} == {source, sink}
        )
        self.net = _Residual(2 * base.n)
        self.split_arc: dict[int, int] = {}
        for v in range(base.n):
            cap = self.vertex_capacity.get(v, INF)
            if v in (source, sink):
                cap = INF
            self.split_arc[v] = self.net.add_arc(_in(v), _out(v), cap)
        self.edge_arcs: dict[tuple[int, int], int] = {}
        pairs = sorted(
            {
                (min(u, v), max(u, v))
                for u, v in base.edges
                if u != v and {u, v} != {source, sink}
            }
        )
        for u, v in pairs:
            # parallel edges are redundant under infinite edge capacity
            self.edge_arcs[(u, v)] = self.net.add_arc(_out(u), _in(v), INF)
            self.edge_arcs[(v, u)] = self.net.add_arc(_out(v), _in(u), INF)
        self.net.sort_adjacency()
        self.value = 0

    def flow_through(self, v: int) -> int:
        return int(round(self.net.flow_on(self.split_arc[v])))


def _in(v: int) -> int:
    return 2 * v


def _out(v: int) -> int:
    return 2 * v + 1


@dataclass(frozen=True)
class FlowResult:
    value: int
    paths: tuple[tuple[int, ...], ...]
    min_cut_vertices: frozenset[int] | None


def max_flow(network: FlowNetwork, bound: float = INF) -> FlowResult:
    """Route min(true max flow, bound) units; blocking-flow phases.

    Direct source-sink edges are consumed first, one unit each. When the
    result is short of the bound and no direct edge exists, the Menger
    certificate is read off residual reachability over the split nodes.
    """
    if bound < 0:
        raise DomainError("flow bound must be nonnegative")
    net = network.net
    s, t = _out(network.source), _in(network.sink)
    direct_used = int(min(network.direct_edges, bound))
    value = float(direct_used)
    while value < bound:
        level = _bfs_levels(net, s, t)
        if level[t] < 0:
            break
        iters = [0] * len(net.adj)
        while value < bound:
            pushed = _dfs_push(net, s, t, bound - value, level, iters)
            if pushed == 0:
                break
            value += pushed
    network.value = int(value)
    cut = None
    if value < bound and network.direct_edges == 0:
        cut = _residual_cut(network, s)
    paths = decompose_paths(network, direct_units=direct_used)
    return FlowResult(value=int(value), paths=paths, min_cut_vertices=cut)


def _bfs_levels(net: _Residual, s: int, t: int) -> list[int]:
    level = [-1] * len(net.adj)
    level[s] = 0
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for aid in net.adj[u]:
            v = net.head[aid]
            if net.cap[aid] > 0 and level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _dfs_push(net, u, t, limit, level, iters) -> float:
    if u == t:
        return limit
    while iters[u] < len(net.adj[u]):
        aid = net.adj[u][iters[u]]
        v = net.head[aid]
        if net.cap[aid] > 0 and level[v] == level[u] + 1:
            pushed = _dfs_push(net, v, t, min(limit, net.cap[aid]), level, iters)
            if pushed > 0:
                net.push(aid, pushed)
                return pushed
        iters[u] += 1
    return 0.0


def _residual_cut(network: FlowNetwork, s: int) -> frozenset[int]:
    net = network.net
    reach = [False] * len(net.adj)
    reach[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        for aid in net.adj[u]:
            v = net.head[aid]
            if net.cap[aid] > 0 and not reach[v]:
                reach[v] = True
                stack.append(v)
    cut = set()
    for v in range(network.base.n):
        if v in (network.source, network.sink):
            continue
        if reach[_in(v)] and not reach[_out(v)]:
            cut.add(v)
    return frozenset(cut)


def decompose_paths(network: FlowNetwork, direct_units: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Peel the current integral flow into source->sink vertex paths."""
    net = network.net
    if direct_units is None:
        direct_units = int(min(network.direct_edges, network.value))
    remaining = {}
    for aid in range(0, len(net.head), 2):
        f = net.flow_on(aid)
        if abs(f - round(f)) > 1e-9:
            raise DomainError("flow assignment is not integral")
        if round(f) > 0:
            remaining[aid] = int(round(f))
    s, t = _out(network.source), _in(network.sink)
    paths = [(network.source, network.sink)] * direct_units
    while True:
        node, trail, taken = s, [network.source], []
        while node != t:
            advanced = False
            for aid in net.adj[node]:
                if aid % 2 == 0 and remaining.get(aid, 0) > 0:
                    taken.append(aid)
                    node = net.head[aid]
                    if node % 2 == 0:
                        trail.append(node // 2)
                    advanced = True
                    break
            if not advanced:
                if len(trail) == 1 and not taken:
                    return tuple(paths)
                raise DomainError("flow decomposition stalled on an infeasible flow")
        for aid in taken:
            remaining[aid] -= 1
        paths.append(tuple(trail))


def residual_partition(network: FlowNetwork) -> tuple[set[int], set[int], set[int]]:
    """(L', S', R') over base vertices after a max-flow run: S' is the min
    vertex cut, L' the residual-reachable side."""
    net = network.net
    s = _out(network.source)
    reach = [False] * len(net.adj)
    reach[s] = True
    stack = [s]
    while stack:
        u = stack.pop()
        for aid in net.adj[u]:
            v = net.head[aid]
            if net.cap[aid] > 0 and not reach[v]:
                reach[v] = True
                stack.append(v)
    left, cut, right = set(), set(), set()
    for v in range(network.base.n):
        if reach[_in(v)] and not reach[_out(v)] and v not in (network.source, network.sink):
            cut.add(v)
        elif reach[_out(v)] or reach[_in(v)]:
            left.add(v)
        else:
            right.add(v)
    return left, cut, right


def st_vertex_connectivity(g: Graph, x: int, y: int, k: float):
    """Menger query for kappa_G(x, y) against threshold k.

    Returns ("cut", size, vertices) with a minimum (x,y)-vertex-cut of
    size < k when one exists, else ("certificate", value, None). Adjacent
    pairs have no vertex cut, certified with the kappa = n-1 convention.
    """
    if x == y:
        raise DomainError("st_vertex_connectivity needs distinct vertices")
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise DomainError("query vertex outside the graph")
    if any({u, v} == {x, y} for u, v in g.edges):
        return ("certificate", g.n - 1, None)
    caps = {v: 1.0 for v in range(g.n) if v not in (x, y)}
    network = FlowNetwork(g, caps, x, y)
    result = max_flow(network, bound=k)
    if result.value >= k:
        return ("certificate", result.value, None)
    assert result.min_cut_vertices is not None
    return ("cut", result.value, result.min_cut_vertices)
