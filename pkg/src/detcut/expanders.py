"""Explicit expanders, expander split, and deterministic sparsification.

The explicit construction is the Margulis/Gabber-Galil torus graph, shrunk
to an arbitrary vertex count by contracting disjoint pairs. The sparsifier
decomposes a graph into certified expander pieces via a pluggable
balanced-cut routine and replaces only pieces that are denser than the
replacement; every preserved edge keeps its exact weight, so the measured
cut-approximation factor stays small on benign inputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .graph import Cut, DomainError, Graph, WeightedGraph

# roundable-cut threshold and lifting constant for expander-split cuts;
# the underlying constants are otherwise unspecified
LIFT_EPSILON = 1.0 / 64.0
LIFT_FACTOR = 32.0

SPARSIFY_PHI_NUMERATOR = 0.01
SPARSIFY_EDGE_CONSTANT = 16.0

# a balanced-cut routine: (Graph, phi) -> ("certificate", phi) | ("cut", frozenset)
BalCut = Callable[[Graph, float], tuple]


def gabber_galil(n: int) -> Graph:
    """Constant-degree explicit expander on n vertices.

    For n >= 10: the 8-regular torus multigraph on Z_k x Z_k (k minimal with
    n <= k^2), with (x, y) adjacent to (x +- 2y, y), (x +- (2y+1), y),
    (x, y +- 2x), (x, y +- (2x+1)); multiedges and self-loops kept; then
    disjoint id pairs are contracted down to n vertices, leaving every
    degree in [8, 16]. For n < 10: the complete graph.
    """
    if n <= 0:
        raise DomainError(f"expander size must be positive, got {n}")
    if n < 10:
        return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    k = math.isqrt(n - 1) + 1
    assert (k - 1) ** 2 < n <= k * k

    def vid(x: int, y: int) -> int:
        return (x % k) * k + (y % k)

    edges = []
    for x in range(k):
        for y in range(k):
            u = vid(x, y)
            # one forward generator per inverse pair keeps the graph 8-regular
            edges.append((u, vid(x + 2 * y, y)))
            edges.append((u, vid(x + 2 * y + 1, y)))
            edges.append((u, vid(x, y + 2 * x)))
            edges.append((u, vid(x, y + 2 * x + 1)))
    pairs = k * k - n
    remap = [0] * (k * k)
    for v in range(k * k):
        if v < 2 * pairs:
            remap[v] = v // 2
        else:
            remap[v] = v - pairs
    return Graph(n, [(remap[u], remap[v]) for u, v in edges], allow_loops=True)


def torus_neighbors(k: int, x: int, y: int) -> list[tuple[int, int]]:
    """The eight adjacent vertices of (x, y) in the uncontracted torus graph."""
    out = []
    for dx in (2 * y, -2 * y, 2 * y + 1, -(2 * y + 1)):
        out.append(((x + dx) % k, y))
    for dy in (2 * x, -2 * x, 2 * x + 1, -(2 * x + 1)):
        out.append((x, (y + dy) % k))
    return out


@dataclass(frozen=True)
class ExpanderSplitMap:
    """Expander split G' of G plus the wiring needed to lift cuts back."""

    split_graph: Graph
    super_node: tuple[int, ...]  # split vertex -> original vertex
    port: dict[tuple[int, int], int]  # (edge id, endpoint slot 0/1) -> split vertex
    original: Graph

    def super_members(self, u: int) -> list[int]:
        return [w for w, owner in enumerate(self.super_node) if owner == u]


def expander_split(g: Graph) -> ExpanderSplitMap:
    """Replace every vertex u by a degree(u)-vertex expander, wiring the i-th
    incident edge of u to the i-th expander node."""
    if any(d == 0 for d in g.degree):
        raise DomainError("expander_split requires no isolated vertices")
    offsets = []
    total = 0
    for v in range(g.n):
        offsets.append(total)
        total += g.degree[v]
    owner = [0] * total
    for v in range(g.n):
        for slot in range(g.degree[v]):
            owner[offsets[v] + slot] = v

    edges: list[tuple[int, int]] = []
    for u in range(g.n):
        inner = gabber_galil(g.degree[u])
        base = offsets[u]
        edges.extend((base + a, base + b) for a, b in inner.edges)

    # assign ports: the i-th edge slot of u is claimed in edge-id order,
    # self-loops claiming two consecutive slots
    next_slot = [0] * g.n
    port: dict[tuple[int, int], int] = {}
    for eid, (u, v) in enumerate(g.edges):
        pu = offsets[u] + next_slot[u]
        next_slot[u] += 1
        pv = offsets[v] + next_slot[v]
        next_slot[v] += 1
        port[(eid, 0)] = pu
        port[(eid, 1)] = pv
        edges.append((pu, pv))
    split = Graph(total, edges, allow_loops=True)
    return ExpanderSplitMap(split, tuple(owner), port, g)


def round_split_cut(mapping: ExpanderSplitMap, side: frozenset[int]) -> frozenset[int]:
    """Round a split-graph cut to a super-node-respecting original cut.

    Each super-node goes wholly to the side holding at least two thirds of
    its split volume; returns the chosen original vertices (possibly empty
    or full when the input cut is bad).
    """
    g = mapping.original
    split = mapping.split_graph
    vol_in = [0] * g.n
    vol_all = [0] * g.n
    for w, owner in enumerate(mapping.super_node):
        vol_all[owner] += split.degree[w]
        if w in side:
            vol_in[owner] += split.degree[w]
    return frozenset(
        u for u in range(g.n) if vol_in[u] > 2 * (vol_all[u] - vol_in[u])
    )


def lift_cut(mapping: ExpanderSplitMap, side) -> Cut:
    """Lift a low-conductance split-graph cut back to the original graph."""
    side = frozenset(side)
    split = mapping.split_graph
    if not side or len(side) >= split.n:
        raise DomainError("split cut must be a nonempty proper subset")
    phi = Cut.from_members(split, side).conductance
    if phi > LIFT_EPSILON:
        raise DomainError(
            f"cut too expanding to round: conductance {phi:.6f} > {LIFT_EPSILON}"
        )
    members = round_split_cut(mapping, side)
    if not members or len(members) >= mapping.original.n:
        raise DomainError("cut too expanding to round: rounding collapsed a side")
    return Cut.from_members(mapping.original, members)


@dataclass
class SparsifyReport:
    """Bookkeeping from a sparsifier run (reported, never asserted)."""

    pieces: int = 0
    replaced: int = 0
    kept_verbatim_edges: int = 0
    rounds: int = 0
    trace_kappa: bool = False  # measure per-call ratios on small inputs
    kappa_trace: list = field(default_factory=list)

    def record_kappa(self, before: "WeightedGraph", after: "WeightedGraph") -> None:
        if not self.trace_kappa or before.n > 12 or before.n < 2:
            return
        from .oracle import kappa_measured

        self.kappa_trace.append(kappa_measured(before, after))


def _decompose_into_expanders(
    g: Graph, balcut: BalCut, phi: float
) -> list[list[int]]:
    """Split vertices into pieces, each certified by balcut at phi or too
    small to cut. Pieces are reported as sorted original-id lists."""
    pieces: list[list[int]] = []
    stack: list[list[int]] = [sorted(c) for c in g.components()]
    while stack:
        vertices = stack.pop()
        if len(vertices) <= 2:
            pieces.append(vertices)
            continue
        sub, remap = g.induced(vertices)
        sub = Graph(sub.n, [e for e in sub.edges if e[0] != e[1]])
        if sub.m == 0 or not sub.is_connected():
            for comp in sub.components():
                stack.append(sorted(vertices[i] for i in comp))
            continue
        outcome = balcut(sub, phi)
        if outcome[0] == "certificate":
            pieces.append(vertices)
            continue
        side = outcome[1]
        inv = {new: old for old, new in remap.items()}
        left = sorted(inv[i] for i in side)
        right = sorted(inv[i] for i in range(sub.n) if i not in side)
        stack.append(left)
        stack.append(right)
    return sorted(pieces)


def deterministic_sparsify(
    g: WeightedGraph, balcut: BalCut, report: SparsifyReport | None = None
) -> WeightedGraph:
    """Cut-approximating sparsifier built from expander decomposition.

    Weight classes are handled separately (factor-2 buckets); inside each
    bucket the unweighted support is decomposed into certified expander
    pieces. A piece denser than 8|X| edges is replaced by an explicit
    expander with uniform edge weight vol(X) * phi_piece / (8 |X|); all
    other edges (sparse pieces and inter-piece edges) are kept verbatim,
    iterating on the leftovers.
    """
    if not g.is_connected():
        raise DomainError("deterministic_sparsify requires a connected graph")
    report = report if report is not None else SparsifyReport()
    if g.n <= 1:
        return WeightedGraph(g.n, [], [])
    phi_dec = SPARSIFY_PHI_NUMERATOR / max(1.0, math.log2(g.n))

    out_edges: list[tuple[int, int]] = []
    out_weights: list[float] = []

    live = [(u, v, w) for (u, v), w in zip(g.edges, g.weight) if u != v and w > 0.0]
    positive = [w for _, _, w in live]
    if not positive:
        return WeightedGraph(g.n, [], [])
    w_min = min(positive)
    buckets: dict[int, list[tuple[int, int, float]]] = {}
    for u, v, w in live:
        buckets.setdefault(int(math.floor(math.log2(w / w_min))), []).append((u, v, w))

    max_rounds = 2 * max(1, math.ceil(math.log2(g.m + 2)))
    for key in sorted(buckets):
        work = buckets[key]
        rounds = 0
        while work and rounds < max_rounds:
            rounds += 1
            report.rounds += 1
            sub = Graph(g.n, [(u, v) for u, v, _ in work])
            pieces = _decompose_into_expanders(sub, balcut, phi_dec)
            piece_of = {}
            for pid, piece in enumerate(pieces):
                for v in piece:
                    piece_of[v] = pid
            internal: dict[int, list[tuple[int, int, float]]] = {}
            leftover: list[tuple[int, int, float]] = []
            for u, v, w in work:
                if piece_of[u] == piece_of[v]:
                    internal.setdefault(piece_of[u], []).append((u, v, w))
                else:
                    leftover.append((u, v, w))
            for pid, piece in enumerate(pieces):
                inside = internal.get(pid, [])
                if not inside:
                    continue
                report.pieces += 1
                if len(inside) > 8 * len(piece):
                    report.replaced += 1
                    volume = sum(w for u, v, w in inside) * 2.0
                    uniform = volume * phi_dec / (8.0 * len(piece))
                    expander = gabber_galil(len(piece))
                    for a, b in expander.edges:
                        if a == b:
                            continue
                        out_edges.append((piece[a], piece[b]))
                        out_weights.append(uniform)
                else:
                    for u, v, w in inside:
                        out_edges.append((u, v))
                        out_weights.append(w)
                    report.kept_verbatim_edges += len(inside)
            work = leftover
        for u, v, w in work:  # round cap hit: keep the stragglers exactly
            out_edges.append((u, v))
            out_weights.append(w)
            report.kept_verbatim_edges += 1
    result = WeightedGraph(g.n, out_edges, out_weights)
    report.record_kappa(g, result)
    return result


@dataclass
class KappaApproxReport:
    """How well a sparsifier's cuts track the original's.

    kappa_measured is the worst two-sided cut ratio: exhaustive below 15
    vertices, over a fixed pseudo-random cut sample above.
    """

    original: WeightedGraph
    sparsifier: WeightedGraph
    kappa_measured: float
    mode: str
    max_ratio: float
    min_ratio: float

    @staticmethod
    def measure(original: WeightedGraph, sparsifier: WeightedGraph, samples: int = 512) -> "KappaApproxReport":
        import random as _random

        from .oracle import cut_ratio_extremes

        if original.n <= 14:
            hi, lo = cut_ratio_extremes(original, sparsifier)
            mode = "exhaustive"
        else:
            rng = _random.Random(original.n * 7919 + original.m)
            hi, lo = 0.0, math.inf
            for _ in range(samples):
                side = frozenset(v for v in range(original.n) if rng.random() < 0.5)
                if not side or len(side) >= original.n:
                    continue
                wg = original.cut_weight(side)
                wh = sparsifier.cut_weight(side)
                if wg <= 0 or wh <= 0:
                    continue
                ratio = wh / wg
                hi, lo = max(hi, ratio), min(lo, ratio)
            mode = "sampled"
        kappa = max(hi, 1.0 / lo) if 0 < lo < math.inf else math.inf
        return KappaApproxReport(original, sparsifier, kappa, mode, hi, lo if lo < math.inf else 0.0)


def default_branching(n: int) -> int:
    return max(2, math.ceil(3 * n ** (1.0 / 3.0)))


def recursive_sparsify(
    g: WeightedGraph,
    balcut: BalCut,
    b: int | None = None,
    report: SparsifyReport | None = None,
) -> WeightedGraph:
    """Branching sparsifier: split V into b near-equal id blocks, recurse on
    the pair subgraphs, then sparsify the recombined sum.

    Crossing edges of (V_i, V_j) belong to that pair; edges inside V_i go to
    the pair (i, smallest j != i), so the subgraph edge sets partition E(G)
    exactly. b = 2 yields a single subgraph equal to G, which is sparsified
    directly.
    """
    if b is None:
        b = default_branching(g.n)
    if b < 2:
        raise DomainError(f"branching factor must be >= 2, got {b}")
    report = report if report is not None else SparsifyReport()
    if g.m <= b * g.n or b == 2 or g.n < b:
        return deterministic_sparsify(g, balcut, report)

    block = (g.n + b - 1) // b
    part = [min(v // block, b - 1) for v in range(g.n)]
    groups: dict[tuple[int, int], list[tuple[int, int, float]]] = {}
    for (u, v), w in zip(g.edges, g.weight):
        pu, pv = part[u], part[v]
        if pu == pv:
            other = 0 if pu != 0 else 1
            key = (min(pu, other), max(pu, other))
        else:
            key = (min(pu, pv), max(pu, pv))
        groups.setdefault(key, []).append((u, v, w))

    summed: dict[tuple[int, int], float] = {}
    for key in sorted(groups):
        bunch = groups[key]
        vertices = sorted({x for u, v, _ in bunch for x in (u, v)})
        remap = {v: i for i, v in enumerate(vertices)}
        sub = WeightedGraph(
            len(vertices),
            [(remap[u], remap[v]) for u, v, _ in bunch],
            [w for _, _, w in bunch],
        )
        for comp in sub.support().components():
            local = {v: i for i, v in enumerate(comp)}
            eids = [i for i, (u, _) in enumerate(sub.edges) if u in local]
            piece = WeightedGraph(
                len(comp),
                [(local[sub.edges[i][0]], local[sub.edges[i][1]]) for i in eids],
                [sub.weight[i] for i in eids],
            )
            sparse = recursive_sparsify(piece, balcut, b, report)
            for (a, c), w in zip(sparse.edges, sparse.weight):
                u0, v0 = vertices[comp[a]], vertices[comp[c]]
                if u0 == v0:
                    continue
                pair = (min(u0, v0), max(u0, v0))
                summed[pair] = summed.get(pair, 0.0) + w

    total = WeightedGraph(
        g.n, sorted(summed), [summed[k] for k in sorted(summed)]
    )
    if not total.is_connected():
        # recombination must stay connected whenever the input was
        raise DomainError("recursive_sparsify lost connectivity; sparsifier bug")
    return deterministic_sparsify(total, balcut, report)


def sparsifier_edge_budget(n: int) -> float:
    return SPARSIFY_EDGE_CONSTANT * max(1, n) * max(1.0, math.log2(max(2, n))) ** 2
