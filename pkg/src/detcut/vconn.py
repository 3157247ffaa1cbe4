"""k-vertex-connectivity by divide and conquer.

The driver sparsifies with Nagamochi-Ibaraki forests (cuts below k survive
both ways), asks the cut-matching game for a balanced separation triple,
and either recurses on the two side graphs (R or L replaced by a k-clique
stitched to S) or, when the graph has no balanced triple, sweeps a local
cut search from every vertex. Cuts found in side graphs are normalized so
the clique sits wholly inside one side, which makes them cuts of the
original graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .cutmatching import approx_vertex_expansion
from .flow import st_vertex_connectivity
from .graph import DomainError, Graph, SeparationTriple, require_connected

DEFAULT_EXPONENT = 0.25


@dataclass(frozen=True)
class SparseCertificate:
    """Nagamochi-Ibaraki forest decomposition; H_k keeps all cuts below k."""

    forests: tuple[tuple[int, ...], ...]  # edge ids of G per forest
    union_graph: Graph
    k: int


def nagamochi_ibaraki(g: Graph, k: int) -> SparseCertificate:
    """Maximum-adjacency forest partition; forest i collects the i-th
    parallel connection discovered for each vertex."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    rank = [0] * g.n
    scanned = [False] * g.n
    forest_of: dict[int, int] = {}
    for _ in range(g.n):
        v = max(
            (u for u in range(g.n) if not scanned[u]),
            key=lambda u: (rank[u], -u),
        )
        scanned[v] = True
        for u, eid in g.adjacency[v]:
            if scanned[u] or u == v or eid in forest_of:
                continue
            forest_of[eid] = rank[u] + 1
            rank[u] += 1
    count = max(forest_of.values(), default=0)
    forests = [[] for _ in range(count)]
    for eid, label in sorted(forest_of.items()):
        forests[label - 1].append(eid)
    kept = sorted(eid for eid, label in forest_of.items() if label <= k)
    union = Graph(g.n, [g.edges[e] for e in kept])
    return SparseCertificate(
        forests=tuple(tuple(f) for f in forests[:k]),
        union_graph=union,
        k=k,
    )


@dataclass(frozen=True)
class SideGraph:
    """H_L or H_R: one side plus S, with the far side contracted to a clique."""

    graph: Graph
    side: str  # "L" | "R"
    clique: tuple[int, ...]  # new-vertex ids of the k-clique
    boundary: tuple[int, ...]  # new ids of S
    to_original: tuple[int, ...]  # new id -> original id (clique ids map to -1)


def _build_side(g: Graph, keep: list[int], sep: list[int], k: int, tag: str) -> SideGraph:
    vertices = sorted(set(keep) | set(sep))
    remap = {v: i for i, v in enumerate(vertices)}
    base = len(vertices)
    edges = [
        (remap[u], remap[v])
        for u, v in g.edges
        if u in remap and v in remap
    ]
    clique = list(range(base, base + k))
    for i in clique:
        for jj in clique:
            if i < jj:
                edges.append((i, jj))
    for s in sep:
        for i in clique:
            edges.append((remap[s], i))
    graph = Graph(base + k, edges)
    to_original = [vertices[i] for i in range(base)] + [-1] * k
    return SideGraph(
        graph=graph,
        side=tag,
        clique=tuple(clique),
        boundary=tuple(sorted(remap[s] for s in sep)),
        to_original=tuple(to_original),
    )


def build_side_graphs(g: Graph, triple: SeparationTriple, k: int) -> tuple[SideGraph, SideGraph]:
    """H_L and H_R with a fresh k-clique biclique-stitched to S."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if not triple.left or not triple.right:
        raise DomainError("side graphs need a valid separation triple")
    left = sorted(triple.left)
    right = sorted(triple.right)
    sep = sorted(triple.separator)
    return (
        _build_side(g, left, sep, k, "L"),
        _build_side(g, right, sep, k, "R"),
    )


def normalize_side_cut(side: SideGraph, cut: frozenset[int]) -> frozenset[int]:
    """Move the clique wholly out of the cut; the remainder cuts the
    original graph (clique vertices never appear in the result)."""
    clique = set(side.clique)
    if clique <= cut:
        raise AssertionError("side-graph cut may never contain the whole clique")
    trimmed = frozenset(v for v in cut if v not in clique)
    if not trimmed:
        raise AssertionError("side-graph cut collapsed to clique vertices only")
    comps = side.graph.components(trimmed)
    clique_comp = next(i for i, c in enumerate(comps) if clique & set(c))
    for i, c in enumerate(comps):
        if clique & set(c) and i != clique_comp:
            raise AssertionError("clique split across components after trimming")
    return frozenset(side.to_original[v] for v in trimmed)


@dataclass
class LocalCut:
    cut: frozenset[int]
    inside: frozenset[int]  # the L side containing the seed


def local_vc(g: Graph, x: int, nu: float, k: int) -> LocalCut | None:
    """Local cut search around x.

    Runs k+1 budgeted DFS augmentation passes on the vertex-split residual
    network rooted at x. A pass that exhausts its edge-visit budget
    8 nu (k+1) "escapes" (its unit anchors far from x); a stuck pass stops
    with the residual frontier as a vertex cut of size below the
    already-escaped count. All passes escaping certifies that no triple
    with x inside, volume at most nu, and separator of size <= k exists.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if min(g.degree) < k:
        raise DomainError(
            f"local_vc needs minimum degree >= k, got {min(g.degree)} < {k}"
        )
    if not (0 <= x < g.n):
        raise DomainError("seed vertex outside the graph")
    budget = 8.0 * nu * (k + 1)
    n = g.n
    if budget >= 4.0 * g.m + 2.0 * n:
        # the budget covers the whole residual network, so locality buys
        # nothing: answer exactly with bounded Menger queries from x
        neighborhood = set(g.neighbors(x)) | {x}
        for y in range(n):
            if y in neighborhood:
                continue
            kind, value, cut = st_vertex_connectivity(g, x, y, k + 1)
            if kind == "cut":
                comps = g.components(cut)
                inside = next(set(c) for c in comps if x in c)
                return LocalCut(cut=cut, inside=frozenset(inside))
        return None

    # split arcs: in(v) = 2v -> out(v) = 2v+1 with capacity 1 (except x);
    # edges as infinite pairs; escaped units absorb at a virtual sink
    head: list[int] = []
    cap: list[float] = []
    adj: list[list[int]] = [[] for _ in range(2 * n + 1)]
    sink = 2 * n

    def add_arc(a: int, b: int, c: float) -> int:
        aid = len(head)
        head.append(b)
        cap.append(c)
        adj[a].append(aid)
        head.append(a)
        cap.append(0.0)
        adj[b].append(aid + 1)
        return aid

    split_arc = {}
    for v in range(n):
        split_arc[v] = add_arc(2 * v, 2 * v + 1, math.inf if v == x else 1.0)
    seen_pairs = set()
    for u, v in g.edges:
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key in seen_pairs:
            continue
        seen_pairs.add(key)
        add_arc(2 * u + 1, 2 * v, math.inf)
        add_arc(2 * v + 1, 2 * u, math.inf)
    for row in adj:
        row.sort(key=lambda aid: (head[aid], aid))

    source = 2 * x + 1
    escaped = 0
    for _ in range(k + 1):
        visits = 0
        stack: list[tuple[int, int]] = [(source, 0)]
        path_arcs: list[int] = []
        visited = {source}
        anchored = False
        while stack:
            node, ptr = stack[-1]
            if visits > budget:
                # escape: absorb one unit here and lock it at the sink
                absorb = add_arc(node, sink, 1.0)
                for aid in path_arcs + [absorb]:
                    cap[aid] -= 1.0
                    cap[aid ^ 1] += 1.0
                escaped += 1
                anchored = True
                break
            if ptr >= len(adj[node]):
                stack.pop()
                if path_arcs:
                    path_arcs.pop()
                continue
            stack[-1] = (node, ptr + 1)
            aid = adj[node][ptr]
            visits += 1
            nxt = head[aid]
            if cap[aid] <= 0 or nxt in visited or nxt == sink:
                continue
            visited.add(nxt)
            stack.append((nxt, 0))
            path_arcs.append(aid)
        if not anchored:
            # stuck: residual frontier across split arcs is the cut
            reach = visited
            cut = set()
            for v in range(n):
                if v == x:
                    continue
                if 2 * v in reach and 2 * v + 1 not in reach:
                    cut.add(v)
            inside = {x} | {
                v for v in range(n) if 2 * v + 1 in reach and v not in cut
            }
            if not cut or len(cut) > k:
                return None
            comps = g.components(frozenset(cut))
            if len(comps) < 2:
                return None
            return LocalCut(cut=frozenset(cut), inside=frozenset(inside - cut))
    return None


def split_vc(g: Graph, sep, k: int) -> frozenset[int] | None:
    """Pairwise k-connectivity check inside a separator.

    First tests all pairs of a fixed size-k subset X; then attaches a super
    source to X and tests it against every separator vertex. Returns an
    (x,y)-vertex-cut of size below k for some pair in S, else None.
    """
    sep = sorted(set(sep))
    if len(sep) < k:
        raise DomainError(f"split_vc needs |S| >= k, got {len(sep)} < {k}")
    x_set = sep[:k]
    for i, x in enumerate(x_set):
        for y in x_set[i + 1 :]:
            kind, value, cut = st_vertex_connectivity(g, x, y, k)
            if kind == "cut":
                return cut
    s_id = g.n
    edges = list(g.edges) + [(s_id, v) for v in x_set]
    g_prime = Graph(g.n + 1, edges)
    for v in sep:
        kind, value, cut = st_vertex_connectivity(g_prime, s_id, v, k)
        if kind == "cut":
            assert s_id not in cut
            return cut
    return None


@dataclass
class VCReport:
    """Trace of a main_vc run (which branches fired, recursion shape)."""

    branches: list[str] = field(default_factory=list)
    triples: list[float] = field(default_factory=list)


def main_vc(
    g: Graph,
    k: int,
    a: float = DEFAULT_EXPONENT,
    base_threshold: int | None = None,
    inner: Callable | None = None,
    report: VCReport | None = None,
):
    """A vertex cut of size < k, or None certifying k-connectivity."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k >= g.n:
        raise DomainError(f"k must be below the vertex count, got k={k}, n={g.n}")
    if not (0.0 < a < 0.5):
        raise DomainError(f"exponent a must lie in (0, 1/2), got {a}")
    require_connected(g, "main_vc")
    report = report if report is not None else VCReport()
    if base_threshold is None:
        base_threshold = max(64 * math.ceil(k ** (2.0 / a)), 32)
    sparse = nagamochi_ibaraki(g.without_loops(), k).union_graph
    cut = _main_vc(sparse, k, a, base_threshold, inner, report, depth=0)
    if cut is None:
        return None
    cut = frozenset(cut)
    assert len(cut) < k
    if len(g.components(cut)) < 2:
        raise AssertionError("main_vc produced a non-disconnecting cut")
    return cut


def _brute_vc(g: Graph, k: int) -> frozenset[int] | None:
    """Base case: bounded all-pairs flow over non-adjacent pairs."""
    adjacent = {tuple(sorted(e)) for e in g.edges}
    best: frozenset[int] | None = None
    for x in range(g.n):
        for y in range(x + 1, g.n):
            if (x, y) in adjacent:
                continue
            bound = k if best is None else len(best)
            kind, value, cut = st_vertex_connectivity(g, x, y, bound)
            if kind == "cut" and (best is None or len(cut) < len(best)):
                best = cut
    return best


def _main_vc(g, k, a, base_threshold, inner, report, depth):
    n = g.n
    if k >= n:
        # clique-sized remnants cannot contain a cut below k
        report.branches.append(f"{depth}:degenerate")
        return None
    if n <= base_threshold:
        report.branches.append(f"{depth}:base")
        return _brute_vc(g, k)
    eta = 1.0 / (2.0 * n ** (1.0 - a))

    if min(g.degree) < k:
        u_min = min(range(n), key=lambda v: (g.degree[v], v))
        neighbors = frozenset(g.neighbors(u_min)) - {u_min}
        report.branches.append(f"{depth}:min-degree")
        return neighbors

    outcome = approx_vertex_expansion(g, eta, inner=inner)
    balanced_floor = n ** (1.0 - a) / 4.0
    triple: SeparationTriple | None = None
    if isinstance(outcome, SeparationTriple):
        small = min(len(outcome.left), len(outcome.right))
        if small >= balanced_floor and small > k:
            triple = outcome
        report.triples.append(outcome.expansion)

    if triple is None:
        report.branches.append(f"{depth}:local")
        if k == 1:
            return None  # connected graph: no empty cut exists
        nu = 6.0 * k * k / eta
        for x in range(n):
            found = local_vc(g, x, nu, k - 1)
            if found is not None:
                return found.cut
        return None

    report.branches.append(f"{depth}:recurse")
    sep = sorted(triple.separator)
    if len(sep) < k:
        return frozenset(sep)
    pair_cut = split_vc(g, sep, k)
    if pair_cut is not None:
        return pair_cut
    left_side, right_side = build_side_graphs(g, triple, k)
    for side in (left_side, right_side):
        shrunk = nagamochi_ibaraki(side.graph, k).union_graph
        sub_cut = _main_vc(shrunk, k, a, base_threshold, inner, report, depth + 1)
        if sub_cut is not None:
            lifted = normalize_side_cut(side, frozenset(sub_cut))
            return lifted
    return None
