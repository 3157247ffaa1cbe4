"""Sparse-graph balanced cuts via j-trees.

A canonical j-tree routes every graph edge through forest paths plus one
core edge, so every cut of the j-tree weighs at least the original cut
(checked exhaustively in tests). Trees come from multiplicative-weight
reweighting of minimum spanning trees; the average stretch is measured and
reported, never asserted. Each j-tree is cut by combining a dynamic program
on the contracted forest with a recursive dense cut on the core, and the
driver lifts the best candidate through the expander split, accepting it
only if its exact conductance beats the target.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .expanders import expander_split, recursive_sparsify, round_split_cut
from .graph import (
    Cut,
    DomainError,
    Graph,
    WeightedGraph,
    as_weighted,
    require_connected,
)
from .pagerank import BalancedCutResult, conductance_bound, most_balanced_edge_cut

TREE_COUNT_CAP = 4
DENSE_FALLBACK_EDGES = 32


class _Forest:
    """Rooted forest with binary-lifting LCA over a fixed vertex set."""

    def __init__(self, n: int, edges: list[tuple[int, int]], roots: list[int] | None = None):
        self.n = n
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        self.parent = [-1] * n
        self.depth = [0] * n
        self.root_of = [-1] * n
        self.order: list[int] = []  # preorder, parents before children
        seen = [False] * n
        starts = roots if roots is not None else range(n)
        for r in starts:
            if seen[r]:
                continue
            seen[r] = True
            self.root_of[r] = r
            stack = [r]
            while stack:
                v = stack.pop()
                self.order.append(v)
                for u in adj[v]:
                    if not seen[u]:
                        seen[u] = True
                        self.parent[u] = v
                        self.depth[u] = self.depth[v] + 1
                        self.root_of[u] = r
                        stack.append(u)
        if not all(seen):
            raise DomainError("forest edges do not reach every vertex")
        self.log = max(1, (max(self.depth) + 1).bit_length())
        self.up = [self.parent]
        for j in range(1, self.log):
            prev = self.up[j - 1]
            self.up.append([prev[prev[v]] if prev[v] >= 0 else -1 for v in range(n)])

    def lca(self, u: int, v: int) -> int:
        if self.root_of[u] != self.root_of[v]:
            raise DomainError("lca of vertices in different trees")
        du, dv = self.depth[u], self.depth[v]
        if du < dv:
            u, v, du, dv = v, u, dv, du
        diff = du - dv
        j = 0
        while diff:
            if diff & 1:
                u = self.up[j][u]
            diff >>= 1
            j += 1
        if u == v:
            return u
        for j in range(self.log - 1, -1, -1):
            if self.up[j][u] != self.up[j][v]:
                u = self.up[j][u]
                v = self.up[j][v]
        return self.parent[u]

    def subtree_sums(self, down: list[float]) -> list[float]:
        total = list(down)
        for v in reversed(self.order):
            p = self.parent[v]
            if p >= 0:
                total[p] += total[v]
        return total


def _kruskal(n: int, edges, lengths) -> list[int]:
    order = sorted(range(len(edges)), key=lambda e: (lengths[e], e))
    parent = list(range(n))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    chosen = []
    for eid in order:
        u, v = edges[eid]
        if u == v:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            chosen.append(eid)
            if len(chosen) == n - 1:
                break
    return chosen


@dataclass(frozen=True)
class JTree:
    """Canonical j-tree: weighted core-plus-forest graph dominating all cuts."""

    graph: WeightedGraph  # forest edges with path loads + core edges with counts
    core: frozenset[int]
    forest_edges: tuple[tuple[int, int], ...]
    forest_loads: tuple[int, ...]
    core_edges: tuple[tuple[int, int], ...]
    core_counts: tuple[int, ...]
    core_loops: dict[int, int]  # core vertex -> same-root edge count
    root_of: tuple[int, ...]
    stretch: float  # measured average stretch of this tree


def _tree_congestion(g: Graph, tree_eids: list[int]) -> tuple[_Forest, dict[int, int]]:
    forest = _Forest(g.n, [g.edges[e] for e in tree_eids], roots=[0])
    down = [0.0] * g.n
    for u, v in g.edges:
        if u == v:
            continue
        a = forest.lca(u, v)
        down[u] += 1
        down[v] += 1
        down[a] -= 2
    loads = forest.subtree_sums(down)
    congestion = {}
    for eid in tree_eids:
        u, v = g.edges[eid]
        child = u if forest.parent[u] == v else v
        congestion[eid] = int(round(loads[child]))
    return forest, congestion


def _select_core(
    g: Graph, tree_eids: list[int], congestion: dict[int, int], j: int
) -> tuple[list[int], list[int]]:
    """Split the spanning tree so each resulting tree holds one core vertex.

    Candidates are the endpoints of the ceil(j/2) most congested tree
    edges. Along the subtree connecting the candidates, every segment
    between junctions (candidates or branch points) loses its most
    congested edge, which pairwise separates all candidates with at most
    2j - 1 cuts; candidate-free trees promote their most congested vertex.
    """
    by_load = sorted(tree_eids, key=lambda e: (-congestion[e], e))
    top = by_load[: max(0, math.ceil(j / 2))]
    candidates = sorted({v for e in top for v in g.edges[e]})
    if not candidates:
        vertex_load = [0] * g.n
        for eid in tree_eids:
            u, v = g.edges[eid]
            vertex_load[u] = max(vertex_load[u], congestion[eid])
            vertex_load[v] = max(vertex_load[v], congestion[eid])
        root = max(range(g.n), key=lambda v: (vertex_load[v], -v))
        return list(tree_eids), [root]

    forest = _Forest(g.n, [g.edges[e] for e in tree_eids], roots=[candidates[0]])
    up_eid = [-1] * g.n
    for eid in tree_eids:
        u, v = g.edges[eid]
        child = u if forest.parent[u] == v else v
        up_eid[child] = eid
    cand_set = set(candidates)
    below = forest.subtree_sums([1.0 if v in cand_set else 0.0 for v in range(g.n)])
    steiner_children: list[list[int]] = [[] for _ in range(g.n)]
    for v in forest.order:
        p = forest.parent[v]
        if p >= 0 and below[v] >= 1:
            steiner_children[p].append(v)

    def is_junction(v: int) -> bool:
        return v in cand_set or len(steiner_children[v]) >= 2

    cut_eids: set[int] = set()
    root = candidates[0]
    # carry the heaviest edge of the open segment down the Steiner tree
    stack: list[tuple[int, int]] = [(u, -1) for u in reversed(steiner_children[root])]
    while stack:
        v, best = stack.pop()
        e = up_eid[v]
        if best < 0 or (congestion[e], -e) > (congestion[best], -best):
            best = e
        if is_junction(v):
            cut_eids.add(best)
            best = -1
        for u in reversed(steiner_children[v]):
            stack.append((u, best))
    forest_eids = [e for e in tree_eids if e not in cut_eids]

    parts = _Forest(g.n, [g.edges[e] for e in forest_eids])
    cand_set = set(candidates)
    comp_members: dict[int, list[int]] = {}
    for v in range(g.n):
        comp_members.setdefault(parts.root_of[v], []).append(v)
    vertex_load = [0] * g.n
    for eid in forest_eids:
        u, v = g.edges[eid]
        vertex_load[u] = max(vertex_load[u], congestion[eid])
        vertex_load[v] = max(vertex_load[v], congestion[eid])
    roots: list[int] = []
    for comp_root in sorted(comp_members):
        members = comp_members[comp_root]
        inside = sorted(c for c in members if c in cand_set)
        if inside:
            roots.append(inside[0])
        else:
            roots.append(max(members, key=lambda v: (vertex_load[v], -v)))
    return forest_eids, sorted(roots)


def _canonicalize(g: Graph, forest_eids: list[int], roots: list[int]) -> JTree:
    forest = _Forest(g.n, [g.edges[e] for e in forest_eids], roots=roots)
    down = [0.0] * g.n
    core_counts: dict[tuple[int, int], int] = {}
    same_root: dict[int, int] = {}
    stretch_total = 0
    routed = 0
    for u, v in g.edges:
        ru, rv = forest.root_of[u], forest.root_of[v]
        if u == v:
            same_root[ru] = same_root.get(ru, 0) + 1
            continue
        routed += 1
        if ru == rv:
            a = forest.lca(u, v)
            down[u] += 1
            down[v] += 1
            down[a] -= 2
            same_root[ru] = same_root.get(ru, 0) + 1
            stretch_total += forest.depth[u] + forest.depth[v] - 2 * forest.depth[a]
        else:
            down[u] += 1
            down[v] += 1
            down[ru] -= 1
            down[rv] -= 1
            key = (min(ru, rv), max(ru, rv))
            core_counts[key] = core_counts.get(key, 0) + 1
            stretch_total += forest.depth[u] + forest.depth[v] + 1
    loads = forest.subtree_sums(down)
    f_edges, f_loads = [], []
    for eid in forest_eids:
        x, y = g.edges[eid]
        child = x if forest.parent[x] == y else y
        f_edges.append((x, y))
        f_loads.append(int(round(loads[child])))
    c_edges = sorted(core_counts)
    c_counts = [core_counts[e] for e in c_edges]
    graph = WeightedGraph(
        g.n,
        f_edges + list(c_edges),
        [float(w) for w in f_loads] + [float(w) for w in c_counts],
    )
    return JTree(
        graph=graph,
        core=frozenset(roots),
        forest_edges=tuple(f_edges),
        forest_loads=tuple(f_loads),
        core_edges=tuple(c_edges),
        core_counts=tuple(c_counts),
        core_loops=same_root,
        root_of=tuple(forest.root_of),
        stretch=stretch_total / max(1, routed),
    )


def build_jtrees(g: Graph, t: int, j: int | None = None) -> list[JTree]:
    """t canonical j-trees from MWU-reweighted minimum spanning trees.

    Edge lengths start at 1 and grow with the tree-path congestion each
    round; cut domination holds for every tree by construction, and the
    average stretch is measured into JTree.stretch.
    """
    if t < 1:
        raise DomainError(f"tree count must be >= 1, got {t}")
    require_connected(g, "build_jtrees")
    if g.n == 1:
        raise DomainError("j-trees need at least 2 vertices")
    if j is None:
        j = max(1, math.ceil(g.m / t))
    lengths = [1.0] * g.m
    out = []
    scale = t / (g.m * max(1.0, math.log2(max(2, g.n))))
    for _ in range(t):
        tree_eids = _kruskal(g.n, g.edges, lengths)
        _, congestion = _tree_congestion(g, tree_eids)
        forest_eids, roots = _select_core(g, tree_eids, congestion, j)
        out.append(_canonicalize(g, forest_eids, roots))
        for eid in tree_eids:
            lengths[eid] *= 1.0 + congestion[eid] * scale
    return out


@dataclass
class WeightedMultiTree:
    """Tree with vertex weights and edge multiplicities."""

    n: int
    edges: list[tuple[int, int]]
    mult: list[float]
    weight: list[float]
    root: int

    def __post_init__(self):
        if len(self.edges) != self.n - 1:
            raise DomainError("multi-tree needs exactly n-1 support edges")
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            self.adj[u].append((v, i))
            self.adj[v].append((u, i))
        for row in self.adj:
            row.sort()

    def total_weight(self) -> float:
        return sum(self.weight)


def _tree_structure(tree: WeightedMultiTree):
    parent = [-1] * tree.n
    parent_edge = [-1] * tree.n
    order = [tree.root]
    seen = [False] * tree.n
    seen[tree.root] = True
    idx = 0
    while idx < len(order):
        v = order[idx]
        idx += 1
        for u, eid in tree.adj[v]:
            if not seen[u]:
                seen[u] = True
                parent[u] = v
                parent_edge[u] = eid
                order.append(u)
    if not all(seen):
        raise DomainError("multi-tree support is not connected")
    subtree = list(tree.weight)
    for v in reversed(order):
        if parent[v] >= 0:
            subtree[parent[v]] += subtree[v]
    return parent, parent_edge, order, subtree


def root_for_balance(tree: WeightedMultiTree) -> int:
    """A root below which every proper subtree weighs at most half the total."""
    total = tree.total_weight()
    parent, _, _, subtree = _tree_structure(tree)
    v = tree.root
    while True:
        heavy = None
        for u, _ in tree.adj[v]:
            if parent[u] == v and subtree[u] > total / 2.0:
                heavy = u
                break
        if heavy is None:
            return v
        v = heavy


def rooted_tree_cut(tree: WeightedMultiTree, phi: float) -> frozenset[int]:
    """Antichain-of-subtrees sparse cut (ratio <= 6 phi when nonempty).

    X holds the subtree roots whose up-edge multiplicity is at most 2 phi
    times the subtree weight; maximal X-subtrees are collected in ascending
    root id until a quarter of the total weight is gathered.
    """
    total = tree.total_weight()
    parent, parent_edge, order, subtree = _tree_structure(tree)
    for v in range(tree.n):
        if v != tree.root and parent[v] == tree.root:
            if subtree[v] > total / 2.0 + 1e-9:
                raise DomainError("root invariant violated: a subtree exceeds half the weight")
    in_x = [
        v != tree.root and tree.mult[parent_edge[v]] <= 2.0 * phi * subtree[v]
        for v in range(tree.n)
    ]
    blocked = [False] * tree.n
    for v in order:  # parents precede children
        for u, _ in tree.adj[v]:
            if parent[u] == v:
                blocked[u] = blocked[v] or in_x[v]
    maximal = [v for v in range(tree.n) if in_x[v] and not blocked[v]]
    members: set[int] = set()
    gathered = 0.0
    for u in sorted(maximal):
        stack = [u]
        while stack:
            v = stack.pop()
            members.add(v)
            for w, _ in tree.adj[v]:
                if parent[w] == v:
                    stack.append(w)
        gathered += subtree[u]
        if gathered >= total / 4.0:
            break
    return frozenset(members)


def _balanced_component_side(g: Graph) -> frozenset[int] | None:
    """Best-balanced (volume, then count) union of components; None if connected."""
    comps = g.components()
    if len(comps) < 2:
        return None
    stats = [(sum(g.degree[v] for v in c), len(c)) for c in comps]
    best_key, best_mask = None, None
    for mask in range(1, (1 << len(comps)) - 1):
        vol = sum(stats[i][0] for i in range(len(comps)) if (mask >> i) & 1)
        cnt = sum(stats[i][1] for i in range(len(comps)) if (mask >> i) & 1)
        key = (min(vol, 2 * g.m - vol), min(cnt, g.n - cnt))
        if best_key is None or key > best_key:
            best_key, best_mask = key, mask
    side = set()
    for i, comp in enumerate(comps):
        if (best_mask >> i) & 1:
            side.update(comp)
    return frozenset(side)


def jtree_cut(
    g: Graph,
    jt: JTree,
    phi: float,
    inner: Callable[[Graph, float], BalancedCutResult],
) -> frozenset[int] | None:
    """Best sparse cut of one j-tree: core branch vs forest-DP branch.

    The core subgraph gains a self-loop per same-root edge; among branch
    candidates within the sparsity budget max(f(3 phi), 6 phi) the more
    balanced one wins. Returns a vertex set of g, or None.
    """
    if len(jt.root_of) != g.n:
        raise DomainError("j-tree does not match the graph")
    candidates: list[tuple[int, float, int, frozenset[int]]] = []

    core = sorted(jt.core)
    if len(core) >= 2:
        local = {v: i for i, v in enumerate(core)}
        hk_edges = []
        for (u, v), c in zip(jt.core_edges, jt.core_counts):
            hk_edges.extend([(local[u], local[v])] * c)
        for r, c in sorted(jt.core_loops.items()):
            hk_edges.extend([(local[r], local[r])] * c)
        hk = Graph(len(core), hk_edges, allow_loops=True)
        side_local: frozenset[int] | None = None
        if hk.m == 0:
            side_local = frozenset(range(len(core) // 2))
        elif not hk.is_connected():
            side_local = _balanced_component_side(hk)
        else:
            res = inner(hk, min(1.0, 3.0 * phi))
            if res.outcome == "cut" and res.cut is not None:
                side_local = res.cut.members
        if side_local:
            chosen = frozenset(core[i] for i in side_local)
            s_f = frozenset(v for v in range(g.n) if jt.root_of[v] in chosen)
            if s_f and len(s_f) < g.n:
                small = min(len(s_f), g.n - len(s_f))
                sigma = jt.graph.cut_weight(s_f) / small
                candidates.append((small, sigma, 0, s_f))

    non_core = sorted(v for v in range(g.n) if v not in jt.core)
    if non_core:
        local = {v: i for i, v in enumerate(non_core)}
        kstar = len(non_core)
        t_edges, t_mult = [], []
        for (u, v), load in zip(jt.forest_edges, jt.forest_loads):
            t_edges.append((local.get(u, kstar), local.get(v, kstar)))
            t_mult.append(float(load))
        weights = [1.0] * kstar + [float(len(jt.core))]
        tree = WeightedMultiTree(kstar + 1, t_edges, t_mult, weights, kstar)
        root = root_for_balance(tree)
        tree = WeightedMultiTree(kstar + 1, t_edges, t_mult, weights, root)
        picked = rooted_tree_cut(tree, phi)
        if picked and len(picked) <= kstar:
            members = set()
            for i in picked:
                if i == kstar:
                    members.update(jt.core)
                else:
                    members.add(non_core[i])
            s_t = frozenset(members)
            if s_t and len(s_t) < g.n:
                small = min(len(s_t), g.n - len(s_t))
                sigma = jt.graph.cut_weight(s_t) / small
                candidates.append((small, sigma, 1, s_t))

    if not candidates:
        return None
    budget = max(conductance_bound(min(1.0, 3.0 * phi), g.m), 6.0 * phi)
    qualifying = [c for c in candidates if c[1] <= budget]
    pool = qualifying if qualifying else candidates
    pool.sort(key=lambda c: (-c[0], c[1], c[2]))
    return pool[0][3]


def jtree_balanced_cut(
    g: Graph,
    phi: float,
    k: int,
    inner: Callable[[Graph, float], BalancedCutResult] = most_balanced_edge_cut,
    tree_cap: int = TREE_COUNT_CAP,
) -> BalancedCutResult:
    """Balanced-cut routine running the j-tree machinery on the expander
    split of g; certifies Phi(G) >= phi when no lifted candidate beats phi."""
    if not (0.0 < phi <= 1.0):
        raise DomainError(f"phi must lie in (0, 1], got {phi}")
    require_connected(g, "jtree_balanced_cut")
    if g.n < 2 or g.m == 0:
        return BalancedCutResult("certificate", phi, detail={"reason": "no cuts exist"})
    k = max(1, min(int(k), g.m))
    split = expander_split(g)
    gp = split.split_graph
    detail: dict = {"k": k, "split_n": gp.n}
    if k <= 1 or math.ceil(g.m / k) < 2 or g.m <= DENSE_FALLBACK_EDGES:
        res = inner(gp, phi)
        detail["mode"] = "dense-on-split"
        if res.outcome == "cut" and res.cut is not None:
            lifted = round_split_cut(split, res.cut.members)
            if lifted and len(lifted) < g.n:
                cut = Cut.from_members(g, lifted)
                if cut.conductance < phi:
                    return BalancedCutResult("cut", phi, cut=cut, detail=detail)
        return BalancedCutResult("certificate", phi, detail=detail)

    # size the cores from the original edge count: the split graph carries
    # a constant-factor more edges purely from its supernode expanders
    j = max(2, math.ceil(g.m / k))
    t = max(1, min(k, tree_cap))
    trees = build_jtrees(gp, t, j=j)
    delta = max(gp.degree)
    alpha = max(1.0, sum(jt.stretch for jt in trees) / len(trees))
    phi_j = alpha * delta * phi
    detail.update(
        {"mode": "jtree", "trees": t, "j": j, "alpha_measured": alpha, "delta": delta}
    )
    best: Cut | None = None
    for jt in trees:
        side = jtree_cut(gp, jt, phi_j, inner)
        if not side:
            continue
        lifted = round_split_cut(split, side)
        if not lifted or len(lifted) >= g.n:
            continue
        cut = Cut.from_members(g, lifted)
        if cut.conductance < phi:
            if best is None or min(cut.volume_in, cut.volume_out) > min(
                best.volume_in, best.volume_out
            ):
                best = cut
    if best is None:
        return BalancedCutResult("certificate", phi, detail=detail)
    return BalancedCutResult("cut", phi, cut=best, detail=detail)


def _quantize(wg: WeightedGraph, max_mult: int = 32) -> Graph:
    w_max = max(wg.weight) if wg.weight else 1.0
    edges = []
    for (u, v), w in zip(wg.edges, wg.weight):
        if u == v or w <= 0:
            continue
        edges.extend([(u, v)] * max(1, round(w * max_mult / w_max)))
    return Graph(wg.n, edges)


def sparsified_inner(
    h: Graph,
    phi: float,
    base: Callable[[Graph, float], BalancedCutResult] = most_balanced_edge_cut,
) -> BalancedCutResult:
    """Dense routine run on a recursively sparsified stand-in of h."""
    if h.m <= 4 * h.n or h.n <= 8:
        return base(h, phi)

    def balcut_adapter(graph: Graph, p: float):
        res = base(graph, min(1.0, max(p, 1e-9)))
        if res.outcome == "certificate":
            return ("certificate", res.phi)
        return ("cut", res.cut.members)

    sparse = recursive_sparsify(as_weighted(h.without_loops()), balcut_adapter)
    stand_in = _quantize(sparse)
    res = base(stand_in, phi)
    if res.outcome == "cut" and res.cut is not None:
        cut = Cut.from_members(h, res.cut.members)
        return BalancedCutResult(res.outcome, res.phi, cut=cut, detail=res.detail)
    return res


def pipeline_cut(g: Graph, phi: float, profile: str = "one-shot") -> BalancedCutResult:
    """Composed balanced-cut pipelines.

    one-shot: j-trees with the dense PageRank routine inside, k = ceil(m^(2/3)).
    recursive: the same driver with the inner routine preceded by recursive
    sparsification, k = ceil(sqrt(m)). Tiny inputs (m <= 32) clamp k to 1,
    reducing both to the dense routine on the split graph.
    """
    require_connected(g, "pipeline_cut")
    m = g.m
    if profile == "one-shot":
        k = 1 if m <= DENSE_FALLBACK_EDGES else math.ceil(m ** (2.0 / 3.0))
        return jtree_balanced_cut(g, phi, k, inner=most_balanced_edge_cut)
    if profile == "recursive":
        k = 1 if m <= DENSE_FALLBACK_EDGES else math.ceil(math.sqrt(m))
        return jtree_balanced_cut(g, phi, k, inner=sparsified_inner)
    raise DomainError(f"unknown pipeline profile {profile!r}")
