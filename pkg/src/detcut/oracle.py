"""Brute-force reference implementations.

Everything here is deliberately naive: exhaustive enumeration over subsets
and component structure, auditable by eye. Budget violations raise
BudgetError, which is distinct from DomainError so CI can never mistake
"too big to verify" for "verified".
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graph import BudgetError, Cut, DomainError, Graph, WeightedGraph


@dataclass(frozen=True)
class OracleBudget:
    max_subset_n: int = 14
    max_triple_n: int = 10

    def check_subsets(self, n: int) -> None:
        if n > self.max_subset_n:
            raise BudgetError(f"subset enumeration capped at n={self.max_subset_n}, got {n}")

    def check_triples(self, n: int) -> None:
        if n > self.max_triple_n:
            raise BudgetError(f"triple enumeration capped at n={self.max_triple_n}, got {n}")


DEFAULT_BUDGET = OracleBudget()


def _all_cut_sides(n: int):
    # enumerate each unordered cut once by pinning vertex n-1 to the outside
    for mask in range(1, 1 << (n - 1)):
        yield frozenset(v for v in range(n - 1) if (mask >> v) & 1)


def brute_conductance(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[float, frozenset[int]]:
    """Exact (Phi(G), argmin S) by enumerating all 2^(n-1)-1 cuts."""
    budget.check_subsets(g.n)
    if g.n < 2:
        raise DomainError("conductance needs at least 2 vertices")
    best, best_side = float("inf"), frozenset()
    for side in _all_cut_sides(g.n):
        cut = Cut.from_members(g, side)
        if cut.volume_in == 0 or cut.volume_out == 0:
            continue
        phi = cut.conductance
        if phi < best - 1e-15:
            best, best_side = phi, side
    return best, best_side


def brute_sparsity(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> tuple[float, frozenset[int]]:
    """Exact (sigma(G), argmin S)."""
    budget.check_subsets(g.n)
    if g.n < 2:
        raise DomainError("sparsity needs at least 2 vertices")
    best, best_side = float("inf"), frozenset()
    for side in _all_cut_sides(g.n):
        sigma = g.boundary_size(side) / min(len(side), g.n - len(side))
        if sigma < best - 1e-15:
            best, best_side = sigma, side
    return best, best_side


def brute_most_balanced(
    g: Graph, phi: float, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[int, frozenset[int]]:
    """Max-volume S with vol(S) <= m and Phi(S) <= phi; (0, empty) if none."""
    budget.check_subsets(g.n)
    best_vol, best_side = 0, frozenset()
    for side in _all_cut_sides(g.n):
        for members in (side, frozenset(range(g.n)) - side):
            if not members or len(members) >= g.n:
                continue
            cut = Cut.from_members(g, members)
            if cut.volume_in > g.m or min(cut.volume_in, cut.volume_out) == 0:
                continue
            if cut.conductance <= phi + 1e-12 and cut.volume_in > best_vol:
                best_vol, best_side = cut.volume_in, members
    return best_vol, best_side


def brute_most_balanced_sparse(
    g: Graph, phi: float, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[int, frozenset[int]]:
    """Max-|S| set with |S| <= n/2 and sigma(S) <= phi; (0, empty) if none."""
    budget.check_subsets(g.n)
    best_size, best_side = 0, frozenset()
    for side in _all_cut_sides(g.n):
        for members in (side, frozenset(range(g.n)) - side):
            if not members or len(members) > g.n // 2:
                continue
            sigma = g.boundary_size(members) / len(members)
            if sigma <= phi + 1e-12 and len(members) > best_size:
                best_size, best_side = len(members), members
    return best_size, best_side


def _best_split(component_sizes: list[int]) -> int:
    """Max over 2-groupings of components of min(total_left, total_right)."""
    total = sum(component_sizes)
    reachable = {0}
    for size in component_sizes:
        reachable |= {r + size for r in reachable}
    return max(min(r, total - r) for r in reachable if 0 < r < total)


def brute_vertex_expansion(
    g: Graph, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[float, tuple[frozenset[int], frozenset[int], frozenset[int]] | None]:
    """Exact (h(G), argmin triple); h = inf when no separation triple exists."""
    budget.check_triples(g.n)
    best = float("inf")
    best_triple = None
    for size in range(0, g.n - 1):
        for sep in combinations(range(g.n), size):
            sep_set = frozenset(sep)
            comps = g.components(sep_set)
            if len(comps) < 2:
                continue
            sizes = [len(c) for c in comps]
            h = len(sep_set) / (_best_split(sizes) + len(sep_set)) if sep_set else 0.0
            if not sep_set:
                h = 0.0
            if h < best - 1e-15:
                best = h
                best_triple = _group_triple(comps, sep_set)
    return best, best_triple


def _group_triple(comps: list[list[int]], sep_set: frozenset[int]):
    """Assemble (L, S, R) from components, balancing min(|L|, |R|)."""
    sizes = [len(c) for c in comps]
    total = sum(sizes)
    best_mask, best_min = None, -1
    for mask in range(1, 1 << len(comps)):
        left_size = sum(sizes[i] for i in range(len(comps)) if (mask >> i) & 1)
        if 0 < left_size < total and min(left_size, total - left_size) > best_min:
            best_min = min(left_size, total - left_size)
            best_mask = mask
    left, right = set(), set()
    for i, comp in enumerate(comps):
        (left if (best_mask >> i) & 1 else right).update(comp)
    return frozenset(left), sep_set, frozenset(right)


def brute_kappa_st(g: Graph, x: int, y: int, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """kappa_G(x, y) by subset enumeration; n-1 when no (x,y)-cut exists."""
    budget.check_subsets(g.n)
    if x == y:
        raise DomainError("kappa(x, y) needs distinct vertices")
    others = [v for v in range(g.n) if v not in (x, y)]
    for size in range(0, len(others) + 1):
        for sep in combinations(others, size):
            comps = g.components(frozenset(sep))
            cx = next(i for i, c in enumerate(comps) if x in c)
            cy = next(i for i, c in enumerate(comps) if y in c)
            if cx != cy:
                return size
    return g.n - 1


def brute_kappa(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> int:
    """kappa_G by subset enumeration; n-1 for complete graphs."""
    budget.check_subsets(g.n)
    if g.n < 2:
        raise DomainError("kappa needs at least 2 vertices")
    for size in range(0, g.n - 1):
        for sep in combinations(range(g.n), size):
            if len(g.components(frozenset(sep))) > 1:
                return size
    return g.n - 1


def brute_min_vertex_cut(
    g: Graph, budget: OracleBudget = DEFAULT_BUDGET
) -> frozenset[int] | None:
    """A minimum vertex cut, or None for complete graphs."""
    budget.check_subsets(g.n)
    for size in range(0, g.n - 1):
        for sep in combinations(range(g.n), size):
            if len(g.components(frozenset(sep))) > 1:
                return frozenset(sep)
    return None


def _ek_vertex_flow(adj: list[set[int]], n: int, x: int, y: int, bound: int) -> int:
    """Plain BFS augmenting flow on the vertex-split adjacency matrix."""
    size = 2 * n
    cap = [[0] * size for _ in range(size)]
    for v in range(n):
        cap[2 * v][2 * v + 1] = bound if v in (x, y) else 1
    for u in range(n):
        for v in adj[u]:
            cap[2 * u + 1][2 * v] = bound
    s, t = 2 * x + 1, 2 * y
    flow = 0
    while flow < bound:
        parent = [-1] * size
        parent[s] = s
        queue = [s]
        while queue:
            node = queue.pop(0)
            if node == t:
                break
            for nxt in range(size):
                if parent[nxt] < 0 and cap[node][nxt] > 0:
                    parent[nxt] = node
                    queue.append(nxt)
        if parent[t] < 0:
            break
        node = t
        while node != s:
            prev = parent[node]
            cap[prev][node] -= 1
            cap[node][prev] += 1
            node = prev
        flow += 1
    return flow


def kappa_flow_bounded(g: Graph, bound: int) -> int:
    """min(kappa_G, bound) by naive Edmonds-Karp Menger queries.

    Sources are one minimum-degree vertex and its neighbors, sinks every
    non-adjacent vertex; independent of the production flow code.
    """
    if g.n < 2:
        raise DomainError("kappa needs at least 2 vertices")
    adj = [set() for _ in range(g.n)]
    for u, v in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    v0 = min(range(g.n), key=lambda v: (len(adj[v]), v))
    best = min(g.n - 1, bound)
    if len(set(range(g.n)) - adj[v0] - {v0}) > 0:
        best = min(best, len(adj[v0]))
    for x in sorted({v0} | adj[v0]):
        for y in range(g.n):
            if y == x or y in adj[x]:
                continue
            if best == 0:
                return 0
            value = _ek_vertex_flow(adj, g.n, x, y, best)
            best = min(best, value)
    return best


def cut_ratio_extremes(
    g: WeightedGraph, h: WeightedGraph, budget: OracleBudget = DEFAULT_BUDGET
) -> tuple[float, float]:
    """(max, min) over all cuts of w_H(boundary) / w_G(boundary)."""
    budget.check_subsets(g.n)
    if g.n != h.n:
        raise DomainError("cut_ratio_extremes needs graphs on the same vertex set")
    if g.n < 2:
        raise DomainError("cut ratios need at least 2 vertices")
    hi, lo = 0.0, float("inf")
    for side in _all_cut_sides(g.n):
        wg, wh = g.cut_weight(side), h.cut_weight(side)
        if wg == 0.0 and wh == 0.0:
            continue
        if wg == 0.0 or wh == 0.0:
            return float("inf"), 0.0
        ratio = wh / wg
        hi, lo = max(hi, ratio), min(lo, ratio)
    if lo == float("inf"):
        return 1.0, 1.0
    return hi, lo


def kappa_measured(g: WeightedGraph, h: WeightedGraph, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    """Smallest kappa with G/kappa <= H <= kappa*G over all cuts."""
    hi, lo = cut_ratio_extremes(g, h, budget)
    if lo == 0.0 or hi == float("inf"):
        return float("inf")
    return max(hi, 1.0 / lo)
