"""Vertex-expansion approximation via the cut-matching game.

Each round asks a balanced-cut routine for a sparse cut of the accumulated
matching graph W; the two sides then either embed a perfect matching into
the host graph (flow with vertex capacity c) or expose a separation triple
with expansion below 1/c. A certified expander W embedded with measured
congestion c* lower-bounds the host's vertex expansion by sigma(W)/(2 c*),
and that concrete number is what certificates carry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .flow import FlowNetwork, max_flow, residual_partition
from .graph import (
    Cut,
    DetcutError,
    DomainError,
    Graph,
    SeparationTriple,
    require_connected,
    validate_triple,
)
from .pagerank import BalancedCutResult, conductance_bound, most_balanced_edge_cut

ROUND_CAP_FACTOR = 10


class GameOverflowError(DetcutError):
    """Cut-matching game exceeded its round cap; carries the transcript."""

    def __init__(self, message: str, transcript: list):
        super().__init__(message)
        self.transcript = transcript


@dataclass(frozen=True)
class EmbeddedMatching:
    """Matched (a, b) pairs with their host-graph flow paths."""

    pairs: tuple[tuple[int, int], ...]
    paths: tuple[tuple[int, ...], ...]
    congestion: int

    @staticmethod
    def from_paths(paths, a_set, b_set, cap: float) -> "EmbeddedMatching":
        pairs = []
        usage: dict[int, int] = {}
        for p in paths:
            interior = p[2:-2]  # strip s, dummy ... dummy, t
            pairs.append((interior[0], interior[-1]))
            for v in interior:
                usage[v] = usage.get(v, 0) + 1
        congestion = max(usage.values(), default=0)
        if congestion > cap:
            raise AssertionError("matching flow exceeded its vertex capacity")
        a_used = [a for a, _ in pairs]
        b_used = [b for _, b in pairs]
        if len(set(a_used)) != len(a_used) or len(set(b_used)) != len(b_used):
            raise AssertionError("matching endpoints are not disjoint")
        return EmbeddedMatching(tuple(pairs), tuple(tuple(p[2:-2]) for p in paths), congestion)


def embed_matching_or_cut(g: Graph, a_side, b_side, c: float):
    """Flow step of the game: a full matching A-B embedded with vertex
    congestion <= c, or a separation triple with h < 1/c."""
    a_side = sorted(set(a_side))
    b_side = sorted(set(b_side))
    if not a_side or not b_side:
        raise DomainError("matching needs nonempty disjoint sides")
    if set(a_side) & set(b_side):
        raise DomainError("matching sides overlap")
    n = g.n
    a_dummy = {v: n + i for i, v in enumerate(a_side)}
    b_dummy = {v: n + len(a_side) + i for i, v in enumerate(b_side)}
    s = n + len(a_side) + len(b_side)
    t = s + 1
    edges = list(g.edges)
    for v in a_side:
        edges.append((s, a_dummy[v]))
        edges.append((a_dummy[v], v))
    for v in b_side:
        edges.append((v, b_dummy[v]))
        edges.append((b_dummy[v], t))
    host = Graph(t + 1, edges, allow_loops=True)
    caps: dict[int, float] = {v: float(c) for v in range(n)}
    for dummy in list(a_dummy.values()) + list(b_dummy.values()):
        caps[dummy] = 1.0
    network = FlowNetwork(host, caps, s, t)
    want = min(len(a_side), len(b_side))
    result = max_flow(network, bound=want)
    if result.value >= want:
        matching = EmbeddedMatching.from_paths(result.paths, set(a_side), set(b_side), c)
        return ("matching", matching)
    left, cut, right = residual_partition(network)
    l_v = {v for v in left if v < n}
    s_v = {v for v in cut if v < n}
    r_v = set(range(n)) - l_v - s_v
    triple = validate_triple(g, l_v, s_v, r_v)
    if triple.expansion >= 1.0 / c:
        raise AssertionError("matching shortfall must expose h < 1/c")
    return ("triple", triple)


@dataclass
class TrimOutcome:
    kind: str  # "certificate" | "balanced" | "trimmed"
    phi: float  # conductance parameter the final residual certified at
    cut: Cut | None = None
    levels_used: int = 0


def trim_to_expander(
    g: Graph,
    phi: float,
    balcut: Callable[[Graph, float], BalancedCutResult] = most_balanced_edge_cut,
    levels: int | None = None,
    bound_fn: Callable[[float, int], float] = conductance_bound,
) -> TrimOutcome:
    """Accumulate unbalanced cuts until the residual certifies.

    Returns a certificate when nothing was trimmed, a balanced cut once
    the accumulated volume reaches m/8, or the trimmed cut with the
    residual certified at the same parameter. The schedule keeps phi
    constant; the conductance degradation across levels is measured by the
    caller, not injected back into the parameter.
    """
    if g.n < 2:
        return TrimOutcome("certificate", phi)
    if levels is None:
        levels = max(1, math.ceil(math.log2(max(2.0, math.log2(max(2, g.n))))))
    threshold = g.m / 8.0
    removed: set[int] = set()
    phi_cur = phi
    degradations = 0
    while True:
        alive = sorted(v for v in range(g.n) if v not in removed)
        if len(alive) <= 1:
            return TrimOutcome(
                "trimmed", phi_cur, Cut.from_members(g, removed), degradations
            )
        sub, remap = g.induced(alive)
        sub = Graph(sub.n, [e for e in sub.edges if e[0] != e[1]])
        inv = {i: v for v, i in remap.items()}
        if sub.m == 0 or not sub.is_connected():
            comps = sub.components()
            comps.sort(key=lambda c: sum(sub.degree[v] for v in c))
            side = frozenset(inv[i] for c in comps[:-1] for i in c)
            if not side:
                side = frozenset(inv[i] for i in comps[0])
            new_cut = side
        else:
            res = balcut(sub, min(1.0, phi_cur))
            if res.is_certificate:
                if not removed:
                    return TrimOutcome("certificate", min(1.0, phi_cur))
                return TrimOutcome(
                    "trimmed", min(1.0, phi_cur), Cut.from_members(g, removed), degradations
                )
            new_cut = frozenset(inv[i] for i in res.cut.members)
        removed |= new_cut
        if len(removed) >= g.n:
            removed -= new_cut
            return TrimOutcome(
                "trimmed", phi_cur, Cut.from_members(g, removed), degradations
            )
        degradations += 1
        if sum(g.degree[v] for v in removed) >= threshold:
            return TrimOutcome(
                "balanced", phi_cur, Cut.from_members(g, removed), degradations
            )


@dataclass
class GameState:
    """Transcript of one cut-matching run."""

    rounds: int = 0
    congestion_budget: float = 0.0
    matchings: list[EmbeddedMatching] = field(default_factory=list)
    history: list[str] = field(default_factory=list)

    def measured_congestion(self) -> int:
        usage: dict[int, int] = {}
        for matching in self.matchings:
            for path in matching.paths:
                for v in path:
                    usage[v] = usage.get(v, 0) + 1
        return max(usage.values(), default=0)


@dataclass(frozen=True)
class ExpansionCertificate:
    eta_cert: float
    rounds: int
    congestion: int
    phi_witness: float


def approx_vertex_expansion(
    g: Graph,
    eta: float,
    inner: Callable[[Graph, float], BalancedCutResult] | None = None,
    state: GameState | None = None,
):
    """Certificate that h(G) is at least some concrete eta_cert, or a
    separation triple with expansion below eta.

    Runs the matching game at congestion c = ceil(1/eta): each round cuts
    the accumulated matching graph W and embeds a matching across the cut,
    or surfaces a triple. Certificates quote sigma(W)/(2 * measured
    congestion) with sigma(W) taken from the conductance certificate of the
    final W (its minimum degree is >= 1 there, so sigma >= Phi).
    """
    if not (0.0 < eta <= 1.0):
        raise DomainError(f"eta must lie in (0, 1], got {eta}")
    require_connected(g, "approx_vertex_expansion")
    if inner is None:
        from .jtree import pipeline_cut

        inner = lambda h, p: pipeline_cut(h, p, "recursive")  # noqa: E731
    n = g.n
    if n < 3:
        # no separation triple can exist on fewer than 3 vertices
        return ExpansionCertificate(float("inf"), 0, 0, 1.0)
    c = math.ceil(1.0 / eta)
    state = state if state is not None else GameState()
    state.congestion_budget = c
    phi_game = 1.0 / (math.log2(max(4, n)) ** 2)
    round_cap = ROUND_CAP_FACTOR * max(1, math.ceil(math.log2(max(2, n))))
    w_edges: list[tuple[int, int]] = []
    for round_no in range(1, round_cap + 1):
        state.rounds = round_no
        w_graph = Graph(n, w_edges)
        if not w_graph.is_connected():
            comps = w_graph.components()
            half, total = [], 0
            for comp in comps[:-1]:  # the last component always stays outside
                if total >= n / 2:
                    break
                half.extend(comp)
                total += len(comp)
            outcome = ("balanced", frozenset(half), phi_game)
            state.history.append("disconnected-split")
        else:
            trim = trim_to_expander(w_graph, phi_game, balcut=inner)
            if trim.kind == "certificate":
                sigma_w = trim.phi  # sigma >= Phi: W connected, min degree >= 1
                congestion = max(1, state.measured_congestion())
                eta_cert = sigma_w / (2.0 * congestion)
                state.history.append(f"certificate phi={sigma_w:.6g}")
                return ExpansionCertificate(eta_cert, round_no, congestion, sigma_w)
            outcome = (trim.kind, trim.cut.members, trim.phi)
            state.history.append(f"{trim.kind} |S|={len(trim.cut.members)}")
        kind, side, phi_witness = outcome
        b_side = sorted(set(range(n)) - set(side))
        a_side = sorted(side)
        step = embed_matching_or_cut(g, a_side, b_side, c)
        if step[0] == "triple":
            triple: SeparationTriple = step[1]
            state.history.append(f"triple h={triple.expansion:.6g}")
            return triple
        matching: EmbeddedMatching = step[1]
        state.matchings.append(matching)
        w_edges.extend(matching.pairs)
        state.history.append(f"matching size={len(matching.pairs)}")
        if kind == "trimmed":
            # residual certified expanding plus one matching across the trim
            # keeps every cut a third as sparse as the certified value
            sigma_w = phi_witness / 3.0
            congestion = max(1, state.measured_congestion())
            eta_cert = sigma_w / (2.0 * congestion)
            state.history.append(f"trimmed-certificate sigma>={sigma_w:.6g}")
            return ExpansionCertificate(eta_cert, round_no, congestion, sigma_w)
    raise GameOverflowError(
        f"cut-matching game exceeded {round_cap} rounds", state.history
    )

