"""flow: vertex-capacitated max flow, Menger queries, path decomposition."""
import pytest

from detcut.flow import INF, FlowNetwork, max_flow, st_vertex_connectivity
from detcut.graph import DomainError
from detcut.oracle import brute_kappa_st

from conftest import complete, cycle, glued_cliques, path, random_connected


def test_st_k4_adjacent_certificate():
    kind, value, cut = st_vertex_connectivity(complete(4), 0, 1, 3)
    assert kind == "certificate"
    assert value == 3


def test_st_c6_two_cut():
    kind, value, cut = st_vertex_connectivity(cycle(6), 0, 3, 3)
    assert kind == "cut"
    assert value == 2
    assert cut in ({1, 5}, {2, 4}, {1, 4}, {2, 5})
    g = cycle(6)
    comps = g.components(cut)
    assert len(comps) > 1


def test_st_glued_cliques_shared_three():
    g = glued_cliques(5, 3)
    x = 4  # private to the left clique
    y = g.n - 1  # private to the right clique
    kind, value, cut = st_vertex_connectivity(g, x, y, 4)
    assert kind == "cut"
    assert value == 3
    assert cut == frozenset({0, 1, 2})
    assert brute_kappa_st(g, x, y) == 3


def test_max_flow_k4_all_unit_caps():
    g = complete(4)
    net = FlowNetwork(g, {v: 1.0 for v in range(4)}, 0, 3)
    result = max_flow(net)
    assert result.value == 3
    assert len(result.paths) == 3
    # one direct path plus two internal vertex-disjoint paths
    assert (0, 3) in result.paths
    internal = [p for p in result.paths if len(p) == 3]
    assert sorted(p[1] for p in internal) == [1, 2]


def test_max_flow_path_min_cut():
    g = path(3)
    net = FlowNetwork(g, {1: 1.0}, 0, 2)
    result = max_flow(net, bound=INF)
    assert result.value == 1
    assert result.min_cut_vertices == frozenset({1})
    net = FlowNetwork(g, {1: 1.0}, 0, 2)
    result = max_flow(net, bound=5)
    assert result.value == 1
    assert result.min_cut_vertices == frozenset({1})
    assert result.paths == ((0, 1, 2),)


def test_max_flow_bound_zero():
    net = FlowNetwork(path(3), {1: 1.0}, 0, 2)
    result = max_flow(net, bound=0)
    assert result.value == 0
    assert result.paths == ()


def test_decompose_c4_opposite_corners():
    g = cycle(4)
    net = FlowNetwork(g, {1: 1.0, 3: 1.0}, 0, 2)
    result = max_flow(net, bound=8)
    assert result.value == 2
    assert sorted(result.paths) == [(0, 1, 2), (0, 3, 2)]


def test_decompose_respects_capacities():
    g = complete(4)
    net = FlowNetwork(g, {v: 1.0 for v in range(4)}, 0, 3)
    result = max_flow(net)
    usage = {}
    for p in result.paths:
        for v in p[1:-1]:
            usage[v] = usage.get(v, 0) + 1
    for v, used in usage.items():
        assert used <= 1
    assert len(result.paths) == result.value


def test_st_rejects_same_vertex():
    with pytest.raises(DomainError):
        st_vertex_connectivity(cycle(4), 1, 1, 2)


def test_menger_duality_small_graphs():
    cases = 0
    for n in range(4, 8):
        for seed in range(4):
            g = random_connected(n, n // 2, seed)
            for x in range(n):
                for y in range(x + 1, n):
                    want = brute_kappa_st(g, x, y)
                    kind, value, cut = st_vertex_connectivity(g, x, y, n)
                    if kind == "cut":
                        assert value == want
                        assert len(cut) == value
                        comps = g.components(cut)
                        cx = next(i for i, c in enumerate(comps) if x in c)
                        cy = next(i for i, c in enumerate(comps) if y in c)
                        assert cx != cy
                    else:
                        assert want >= min(n, value) or value == g.n - 1
                        assert want >= n or value >= want
                    cases += 1
    assert cases > 100


def test_determinism():
    g = random_connected(9, 8, 3)
    runs = set()
    for _ in range(3):
        net = FlowNetwork(g, {v: 1.0 for v in range(9) if v not in (0, 8)}, 0, 8)
        runs.add(max_flow(net, bound=9).paths)
    assert len(runs) == 1
