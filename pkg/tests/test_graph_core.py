"""graph_core: types, metrics, triples, and the edge-list format."""
import pytest
from hypothesis import given, strategies as st

from detcut.graph import (
    Cut,
    DomainError,
    Graph,
    ParseError,
    conductance,
    dump_graph,
    parse_graph,
    sparsity,
    triple_expansion,
    validate_triple,
)
from detcut.oracle import brute_conductance

from conftest import complete, cycle, dumbbell, path, petersen, random_connected, star


def test_load_triangle():
    g = parse_graph("3 3\n0 1\n1 2\n2 0")
    assert g.n == 3 and g.m == 3
    assert g.degree == (2, 2, 2)


def test_load_parallel_edges():
    g = parse_graph("2 2\n0 1\n0 1")
    assert g.m == 2
    assert g.total_volume == 4


def test_load_out_of_range_endpoint():
    with pytest.raises(ParseError, match=r"endpoint 5 >= n=4 at line 4"):
        parse_graph("4 3\n0 1\n1 2\n2 5")


def test_load_comments_and_count_mismatch():
    g = parse_graph("# comment\n3 2\n0 1\n# another\n1 2")
    assert g.m == 2
    with pytest.raises(ParseError, match="promises 3"):
        parse_graph("3 3\n0 1\n1 2")


def test_load_self_loop_flag():
    with pytest.raises(ParseError, match="self-loop"):
        parse_graph("2 2\n0 1\n1 1")
    g = parse_graph("2 2\n0 1\n1 1", allow_loops=True)
    assert g.degree == (1, 3)


def test_roundtrip_weighted(tmp_path):
    text = "3 2\n0 1 1.5\n1 2 0.25\n"
    g = parse_graph(text, weighted=True)
    assert g.weight == (1.5, 0.25)
    assert parse_graph(dump_graph(g), weighted=True).weight == g.weight


def test_load_crlf_and_whitespace():
    g = parse_graph("3 2\r\n0 1  \r\n  1 2\r\n")
    assert g.m == 2 and g.degree == (1, 2, 1)


def test_empty_graph_parses():
    g = parse_graph("0 0\n")
    assert g.n == 0 and g.m == 0 and g.is_connected()


def test_degree_sum_is_twice_edges():
    for g in (cycle(8), complete(4), petersen(), star(5)):
        assert sum(g.degree) == 2 * g.m


def test_conductance_c8():
    assert conductance(cycle(8), {0, 1, 2, 3}) == pytest.approx(0.25)


def test_conductance_k4_singleton():
    assert conductance(complete(4), {0}) == pytest.approx(1.0)


def test_conductance_petersen_five_cycle():
    # pinned from the subset-enumeration oracle
    value = conductance(petersen(), {0, 1, 2, 3, 4})
    phi, _ = brute_conductance(petersen())
    assert value == pytest.approx(5 / 15)
    assert phi == pytest.approx(1 / 3)


def test_conductance_rejects_trivial_sides():
    with pytest.raises(DomainError):
        conductance(cycle(4), set())
    with pytest.raises(DomainError):
        conductance(cycle(4), {0, 1, 2, 3})


def test_sparsity_examples():
    assert sparsity(cycle(8), {0, 1, 2, 3}) == pytest.approx(0.5)
    assert sparsity(complete(4), {0}) == pytest.approx(3.0)
    assert sparsity(star(5), {0}) == pytest.approx(5.0)


def test_triple_expansion_examples():
    p5 = path(5)
    t = validate_triple(p5, {0, 1}, {2}, {3, 4})
    assert triple_expansion(t) == pytest.approx(1 / 3)

    s = star(5)
    t = validate_triple(s, {1}, {0}, {2, 3, 4, 5})
    assert triple_expansion(t) == pytest.approx(1 / 2)

    db = dumbbell(5)
    t = validate_triple(db, set(range(4)), {4}, set(range(5, 10)))
    assert triple_expansion(t) == pytest.approx(1 / 5)


def test_validate_triple_triangle():
    # K3 admits no separation triple at all: every split leaves an L-R edge
    tri = complete(3)
    with pytest.raises(DomainError, match=r"edge \(0, 2\) joins L and R"):
        validate_triple(tri, {0}, {1}, {2})
    with pytest.raises(DomainError, match=r"edge \(0, 1\) joins L and R"):
        validate_triple(tri, {0}, set(), {1, 2})


def test_validate_triple_path():
    t = validate_triple(path(3), {0}, {1}, {2})
    assert t.expansion == pytest.approx(1 / 2)


def test_validate_triple_error_kinds():
    g = path(4)
    with pytest.raises(DomainError, match="empty L"):
        validate_triple(g, set(), {1}, {0, 2, 3})
    with pytest.raises(DomainError, match="empty R"):
        validate_triple(g, {0, 2, 3}, {1}, set())
    with pytest.raises(DomainError, match="overlap"):
        validate_triple(g, {0, 1}, {1}, {2, 3})
    with pytest.raises(DomainError, match="partition"):
        validate_triple(g, {0}, {1}, {3})


def test_cut_cached_boundary_matches_recount():
    for seed in range(5):
        g = random_connected(10, 12, seed)
        cut = Cut.from_members(g, {0, 1, 2})
        assert cut.boundary == g.boundary_size(frozenset({0, 1, 2}))
        assert cut.volume_in + cut.volume_out == 2 * g.m


@given(st.integers(3, 10), st.integers(0, 2**30))
def test_conductance_symmetry(n, seed):
    g = random_connected(n, n, seed % 1000)
    members = {v for v in range(n) if (seed >> v) & 1}
    if not members or len(members) == n:
        members = {0}
    complement = set(range(n)) - members
    assert conductance(g, members) == pytest.approx(conductance(g, complement))
    assert sparsity(g, members) == pytest.approx(sparsity(g, complement))


def test_regular_graph_sparsity_conductance_relation():
    g = cycle(9)  # 2-regular
    for members in ({0, 1}, {2, 3, 4}, {0, 4, 8}):
        if len(members) <= g.n / 2:
            assert sparsity(g, members) == pytest.approx(2 * conductance(g, members))


def test_triple_symmetry():
    g = path(5)
    t = validate_triple(g, {0, 1}, {2}, {3, 4})
    r = validate_triple(g, {3, 4}, {2}, {0, 1})
    assert t.expansion == r.expansion


def test_graph_immutable():
    g = cycle(3)
    with pytest.raises(AttributeError):
        g.n = 5


def test_self_loop_never_in_boundary():
    g = Graph(3, [(0, 1), (1, 2), (1, 1)], allow_loops=True)
    assert g.degree[1] == 4
    assert g.boundary_size(frozenset({1})) == 2
    # min side is the complement (vol 2); the loop still never crosses
    assert conductance(g, {1}) == pytest.approx(2 / 2)
