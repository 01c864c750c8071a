import io

import pytest

from wcolour.errors import InvalidInputError
from wcolour.graph import (
    EdgeWeightMap,
    Graph,
    degree_stats,
    format_edge_list,
    gen_gnp,
    gen_gnp_beta,
    p_from_beta,
    parse_edge_list,
    parse_weights,
    read_edge_list,
    read_weights,
    write_edge_list,
    write_weights,
)
from wcolour.seeding import Seed


def test_edges_are_normalised_and_sorted():
    g = Graph.from_edges(3, [(2, 1), (0, 1)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.adjacency == ((1,), (0, 2), (1,))
    assert g.has_edge(2, 1) and not g.has_edge(0, 2)
    assert g.degree(1) == 2


@pytest.mark.parametrize(
    "n, edges",
    [
        (3, [(1, 1)]),
        (3, [(0, 3)]),
        (3, [(0, 1), (1, 0)]),
        (0, []),
    ],
)
def test_bad_graphs_rejected(n, edges):
    with pytest.raises(InvalidInputError):
        Graph.from_edges(n, edges)


def test_complete_and_empty():
    assert Graph.complete(5).m == 10
    assert Graph.empty(4).m == 0
    assert Graph.complete(4).edge_density() == 1.0
    assert Graph.empty(1).edge_density() == 0.0


def test_induced_and_with_edges():
    g = Graph.complete(4)
    sub = g.induced([0, 1, 2])
    assert sub.n == 4
    assert sub.edges == ((0, 1), (0, 2), (1, 2))
    assert g.with_edges([(2, 3)]).edges == ((2, 3),)
    with pytest.raises(InvalidInputError):
        sub.with_edges([(0, 3)])


def test_gnp_extremes():
    assert gen_gnp(6, 1.0, Seed(1)).edges == Graph.complete(6).edges
    assert gen_gnp(6, 0.0, Seed(1)).m == 0
    assert gen_gnp(1, 0.5, Seed(1)).m == 0


@pytest.mark.parametrize("p", [-0.1, 1.5, float("nan")])
def test_gnp_rejects_bad_p(p):
    with pytest.raises(InvalidInputError):
        gen_gnp(5, p, Seed(0))


def test_gnp_is_reproducible():
    a = gen_gnp(50, 0.5, Seed(3, (0,)))
    b = gen_gnp(50, 0.5, Seed(3, (0,)))
    c = gen_gnp(50, 0.5, Seed(4, (0,)))
    assert a.edges == b.edges
    assert a.edges != c.edges


def test_gnp_agrees_on_common_pairs_across_n():
    small = gen_gnp(20, 0.3, Seed(9))
    large = gen_gnp(30, 0.3, Seed(9))
    assert large.induced(range(20)).edges == small.edges


def test_gnp_edge_count_matches_expectation():
    g = gen_gnp(200, 0.1, Seed(12))
    # mean 1990, standard deviation about 42
    assert abs(g.m - 1990) < 250


def test_p_from_beta():
    assert p_from_beta(100, 0.5) == pytest.approx(0.1)
    assert p_from_beta(1, 0.5) == 1.0
    assert p_from_beta(10, -1.0) == 1.0
    assert gen_gnp_beta(5, 0.0, Seed(0)).m == 10


def test_degree_stats():
    degrees, max_degree = degree_stats(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    assert degrees == (3, 1, 1, 1)
    assert max_degree == 3


def test_weight_map_lookup_and_validation(triangle):
    w = EdgeWeightMap.from_dict(triangle, {(1, 0): 2, (0, 2): 3, (1, 2): 1})
    assert w.weight(0, 1) == 2
    assert w[(2, 0)] == 3
    assert w.max_weight() == 3
    with pytest.raises(InvalidInputError):
        EdgeWeightMap(triangle, (1, 0, 1))
    with pytest.raises(InvalidInputError):
        EdgeWeightMap(triangle, (1, 1))
    with pytest.raises(InvalidInputError):
        EdgeWeightMap.from_dict(triangle, {(0, 1): 1})
    with pytest.raises(InvalidInputError):
        w.weight(0, 0)


def test_max_weight_of_edgeless_graph_is_zero():
    assert EdgeWeightMap.constant(Graph.empty(3)).max_weight() == 0


def test_restrict(triangle):
    w = EdgeWeightMap(triangle, (1, 2, 3))
    sub = triangle.with_edges([(1, 2)])
    assert w.restrict(sub).values == (3,)


def test_edge_list_files(tmp_path, triangle):
    w = EdgeWeightMap(triangle, (1, 2, 3))
    write_edge_list(triangle, tmp_path / "g.el")
    write_weights(w, tmp_path / "w.el")
    g = read_edge_list(tmp_path / "g.el")
    assert g.edges == triangle.edges and g.n == 3
    assert read_weights(tmp_path / "w.el", g).values == (1, 2, 3)
    assert format_edge_list(triangle).splitlines()[0] == "3 3"


@pytest.mark.parametrize(
    "text",
    ["", "3 2\n0 1\n", "3 1\nx y\n", "3\n", "3 1\n0 0\n"],
)
def test_malformed_edge_lists(text):
    with pytest.raises(InvalidInputError):
        parse_edge_list(io.StringIO(text))


def test_comments_are_ignored():
    g = parse_edge_list(io.StringIO("# host\n2 1\n0 1\n"))
    assert g.edges == ((0, 1),)


def test_malformed_weights(triangle):
    with pytest.raises(InvalidInputError):
        parse_weights(io.StringIO("0 1 two\n"), triangle)
    with pytest.raises(InvalidInputError):
        parse_weights(io.StringIO("0 1 1\n"), triangle)


@pytest.mark.slow
def test_pair_frequency_over_seeds():
    trials, p = 2000, 0.3
    graphs = [gen_gnp(12, p, Seed(seed)) for seed in range(trials)]
    tolerance = 4 * (p * (1 - p) / trials) ** 0.5
    for u, v in [(0, 1), (3, 7), (10, 11)]:
        frequency = sum(g.has_edge(u, v) for g in graphs) / trials
        assert abs(frequency - p) <= tolerance
