import io
import json
from itertools import product

import numpy as np
import pytest

from wcolour.colouring import (
    Colouring,
    exact_chi_w,
    greedy_colour,
    local_average_bound,
    max_incident_weight,
    random_order,
    two_stage_colour,
    verify_weighted,
    vertex_weight_sums,
)
from wcolour.errors import InvalidInputError
from wcolour.graph import EdgeWeightMap, Graph, gen_gnp
from wcolour.seeding import Seed
from wcolour.weights import WeightDistributionSpec, sample_weights


def brute_force_chi_w(g, w):
    """Smallest span admitting a proper weighted colouring, by enumeration."""
    span = 1
    while True:
        for colours in product(range(1, span + 1), repeat=g.n):
            if verify_weighted(g, w, Colouring(colours)):
                return span
        span += 1


def random_instance(n, p, seed):
    g = gen_gnp(n, p, Seed(seed, (0,)))
    rng = np.random.default_rng(seed)
    return g, EdgeWeightMap(g, tuple(int(x) for x in rng.integers(1, 4, g.m)))


def test_verify_weighted(triangle, triangle_weights_2):
    assert verify_weighted(triangle, triangle_weights_2, Colouring((1, 3, 5)))
    assert not verify_weighted(triangle, triangle_weights_2, Colouring((1, 2, 4)))
    with pytest.raises(InvalidInputError):
        verify_weighted(triangle, triangle_weights_2, Colouring((1, 3)))


def test_vertex_sums_and_max_incident():
    g = Graph.from_edges(4, [(0, 1), (0, 2)])
    w = EdgeWeightMap(g, (2, 5))
    assert vertex_weight_sums(g, w) == (7, 2, 5, 0)
    assert max_incident_weight(g, w, 0) == 5
    assert max_incident_weight(g, w, 3) == 0


def test_greedy_interval_exclusion(triangle, triangle_weights_2):
    f = greedy_colour(triangle, triangle_weights_2)
    assert f.colours == (1, 3, 5)


def test_greedy_with_unit_weights_is_proper():
    g = gen_gnp(60, 0.2, Seed(4))
    w = EdgeWeightMap.constant(g)
    f = greedy_colour(g, w)
    assert verify_weighted(g, w, f)
    assert f.max_colour <= max(g.degree(v) for v in range(g.n)) + 1
    assert local_average_bound(g, w) == max(g.degree(v) for v in range(g.n)) + 1


@pytest.mark.parametrize("seed", range(5))
def test_greedy_respects_local_bound(seed):
    g = gen_gnp(40, 0.3, Seed(seed, (0,)))
    w = sample_weights(g, WeightDistributionSpec.pareto(3), Seed(seed, (1,)))
    for order in (None, random_order(g.n, Seed(seed, (3,)))):
        f = greedy_colour(g, w, order)
        assert verify_weighted(g, w, f)
        assert f.max_colour <= local_average_bound(g, w)


def test_greedy_rejects_bad_order(triangle, triangle_weights_2):
    with pytest.raises(InvalidInputError):
        greedy_colour(triangle, triangle_weights_2, (0, 0, 1))


def test_random_order_is_a_reproducible_permutation():
    order = random_order(10, Seed(1))
    assert sorted(order) == list(range(10))
    assert order == random_order(10, Seed(1))


def test_local_bound_on_empty_graph():
    g = Graph.empty(3)
    assert local_average_bound(g, EdgeWeightMap.constant(g)) == 1


@pytest.mark.parametrize(
    "g, values, chi",
    [
        (Graph.complete(3), (2, 2, 2), 5),
        (Graph.complete(4), (1,) * 6, 4),
        (Graph.from_edges(3, [(0, 1), (1, 2)]), (3, 1), 4),
        (Graph.from_edges(2, [(0, 1)]), (7,), 8),
        (Graph.empty(3), (), 1),
    ],
)
def test_exact_known_values(g, values, chi):
    result = exact_chi_w(g, EdgeWeightMap(g, values))
    assert result.proven
    assert result.chi_w == chi
    assert verify_weighted(g, EdgeWeightMap(g, values), result.colouring)
    assert result.colouring.max_colour == chi


@pytest.mark.parametrize("seed", range(8))
def test_exact_matches_brute_force(seed):
    g, w = random_instance(5, 0.6, seed)
    result = exact_chi_w(g, w)
    assert result.proven
    assert result.chi_w == brute_force_chi_w(g, w)
    assert 1 + w.max_weight() <= result.chi_w <= greedy_colour(g, w).max_colour


def test_exact_budget_returns_incumbent():
    g = Graph.complete(8)
    result = exact_chi_w(g, EdgeWeightMap.constant(g), budget=1)
    assert not result.proven
    assert result.chi_w == 8
    with pytest.raises(InvalidInputError):
        exact_chi_w(g, EdgeWeightMap.constant(g), budget=0)


def test_two_stage_without_bad_vertices():
    g = gen_gnp(200, 0.1, Seed(8))
    w = EdgeWeightMap.constant(g)
    # threshold 2 * 200 * 0.1 * 1.69 = 67.6, far above any degree
    f, report = two_stage_colour(g, w, mu=2.0, p=0.1, eps=0.3)
    assert verify_weighted(g, w, f)
    assert report.bad_vertices == ()
    assert report.L == 2 * 68 + 1
    assert f.max_colour <= report.L


def test_two_stage_stacks_bad_vertices():
    star = Graph.from_edges(11, [(0, v) for v in range(1, 11)])
    w = EdgeWeightMap.constant(star)
    f, report = two_stage_colour(star, w, mu=1.0, p=0.1, eps=0.3)
    assert report.bad_vertices == (0,)
    assert report.L == 5
    assert report.M_tot == 1
    assert f.colours == (7,) + (1,) * 10
    assert report.max_colour == report.L + 2 * report.M_tot
    assert json.loads(report.to_json())["M_v"] == {"0": 1}


def test_two_stage_with_every_vertex_bad():
    star = Graph.from_edges(21, [(0, v) for v in range(1, 21)])
    w = EdgeWeightMap.constant(star)
    f, report = two_stage_colour(star, w, mu=1.0, p=0.01, eps=0.3)
    assert len(report.bad_vertices) == 21
    assert verify_weighted(star, w, f)
    assert f.max_colour == report.L + 2 * 21


@pytest.mark.parametrize(
    "mu, p, eps",
    [(0.5, 0.1, 0.3), (float("inf"), 0.1, 0.3), (1.0, 1.5, 0.3), (1.0, 0.1, 0.5), (1.0, 0.1, 0.0)],
)
def test_two_stage_rejects(triangle, triangle_weights_2, mu, p, eps):
    with pytest.raises(InvalidInputError):
        two_stage_colour(triangle, triangle_weights_2, mu, p, eps)


def test_colouring_files(tmp_path):
    f = Colouring((3, 1, 2))
    f.write(tmp_path / "f.txt")
    assert Colouring.read(tmp_path / "f.txt") == f
    assert f.max_colour == 3


@pytest.mark.parametrize("text", ["0 1\n2 3\n", "0 x\n", "0 0\n"])
def test_malformed_colourings(text):
    with pytest.raises(InvalidInputError):
        Colouring.parse(io.StringIO(text))


def chromatic_number(g):
    """Fewest colours in a proper colouring, by backtracking over vertex ids."""
    colours = [0] * g.n

    def fits(k, v=0):
        if v == g.n:
            return True
        for c in range(1, k + 1):
            if all(colours[u] != c for u in g.adjacency[v] if u < v):
                colours[v] = c
                if fits(k, v + 1):
                    return True
        return False

    return next(k for k in range(1, g.n + 1) if fits(k))


ORACLE_DISTS = [
    WeightDistributionSpec.constant(1),
    WeightDistributionSpec.constant(2),
    WeightDistributionSpec.constant(3),
    WeightDistributionSpec.pareto(6),
]


def weighted_instances(count, sizes, densities):
    for i in range(count):
        n = sizes[i % len(sizes)]
        p = densities[i // len(sizes) % len(densities)]
        dist = ORACLE_DISTS[i // (len(sizes) * len(densities)) % len(ORACLE_DISTS)]
        g = gen_gnp(n, p, Seed(i, (0,)))
        yield g, sample_weights(g, dist, Seed(i, (1,))), dist, p


def test_chromatic_oracle_on_known_graphs():
    assert chromatic_number(Graph.empty(4)) == 1
    assert chromatic_number(Graph.complete(5)) == 5
    assert chromatic_number(Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])) == 3


@pytest.mark.slow
def test_exact_greedy_local_chain_on_small_instances():
    checked = 0
    for g, w, dist, _ in weighted_instances(500, range(4, 10), (0.3, 0.6)):
        result = exact_chi_w(g, w)
        assert result.proven
        assert verify_weighted(g, w, result.colouring)
        assert result.colouring.max_colour == result.chi_w
        assert result.chi_w <= greedy_colour(g, w).max_colour <= local_average_bound(g, w)
        if dist == WeightDistributionSpec.constant(1):
            assert result.chi_w == chromatic_number(g)
            checked += 1
    assert checked > 100


@pytest.mark.slow
def test_greedy_and_two_stage_are_always_proper():
    for i, (g, w, dist, p) in enumerate(weighted_instances(1000, range(5, 41, 5), (0.1, 0.3, 0.6))):
        for k in range(5):
            f = greedy_colour(g, w, random_order(g.n, Seed(i, (3, k))))
            assert verify_weighted(g, w, f)
        f, report = two_stage_colour(g, w, dist.mean(), p, 0.3)
        assert verify_weighted(g, w, f)
        if report.bad_vertices:
            assert f.max_colour == report.L + 2 * report.M_tot


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_two_stage_on_dense_pareto_graphs(seed):
    dist = WeightDistributionSpec.pareto(6)
    g = gen_gnp(200, 0.3, Seed(seed, (0,)))
    w = sample_weights(g, dist, Seed(seed, (1,)))
    f, report = two_stage_colour(g, w, dist.mean(), 0.3, 0.3)
    assert verify_weighted(g, w, f)
    bad = set(report.bad_vertices)
    assert all(f[v] <= report.L for v in range(g.n) if v not in bad)
    if bad:
        assert f.max_colour == report.L + 2 * report.M_tot
    else:
        assert f.max_colour <= report.L
