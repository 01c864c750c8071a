import math
import statistics
from fractions import Fraction
from itertools import combinations

import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import to_networkx
from wcolour.config import PATTERN_CONFIG
from wcolour.errors import InvalidInputError
from wcolour.graph import Graph, gen_gnp, write_edge_list
from wcolour.patterns import (
    PatternGraph,
    automorphism_count,
    builtin_pattern,
    count_copies,
    enumerate_copies,
    expected_copy_count,
    is_balanced,
    max_subgraph_density,
    resolve_pattern,
)
from wcolour.seeding import Seed


def subgraph_density_by_subsets(gamma):
    h = to_networkx(gamma.graph)
    best = Fraction(0)
    for size in range(1, gamma.v0 + 1):
        for subset in combinations(range(gamma.v0), size):
            best = max(best, Fraction(h.subgraph(subset).number_of_edges(), size))
    return best


@pytest.mark.parametrize(
    "name, v0, e0, aut",
    [("k2", 2, 1, 2), ("path3", 3, 2, 2), ("triangle", 3, 3, 6), ("c4", 4, 4, 8), ("k4", 4, 6, 24)],
)
def test_builtin_patterns(name, v0, e0, aut):
    gamma = builtin_pattern(name)
    assert (gamma.v0, gamma.e0) == (v0, e0)
    assert automorphism_count(gamma) == aut
    assert is_balanced(gamma)


def test_every_configured_pattern_loads():
    for name in PATTERN_CONFIG:
        assert PatternGraph.builtin(name).name == name


@pytest.mark.parametrize(
    "v0, edges, balanced",
    [
        (4, [(0, 1), (0, 2), (1, 2)], False),
        (4, [(0, 1), (0, 2), (1, 2), (2, 3)], True),
        (5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)], False),
        (6, [(0, 1), (2, 3), (4, 5)], True),
    ],
)
def test_balancedness(v0, edges, balanced):
    gamma = PatternGraph.from_edges("custom", v0, edges)
    assert is_balanced(gamma) is balanced
    assert max_subgraph_density(gamma) == subgraph_density_by_subsets(gamma)


def test_edgeless_pattern_has_no_balancedness():
    with pytest.raises(InvalidInputError):
        is_balanced(PatternGraph.from_edges("empty", 3, []))


def test_pattern_size_limit():
    with pytest.raises(InvalidInputError):
        PatternGraph.from_graph("big", Graph.empty(11))


def test_resolve_pattern(tmp_path):
    assert resolve_pattern("K4").name == "k4"
    write_edge_list(Graph.complete(3), tmp_path / "tri.el")
    assert resolve_pattern(str(tmp_path / "tri.el")).e0 == 3
    with pytest.raises(InvalidInputError):
        resolve_pattern("pentagon")


@pytest.mark.parametrize(
    "name, expected",
    [("k2", 10), ("triangle", 10), ("path3", 30), ("c4", 15), ("k4", 5)],
)
def test_copies_in_k5(name, expected):
    assert count_copies(Graph.complete(5), builtin_pattern(name)) == expected


@pytest.mark.parametrize("name", list(PATTERN_CONFIG))
@pytest.mark.parametrize("seed", range(3))
def test_copies_match_networkx(name, seed):
    g = gen_gnp(25, 0.3, Seed(seed))
    gamma = builtin_pattern(name)
    matcher = GraphMatcher(to_networkx(g), to_networkx(gamma.graph))
    monomorphisms = sum(1 for _ in matcher.subgraph_monomorphisms_iter())
    assert count_copies(g, gamma) * automorphism_count(gamma) == monomorphisms


def test_copies_are_distinct_and_edge_aligned():
    g = gen_gnp(20, 0.5, Seed(2))
    gamma = builtin_pattern("c4")
    found = list(enumerate_copies(g, gamma))
    assert len(found) == len(set(found))
    for t in found:
        assert len(set(t.vertices)) == gamma.v0
        for (a, b), (u, v) in zip(gamma.edges, t.edges):
            assert {t.vertices[a], t.vertices[b]} == {u, v}
            assert g.has_edge(u, v)


def test_copies_in_graph_without_edges():
    assert count_copies(Graph.empty(6), builtin_pattern("triangle")) == 0


def test_expected_copy_count():
    assert expected_copy_count(10, 1.0, builtin_pattern("triangle")) == pytest.approx(120)
    assert expected_copy_count(10, 0.5, builtin_pattern("k2")) == pytest.approx(22.5)
    with pytest.raises(InvalidInputError):
        expected_copy_count(10, 2.0, builtin_pattern("k2"))


@pytest.mark.slow
def test_copy_counts_match_expectation_on_average():
    seeds = 2000
    patterns = [builtin_pattern(name) for name in ("triangle", "path3", "k4")]
    counts = {gamma.name: [] for gamma in patterns}
    for seed in range(seeds):
        g = gen_gnp(60, 0.1, Seed(seed))
        for gamma in patterns:
            counts[gamma.name].append(count_copies(g, gamma))
    assert expected_copy_count(60, 0.1, patterns[0]) == pytest.approx(34.22)
    assert statistics.fmean(counts["triangle"]) == pytest.approx(34.22, rel=0.05)
    for gamma in patterns:
        values = counts[gamma.name]
        stderr = statistics.stdev(values) / math.sqrt(seeds)
        assert abs(statistics.fmean(values) - expected_copy_count(60, 0.1, gamma)) <= 3 * stderr
