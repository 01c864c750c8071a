import math

import numpy as np
import pytest

from wcolour.errors import InvalidInputError
from wcolour.graph import Graph, gen_gnp
from wcolour.seeding import Seed
from wcolour.weights import WeightDistributionSpec, sample_weights


def test_parse_and_format():
    assert WeightDistributionSpec.parse("constant:3") == WeightDistributionSpec.constant(3)
    assert WeightDistributionSpec.parse("Pareto:2.5") == WeightDistributionSpec.pareto(2.5)
    assert str(WeightDistributionSpec.parse("pareto:2.5")) == "pareto:2.5"
    assert str(WeightDistributionSpec.parse("constant:1")) == "constant:1"


@pytest.mark.parametrize("text", ["foo:1", "pareto", "constant:0", "pareto:-1", "constant:x", "pareto:inf"])
def test_parse_rejects(text):
    with pytest.raises(InvalidInputError):
        WeightDistributionSpec.parse(text)


def test_means():
    assert WeightDistributionSpec.constant(3).mean() == 3.0
    assert WeightDistributionSpec.pareto(6).mean() == pytest.approx(1 + math.pi**6 / 945)
    assert WeightDistributionSpec.pareto(2).mean() == pytest.approx(1 + math.pi**2 / 6)
    assert math.isinf(WeightDistributionSpec.pareto(1).mean())
    assert math.isinf(WeightDistributionSpec.pareto(0.5).mean())


def test_tail_and_z():
    d = WeightDistributionSpec.pareto(2)
    assert d.tail(1) == 1.0
    assert d.tail(2) == 1.0
    assert d.tail(3) == pytest.approx(0.25)
    assert d.z(1) == 0.0
    assert d.z(2) == pytest.approx(0.75)
    c = WeightDistributionSpec.constant(2)
    assert c.tail(2) == 1.0 and c.tail(3) == 0.0
    assert c.z(1) == 0.0 and c.z(2) == 1.0


@pytest.mark.parametrize(
    "dist, k",
    [
        (WeightDistributionSpec.constant(1), 1),
        (WeightDistributionSpec.constant(3), 3),
        (WeightDistributionSpec.pareto(1), 2),
        (WeightDistributionSpec.pareto(6), 2),
        (WeightDistributionSpec.pareto(0.5), 4),
    ],
)
def test_default_k_is_smallest_median_cut(dist, k):
    assert dist.default_k() == k
    assert dist.z(k) >= 0.5
    assert k == 1 or dist.z(k - 1) < 0.5


def test_finite_moments():
    assert WeightDistributionSpec.constant(1).has_finite_moment(10)
    assert WeightDistributionSpec.pareto(2.5).has_finite_moment(2)
    assert not WeightDistributionSpec.pareto(2.5).has_finite_moment(2.5)


def test_constant_draws():
    assert set(WeightDistributionSpec.constant(4).draw(50, Seed(0)).tolist()) == {4}


def test_pareto_draws_match_the_law():
    d = WeightDistributionSpec.pareto(2)
    w = d.draw(100_000, Seed(1))
    assert w.min() >= 2
    assert (w >= 3).mean() == pytest.approx(d.tail(3), abs=0.01)
    assert (w >= 5).mean() == pytest.approx(d.tail(5), abs=0.01)


def test_pareto_sample_mean():
    d = WeightDistributionSpec.pareto(6)
    assert d.draw(100_000, Seed(2)).mean() == pytest.approx(d.mean(), abs=0.03)


def test_small_alpha_does_not_overflow():
    w = WeightDistributionSpec.pareto(0.05).transform(np.array([0.0, 0.999999]))
    assert w[0] == 1
    assert w[1] == 2**62


def test_sample_weights_follow_pair_keys():
    d = WeightDistributionSpec.pareto(3)
    small = gen_gnp(20, 0.4, Seed(5, (0,)))
    large = gen_gnp(30, 0.4, Seed(5, (0,)))
    ws = sample_weights(small, d, Seed(5, (1,)))
    wl = sample_weights(large, d, Seed(5, (1,)))
    for (u, v), x in ws.items():
        assert wl.weight(u, v) == x


def test_sample_weights_on_empty_graph():
    assert sample_weights(Graph.empty(3), WeightDistributionSpec.pareto(3), Seed(0)).values == ()


def test_ceiled_pareto_tail_sandwich():
    draws = 1_000_000
    w = WeightDistributionSpec.pareto(2.5).draw(draws, Seed(7))
    frequency = float((w >= 10).mean())
    upper = 9 ** -2.5
    stderr = math.sqrt(upper * (1 - upper) / draws)
    assert 10 ** -2.5 - 3 * stderr <= frequency <= upper + 3 * stderr
