import networkx as nx
import pytest

from wcolour.graph import EdgeWeightMap, Graph


def to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


@pytest.fixture
def triangle() -> Graph:
    return Graph.complete(3)


@pytest.fixture
def triangle_weights_2(triangle) -> EdgeWeightMap:
    return EdgeWeightMap.constant(triangle, 2)


@pytest.fixture(autouse=True)
def isolated_config_dir(tmp_path, monkeypatch):
    """Keep every test away from the real user defaults file and worker settings."""
    monkeypatch.setenv("WCOLOUR_CONFIG_DIR", str(tmp_path / "wcolour-config"))
    monkeypatch.delenv("WCOLOUR_WORKERS", raising=False)
