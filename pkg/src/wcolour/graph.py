"""Simple undirected graphs, per-edge integer weights, G(n, p) generation and edge-list I/O."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .errors import InvalidInputError
from .seeding import Seed, hashed_uniforms, pair_index, pairs_from_index

log = logging.getLogger(__name__)

Edge = tuple[int, int]

# pairs hashed per numpy call in gen_gnp
_CHUNK = 1 << 22


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1.

    `edges` is sorted with u < v in every pair; `adjacency` holds sorted
    neighbour tuples; `edge_set` answers membership in O(1).
    """

    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    edge_set: frozenset[Edge] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> Graph:
        if n < 1:
            raise InvalidInputError(f"graph needs n >= 1, got {n}")
        normalised = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidInputError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInputError(f"edge ({u}, {v}) outside vertex range [0, {n})")
            e = (u, v) if u < v else (v, u)
            if e in normalised:
                raise InvalidInputError(f"duplicate edge {e}")
            normalised.add(e)
        ordered = tuple(sorted(normalised))
        neighbours: list[list[int]] = [[] for _ in range(n)]
        for u, v in ordered:
            neighbours[u].append(v)
            neighbours[v].append(u)
        adjacency = tuple(tuple(sorted(nb)) for nb in neighbours)
        return cls(n, ordered, adjacency, frozenset(ordered))

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls.from_edges(n, ())

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_edges(n, ((u, v) for v in range(n) for u in range(v)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_set

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edge_density(self) -> float:
        pairs = self.n * (self.n - 1) // 2
        return self.m / pairs if pairs else 0.0

    def with_edges(self, edges: Iterable[Edge]) -> Graph:
        """Subgraph on the same vertex set keeping only `edges` (which must be edges of self)."""
        kept = list(edges)
        for u, v in kept:
            if not self.has_edge(u, v):
                raise InvalidInputError(f"({u}, {v}) is not an edge of the host graph")
        return Graph.from_edges(self.n, kept)

    def induced(self, vertices: Iterable[int]) -> Graph:
        """Subgraph on the same vertex set keeping the edges with both ends in `vertices`."""
        keep = set(vertices)
        return Graph.from_edges(self.n, (e for e in self.edges if e[0] in keep and e[1] in keep))


@dataclass(frozen=True)
class EdgeWeightMap:
    """Integer weight >= 1 for every edge of a host graph, aligned with `graph.edges`."""

    graph: Graph = field(repr=False)
    values: tuple[int, ...]
    _index: dict[Edge, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.values) != self.graph.m:
            raise InvalidInputError(
                f"weight map has {len(self.values)} entries for a graph with {self.graph.m} edges"
            )
        values = tuple(int(x) for x in self.values)
        bad = [x for x in values if x < 1]
        if bad:
            raise InvalidInputError(f"edge weights must be >= 1, found {bad[0]}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.graph.edges)})

    @classmethod
    def constant(cls, g: Graph, w0: int = 1) -> EdgeWeightMap:
        return cls(g, (w0,) * g.m)

    @classmethod
    def from_dict(cls, g: Graph, weights: dict[Edge, int]) -> EdgeWeightMap:
        lookup = {((u, v) if u < v else (v, u)): w for (u, v), w in weights.items()}
        if set(lookup) != g.edge_set:
            raise InvalidInputError("weight map domain differs from the graph's edge set")
        return cls(g, tuple(lookup[e] for e in g.edges))

    def weight(self, u: int, v: int) -> int:
        try:
            return self.values[self._index[(u, v) if u < v else (v, u)]]
        except KeyError:
            raise InvalidInputError(f"({u}, {v}) is not an edge of the host graph") from None

    def __getitem__(self, edge: Edge) -> int:
        return self.weight(*edge)

    def items(self):
        return zip(self.graph.edges, self.values)

    def max_weight(self) -> int:
        """Largest edge weight; 0 on an edgeless graph."""
        return max(self.values, default=0)

    def restrict(self, sub: Graph) -> EdgeWeightMap:
        """Weights of a subgraph on the same vertex set."""
        return EdgeWeightMap(sub, tuple(self.weight(u, v) for u, v in sub.edges))


def gen_gnp(n: int, p: float, seed: Seed) -> Graph:
    """Binomial random graph: each of the C(n,2) pairs is an edge independently with probability p."""
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    if not (0.0 <= p <= 1.0) or math.isnan(p):
        raise InvalidInputError(f"p must lie in [0, 1], got {p}")

    total = n * (n - 1) // 2
    key = seed.key()
    chunks = []
    for start in range(0, total, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        chunks.append(k[hashed_uniforms(key, k) < p])
    selected = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.int64)
    u, v = pairs_from_index(selected)
    log.debug("G(%d, %g) seed %s: %d edges", n, p, seed, selected.size)
    return Graph.from_edges(n, zip(u.tolist(), v.tolist()))


def p_from_beta(n: int, beta: float) -> float:
    """Edge probability n^(-beta), clamped to [0, 1]."""
    return min(1.0, max(0.0, float(n) ** (-beta)))


def gen_gnp_beta(n: int, beta: float, seed: Seed) -> Graph:
    return gen_gnp(n, p_from_beta(n, beta), seed)


def edge_keys(g: Graph) -> np.ndarray:
    """Triangular pair index of every edge, in edge order."""
    return np.fromiter((pair_index(u, v) for u, v in g.edges), dtype=np.int64, count=g.m)


def degree_stats(g: Graph) -> tuple[tuple[int, ...], int]:
    """Per-vertex degrees and the maximum degree."""
    degrees = tuple(len(nb) for nb in g.adjacency)
    return degrees, max(degrees, default=0)


# ---------------------------------------------------------------------------
# Edge-list text formats
# ---------------------------------------------------------------------------

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def format_weights(w: EdgeWeightMap) -> str:
    return "".join(f"{u} {v} {x}\n" for (u, v), x in w.items())


def write_edge_list(g: Graph, path: Path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8")


def write_weights(w: EdgeWeightMap, path: Path) -> None:
    Path(path).write_text(format_weights(w), encoding="utf-8")


def _data_lines(stream: TextIO) -> list[list[str]]:
    return [line.split() for line in stream if line.strip() and not line.lstrip().startswith("#")]


def parse_edge_list(stream: TextIO, source: str = "<stream>") -> Graph:
    rows = _data_lines(stream)
    if not rows:
        raise InvalidInputError(f"{source}: empty edge list")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as e:
        raise InvalidInputError(f"{source}: malformed edge list ({e})") from e
    if len(edges) != m:
        raise InvalidInputError(f"{source}: header announces {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)


def parse_weights(stream: TextIO, g: Graph, source: str = "<stream>") -> EdgeWeightMap:
    try:
        weights = {(int(a), int(b)): int(x) for a, b, x in _data_lines(stream)}
    except ValueError as e:
        raise InvalidInputError(f"{source}: malformed weights file ({e})") from e
    return EdgeWeightMap.from_dict(g, weights)


def read_edge_list(path: Path) -> Graph:
    with open(path, "r", encoding="utf-8") as f:
        return parse_edge_list(f, str(path))


def read_weights(path: Path, g: Graph) -> EdgeWeightMap:
    with open(path, "r", encoding="utf-8") as f:
        return parse_weights(f, g, str(path))
