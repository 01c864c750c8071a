"""Small pattern graphs: balancedness, automorphisms, and copies inside a host graph."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations
from pathlib import Path
from typing import Iterator

from .config import PATTERN_CONFIG, PATTERN_MAX_VERTICES
from .errors import InvalidInputError
from .graph import Edge, Graph, read_edge_list


@dataclass(frozen=True)
class PatternGraph:
    """Labelled pattern graph Gamma on v0 <= 10 vertices; derived quantities are cached."""

    name: str
    graph: Graph

    def __post_init__(self):
        if self.graph.n > PATTERN_MAX_VERTICES:
            raise InvalidInputError(
                f"pattern '{self.name}' has {self.graph.n} vertices; at most {PATTERN_MAX_VERTICES} supported"
            )

    @classmethod
    def from_edges(cls, name: str, v0: int, edges) -> PatternGraph:
        return cls(name, Graph.from_edges(v0, edges))

    @classmethod
    def from_graph(cls, name: str, graph: Graph) -> PatternGraph:
        return cls(name, graph)

    @classmethod
    def builtin(cls, name: str) -> PatternGraph:
        key = name.lower()
        if key not in PATTERN_CONFIG:
            raise InvalidInputError(
                f"unknown pattern '{name}' (built-ins: {', '.join(PATTERN_CONFIG)})"
            )
        spec = PATTERN_CONFIG[key]
        return cls.from_edges(key, spec["v0"], spec["edges"])

    @classmethod
    def read(cls, path: Path) -> PatternGraph:
        return cls(Path(path).stem, read_edge_list(path))

    @property
    def v0(self) -> int:
        return self.graph.n

    @property
    def e0(self) -> int:
        return self.graph.m

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.graph.edges

    @property
    def is_complete(self) -> bool:
        return self.e0 == self.v0 * (self.v0 - 1) // 2

    @cached_property
    def automorphisms(self) -> tuple[tuple[int, ...], ...]:
        """Every vertex permutation preserving adjacency (brute force)."""
        edge_set = self.graph.edge_set
        found = []
        for perm in permutations(range(self.v0)):
            if all(((perm[u], perm[v]) if perm[u] < perm[v] else (perm[v], perm[u])) in edge_set
                   for u, v in self.edges):
                found.append(perm)
        return tuple(found)

    @cached_property
    def max_density(self) -> Fraction:
        """max over non-empty vertex subsets S of e(S)/|S| (induced edges)."""
        best = Fraction(0)
        edge_masks = [(1 << u) | (1 << v) for u, v in self.edges]
        for mask in range(1, 1 << self.v0):
            inside = sum(1 for em in edge_masks if em & mask == em)
            density = Fraction(inside, mask.bit_count())
            if density > best:
                best = density
        return best


def builtin_pattern(name: str) -> PatternGraph:
    return PatternGraph.builtin(name)


def resolve_pattern(name: str) -> PatternGraph:
    """Built-in pattern by name, otherwise an edge-list file path."""
    if name.lower() in PATTERN_CONFIG:
        return PatternGraph.builtin(name)
    path = Path(name)
    if not path.is_file():
        raise InvalidInputError(
            f"pattern '{name}' is neither built-in ({', '.join(PATTERN_CONFIG)}) nor a readable file"
        )
    return PatternGraph.read(path)


def max_subgraph_density(gamma: PatternGraph) -> Fraction:
    return gamma.max_density


def is_balanced(gamma: PatternGraph) -> bool:
    """True iff no subgraph is denser than Gamma itself."""
    if gamma.e0 < 1:
        raise InvalidInputError(f"pattern '{gamma.name}' has no edges")
    return gamma.max_density == Fraction(gamma.e0, gamma.v0)


def automorphism_count(gamma: PatternGraph) -> int:
    return len(gamma.automorphisms)


class Copy:
    """A copy of Gamma in a host graph.

    `vertices[i]` hosts pattern vertex i and `edges[j]` hosts pattern edge j.
    Two copies are equal iff they have the same vertex set and edge subset.
    """

    __slots__ = ("vertices", "edges", "_key")

    def __init__(self, vertices: tuple[int, ...], edges: tuple[Edge, ...]):
        if len(set(vertices)) != len(vertices):
            raise InvalidInputError("copy vertices must be distinct")
        self.vertices = vertices
        self.edges = edges
        self._key = (frozenset(vertices), frozenset(edges))

    def __eq__(self, other) -> bool:
        return isinstance(other, Copy) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Copy(vertices={self.vertices}, edges={self.edges})"


def _search_plan(gamma: PatternGraph) -> tuple[list[int], list[list[int]]]:
    """Pattern vertex order (each vertex adjacent to an earlier one where possible)
    and, per position, the earlier positions it must be adjacent to."""
    adj = gamma.graph.adjacency
    order: list[int] = []
    placed = set()
    while len(order) < gamma.v0:
        start = max((v for v in range(gamma.v0) if v not in placed), key=lambda v: (len(adj[v]), -v))
        frontier = [start]
        placed.add(start)
        while frontier:
            v = frontier.pop(0)
            order.append(v)
            for u in sorted(adj[v], key=lambda u: (-len(adj[u]), u)):
                if u not in placed:
                    placed.add(u)
                    frontier.append(u)
    position = {v: i for i, v in enumerate(order)}
    back = [[position[u] for u in adj[v] if position[u] < i] for i, v in enumerate(order)]
    return order, back


def enumerate_copies(g: Graph, gamma: PatternGraph) -> Iterator[Copy]:
    """Yield each copy of Gamma in g exactly once (backtracking over injective
    edge-preserving maps, keeping only the lexicographically least map per
    automorphism orbit)."""
    order, back = _search_plan(gamma)
    autos = [a for a in gamma.automorphisms if any(a[i] != i for i in range(gamma.v0))]
    k = gamma.v0
    mapped = [0] * k  # mapped[i] hosts pattern vertex order[i]
    used: set[int] = set()

    def candidates(i: int):
        if not back[i]:
            return range(g.n)
        anchors = sorted((mapped[j] for j in back[i]), key=g.degree)
        first, rest = anchors[0], anchors[1:]
        return [x for x in g.adjacency[first] if all(g.has_edge(x, a) for a in rest)]

    def extend(i: int) -> Iterator[Copy]:
        if i == k:
            phi = [0] * k
            for pos, pv in enumerate(order):
                phi[pv] = mapped[pos]
            phi_t = tuple(phi)
            if all(phi_t <= tuple(phi[a[j]] for j in range(k)) for a in autos):
                edges = tuple((phi[u], phi[v]) if phi[u] < phi[v] else (phi[v], phi[u])
                              for u, v in gamma.edges)
                yield Copy(phi_t, edges)
            return
        for x in candidates(i):
            if x in used:
                continue
            mapped[i] = x
            used.add(x)
            yield from extend(i + 1)
            used.discard(x)

    yield from extend(0)


def count_copies(g: Graph, gamma: PatternGraph) -> int:
    return sum(1 for _ in enumerate_copies(g, gamma))


def expected_copy_count(n: int, p: float, gamma: PatternGraph) -> float:
    """E N_Gamma(G(n, p)) = n!/(n - v0)! / |Aut(Gamma)| * p^e0."""
    if not 0.0 <= p <= 1.0:
        raise InvalidInputError(f"p must lie in [0, 1], got {p}")
    if n < 1:
        raise InvalidInputError(f"n must be >= 1, got {n}")
    return math.perm(n, gamma.v0) / automorphism_count(gamma) * p ** gamma.e0
