"""Weighted colourings: verification, greedy interval exclusion, exact branch-and-bound
and the two-stage colouring that sets high-load vertices aside.

A weighted colouring f assigns positive integers to vertices with
|f(u) - f(v)| >= w(u, v) on every edge. The quantity minimised throughout is
the largest colour used (a span), not the number of distinct colours.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from .config import EXACT_MAX_N
from .errors import ContractViolation, InvalidInputError
from .graph import EdgeWeightMap, Graph
from .seeding import Seed

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Colouring:
    """Colour per vertex, indexed by vertex id; every colour >= 1."""

    colours: tuple[int, ...]

    def __post_init__(self):
        colours = tuple(int(c) for c in self.colours)
        if any(c < 1 for c in colours):
            raise InvalidInputError("colours must be positive integers")
        object.__setattr__(self, "colours", colours)

    def __len__(self) -> int:
        return len(self.colours)

    def __getitem__(self, v: int) -> int:
        return self.colours[v]

    @property
    def max_colour(self) -> int:
        return max(self.colours, default=0)

    def format(self) -> str:
        return "".join(f"{v} {c}\n" for v, c in enumerate(self.colours))

    def write(self, path: Path) -> None:
        Path(path).write_text(self.format(), encoding="utf-8")

    @classmethod
    def parse(cls, stream: TextIO, source: str = "<stream>") -> Colouring:
        assigned: dict[int, int] = {}
        try:
            for line in stream:
                if not line.strip():
                    continue
                v, c = (int(x) for x in line.split())
                assigned[v] = c
        except ValueError as e:
            raise InvalidInputError(f"{source}: malformed colouring ({e})") from e
        if sorted(assigned) != list(range(len(assigned))):
            raise InvalidInputError(f"{source}: colouring must list vertices 0..n-1 exactly once")
        return cls(tuple(assigned[v] for v in range(len(assigned))))

    @classmethod
    def read(cls, path: Path) -> Colouring:
        with open(path, "r", encoding="utf-8") as f:
            return cls.parse(f, str(path))


def _check_inputs(g: Graph, w: EdgeWeightMap, f: Colouring | None = None) -> None:
    if w.graph.n != g.n or w.graph.edges != g.edges:
        raise InvalidInputError("weight map belongs to a different graph")
    if f is not None and len(f) != g.n:
        raise InvalidInputError(f"colouring covers {len(f)} vertices, graph has {g.n}")


def verify_weighted(g: Graph, w: EdgeWeightMap, f: Colouring) -> bool:
    """True iff |f(u) - f(v)| >= w(u, v) on every edge."""
    _check_inputs(g, w, f)
    c = f.colours
    return all(abs(c[u] - c[v]) >= x for (u, v), x in w.items())


def vertex_weight_sums(g: Graph, w: EdgeWeightMap) -> tuple[int, ...]:
    """J_v: total weight of the edges at v."""
    _check_inputs(g, w)
    sums = [0] * g.n
    for (u, v), x in w.items():
        sums[u] += x
        sums[v] += x
    return tuple(sums)


def max_incident_weight(g: Graph, w: EdgeWeightMap, v: int) -> int:
    """M_v: heaviest edge at v, 0 for an isolated vertex."""
    _check_inputs(g, w)
    if not 0 <= v < g.n:
        raise InvalidInputError(f"vertex {v} outside [0, {g.n})")
    return max((w.weight(v, u) for u in g.adjacency[v]), default=0)


def local_average_bound(g: Graph, w: EdgeWeightMap) -> int:
    """1 + max_v sum_{u ~ v} (2 w(u, v) - 1); equals Delta + 1 when all weights are 1."""
    sums = vertex_weight_sums(g, w)
    return 1 + max((2 * sums[v] - g.degree(v) for v in range(g.n)), default=0)


def _smallest_free(intervals: list[tuple[int, int]]) -> int:
    """Smallest positive integer outside the union of closed intervals."""
    candidate = 1
    for lo, hi in sorted(intervals):
        if lo > candidate:
            break
        candidate = max(candidate, hi + 1)
    return candidate


def _greedy_assign(g: Graph, w: EdgeWeightMap, order: Iterable[int], colours: list[int]) -> None:
    """Colour `order` in sequence; 0 in `colours` marks an uncoloured vertex."""
    for u in order:
        excluded = []
        for v in g.adjacency[u]:
            cv = colours[v]
            if cv:
                reach = w.weight(u, v) - 1
                excluded.append((cv - reach, cv + reach))
        colours[u] = _smallest_free(excluded)


def _check_order(g: Graph, order: Sequence[int]) -> tuple[int, ...]:
    order = tuple(int(v) for v in order)
    if sorted(order) != list(range(g.n)):
        raise InvalidInputError("order must be a permutation of the vertex set")
    return order


def random_order(n: int, seed: Seed) -> tuple[int, ...]:
    return tuple(int(v) for v in seed.rng().permutation(n))


def greedy_colour(g: Graph, w: EdgeWeightMap, order: Sequence[int] | None = None) -> Colouring:
    """Interval-exclusion greedy: each vertex takes the smallest colour not within
    w(u, v) - 1 of an already coloured neighbour. Default order is by vertex id."""
    _check_inputs(g, w)
    order = tuple(range(g.n)) if order is None else _check_order(g, order)
    colours = [0] * g.n
    _greedy_assign(g, w, order, colours)
    return Colouring(tuple(colours))


@dataclass(frozen=True)
class ExactResult:
    """Outcome of exact_chi_w. `proven` is False when the node budget ran out;
    `chi_w` is then the best incumbent, an upper bound only."""

    chi_w: int
    proven: bool
    nodes: int
    colouring: Colouring


def exact_chi_w(g: Graph, w: EdgeWeightMap, budget: int | None = None) -> ExactResult:
    """Weighted colouring number by depth-first branch-and-bound.

    Vertices are branched in descending J_v order; the incumbent starts at the
    greedy colouring; every branch only tries colours below the incumbent.
    """
    _check_inputs(g, w)
    if budget is not None and budget < 1:
        raise InvalidInputError(f"budget must be >= 1, got {budget}")
    if g.n > EXACT_MAX_N and budget is None:
        log.warning("exact search on n=%d without a budget may not finish", g.n)

    incumbent = greedy_colour(g, w)
    best = incumbent.max_colour
    best_colours = incumbent.colours
    # any edge needs colours at least w apart, both >= 1
    lower = 1 + w.max_weight()

    n = g.n
    sums = vertex_weight_sums(g, w)
    order = sorted(range(n), key=lambda v: (-sums[v], v))
    nbrs = [[(u, w.weight(v, u)) for u in g.adjacency[v]] for v in range(n)]
    colours = [0] * n
    nodes = 0
    exhausted = False

    def feasible(v: int, c: int) -> bool:
        for u, x in nbrs[v]:
            cu = colours[u]
            if cu and abs(c - cu) < x:
                return False
        return True

    def has_option(v: int, limit: int) -> bool:
        return any(feasible(v, c) for c in range(1, limit + 1))

    def search(i: int) -> None:
        nonlocal best, best_colours, nodes, exhausted
        if i == n:
            best = max(colours)
            best_colours = tuple(colours)
            return
        v = order[i]
        c = 0
        while not exhausted and best > lower:
            c += 1
            limit = best - 1
            if i == 0:
                # reflection c -> limit + 1 - c maps solutions onto solutions
                limit = (limit + 1) // 2
            if c > limit:
                break
            if not feasible(v, c):
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                exhausted = True
                break
            colours[v] = c
            if all(has_option(u, best - 1) for u, _ in nbrs[v] if not colours[u]):
                search(i + 1)
            colours[v] = 0

    if best > lower:
        search(0)
    if exhausted:
        log.info("exact search stopped after %d nodes; incumbent %d", nodes, best)
    return ExactResult(best, not exhausted, nodes, Colouring(best_colours))


@dataclass(frozen=True)
class TwoStageReport:
    """Bookkeeping of two_stage_colour.

    L = 2 ceil(mu n p (1+eps)^2) + 1 is the colour budget of the good part;
    bad vertex v_j receives L + 2 sum_{i <= j} M_{v_i}.
    """

    bad_vertices: tuple[int, ...]
    L: int
    m_values: tuple[int, ...]
    M_tot: int
    max_colour: int
    threshold: float

    def to_json(self) -> str:
        return json.dumps({
            "bad_vertices": list(self.bad_vertices),
            "L": self.L,
            "M_tot": self.M_tot,
            "max_colour": self.max_colour,
            "M_v": dict(zip((str(v) for v in self.bad_vertices), self.m_values)),
            "threshold": self.threshold,
        })


def two_stage_colour(
    g: Graph, w: EdgeWeightMap, mu: float, p: float, eps: float
) -> tuple[Colouring, TwoStageReport]:
    """Greedy on the vertices with J_v <= mu n p (1+eps)^2, then stack the rest above L."""
    _check_inputs(g, w)
    if not (mu >= 1.0) or math.isinf(mu):
        raise InvalidInputError(f"mu must be a finite real >= 1, got {mu}")
    if not (0.0 <= p <= 1.0):
        raise InvalidInputError(f"p must lie in [0, 1], got {p}")
    if not (0.0 < eps < 0.5):
        raise InvalidInputError(f"eps must lie in (0, 1/2), got {eps}")

    threshold = mu * g.n * p * (1.0 + eps) ** 2
    L = 2 * math.ceil(threshold) + 1
    sums = vertex_weight_sums(g, w)
    bad = tuple(v for v in range(g.n) if sums[v] > threshold)
    bad_set = set(bad)

    colours = [0] * g.n
    _greedy_assign(g, w, (v for v in range(g.n) if v not in bad_set), colours)
    good_max = max(colours, default=0)
    if good_max > L:
        raise ContractViolation(f"good part used colour {good_max} > L = {L}")

    m_values = tuple(max_incident_weight(g, w, v) for v in bad)
    running = L
    for v, m in zip(bad, m_values):
        running += 2 * m
        colours[v] = running

    f = Colouring(tuple(colours))
    m_tot = sum(m_values)
    if not verify_weighted(g, w, f):
        raise ContractViolation("two-stage colouring is not a proper weighted colouring")
    if bad and f.max_colour != L + 2 * m_tot:
        raise ContractViolation(f"max colour {f.max_colour} differs from L + 2 M_tot = {L + 2 * m_tot}")

    log.debug("two-stage: %d bad vertices, L=%d, M_tot=%d", len(bad), L, m_tot)
    return f, TwoStageReport(bad, L, m_values, m_tot, f.max_colour, threshold)
