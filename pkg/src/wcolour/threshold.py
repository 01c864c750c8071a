"""Locally correct colourings: M-good copies of a balanced pattern under uniform
random colourings with r colours, the threshold exponent, and the lower/upper
counters Y (arithmetic-progression copies in G_K) and Z (copies whose colours
lie pairwise within M).
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass

import numpy as np

from .colouring import Colouring
from .config import EXHAUSTIVE_MAX_COLOURINGS
from .errors import ContractViolation, InvalidInputError
from .graph import EdgeWeightMap, Graph
from .patterns import Copy, PatternGraph, enumerate_copies
from .seeding import Seed
from .weights import WeightDistributionSpec

log = logging.getLogger(__name__)

# colourings evaluated per numpy batch
_BATCH = 4096


def theta_threshold(v0: int, e0: int, beta: float) -> float:
    """theta_th = (v0 - e0 beta) / (v0 - 1), defined for 1/e0 < beta < v0/e0."""
    if v0 < 2 or e0 < 1:
        raise InvalidInputError(f"threshold needs v0 >= 2 and e0 >= 1, got v0={v0}, e0={e0}")
    if not (1.0 / e0 < beta < v0 / e0):
        raise InvalidInputError(
            f"beta must lie in (1/e0, v0/e0) = ({1.0 / e0:g}, {v0 / e0:g}), got {beta}"
        )
    return (v0 - e0 * beta) / (v0 - 1)


def r_for_theta(n: int, theta: float) -> int:
    """Colour budget r = ceil(n^theta)."""
    # guard keeps exact integer powers (100^0.5) from rounding up
    return max(1, math.ceil(float(n) ** theta - 1e-9))


def theta_for_r(n: int, r: int) -> float:
    """Inverse of r_for_theta up to rounding: log r / log n."""
    if n < 2 or r < 1:
        raise InvalidInputError(f"theta_for_r needs n >= 2 and r >= 1, got n={n}, r={r}")
    return math.log(r) / math.log(n)


def default_m(v0: int, k: int) -> int:
    return v0 * (k + 1)


@dataclass(frozen=True)
class ThresholdParams:
    r: int
    K: int
    M: int
    theta: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.r < 1:
            raise InvalidInputError(f"r must be >= 1, got {self.r}")
        if self.K < 1:
            raise InvalidInputError(f"K must be >= 1, got {self.K}")
        if self.M < 1:
            raise InvalidInputError(f"M must be >= 1, got {self.M}")
        if self.theta is not None and not 0.0 < self.theta < 1.0:
            raise InvalidInputError(f"theta must lie in (0, 1), got {self.theta}")

    @classmethod
    def resolve(
        cls,
        n: int,
        gamma: PatternGraph,
        dist: WeightDistributionSpec,
        *,
        theta: float | None = None,
        r: int | None = None,
        beta: float | None = None,
        k: int | None = None,
        m: int | None = None,
    ) -> ThresholdParams:
        """Fill in r from theta, K from the weight law and M = v0 (K + 1)."""
        if (theta is None) == (r is None):
            raise InvalidInputError("give exactly one of theta and r")
        if r is None:
            if not 0.0 < theta < 1.0:
                raise InvalidInputError(f"theta must lie in (0, 1), got {theta}")
            r = r_for_theta(n, theta)
        k = dist.default_k() if k is None else k
        m = default_m(gamma.v0, k) if m is None else m
        return cls(r=r, K=k, M=m, theta=theta, beta=beta)


@dataclass(frozen=True)
class GoodnessReport:
    """Counts for one colouring. `complete` is False when the scan stopped at the
    first good copy; counts are then partial and Y/Z are not computed."""

    total_copies: int
    good_copies: int
    y_count: int | None
    z_count: int | None
    good: bool
    complete: bool = True

    def to_json(self) -> str:
        return json.dumps({
            "total_copies": self.total_copies,
            "good_copies": self.good_copies,
            "y_count": self.y_count,
            "z_count": self.z_count,
            "good": self.good,
            "complete": self.complete,
        })


def restrict_to_gk(g: Graph, w: EdgeWeightMap, k: int) -> Graph:
    """G_K: same vertices, only the edges of weight <= K."""
    if k < 1:
        raise InvalidInputError(f"K must be >= 1, got {k}")
    return g.with_edges(e for e, x in w.items() if x <= k)


def is_good_copy(t: Copy, w: EdgeWeightMap, colours: Colouring, m: int) -> bool:
    """w(u, v) <= |colour(u) - colour(v)| <= M on every edge of the copy."""
    if m < 1:
        raise InvalidInputError(f"M must be >= 1, got {m}")
    for u, v in t.edges:
        diff = abs(colours[u] - colours[v])
        if not w.weight(u, v) <= diff <= m:
            return False
    return True


def _is_progression(values: list[int], step: int) -> bool:
    values = sorted(values)
    return all(b - a == step for a, b in zip(values, values[1:]))


def count_y_lower(
    g_k: Graph,
    gamma: PatternGraph,
    colours: Colouring,
    k: int,
    weights: EdgeWeightMap | None = None,
) -> int:
    """Copies in G_K whose colours form {c, c+(K+1), ..., c+(v0-1)(K+1)}.

    With `weights`, each counted copy is checked to be M-good for M = v0 (K + 1).
    """
    if k < 1:
        raise InvalidInputError(f"K must be >= 1, got {k}")
    m = default_m(gamma.v0, k)
    count = 0
    for t in enumerate_copies(g_k, gamma):
        if _is_progression([colours[v] for v in t.vertices], k + 1):
            if weights is not None and not is_good_copy(t, weights, colours, m):
                raise ContractViolation(f"progression copy {t} is not {m}-good")
            count += 1
    return count


def count_z_upper(g: Graph, gamma: PatternGraph, colours: Colouring, m: int) -> int:
    """Copies whose vertex colours lie pairwise within M."""
    if m < 1:
        raise InvalidInputError(f"M must be >= 1, got {m}")
    count = 0
    for t in enumerate_copies(g, gamma):
        cs = [colours[v] for v in t.vertices]
        if max(cs) - min(cs) <= m:
            count += 1
    return count


@dataclass(frozen=True)
class BatchCounts:
    """Per-colouring counts for a batch of colourings."""

    good_copies: np.ndarray
    y: np.ndarray | None
    z: np.ndarray


class CopyTable:
    """Copies of Gamma in g, laid out as arrays so a batch of colourings can be
    scored at once. Enumeration happens once per host graph."""

    def __init__(self, g: Graph, w: EdgeWeightMap, gamma: PatternGraph):
        if w.graph.edges != g.edges:
            raise InvalidInputError("weight map belongs to a different graph")
        copies = list(enumerate_copies(g, gamma))
        self.n = g.n
        self.gamma = gamma
        self.count = len(copies)
        self.vertices = np.array([t.vertices for t in copies], dtype=np.int64).reshape(self.count, gamma.v0)
        self.edges = np.array([t.edges for t in copies], dtype=np.int64).reshape(self.count, gamma.e0, 2)
        self.weights = np.array(
            [[w.weight(u, v) for u, v in t.edges] for t in copies], dtype=np.int64
        ).reshape(self.count, gamma.e0)

    def evaluate(self, colourings: np.ndarray, m: int, k: int | None = None) -> BatchCounts:
        """Score colourings of shape (T, n)."""
        cols = np.asarray(colourings, dtype=np.int64)
        ends = cols[:, self.edges]
        diff = np.abs(ends[..., 0] - ends[..., 1])
        within = diff >= self.weights
        good = (within & (diff <= m)).all(axis=2)

        vc = cols[:, self.vertices]
        z = (vc.max(axis=2) - vc.min(axis=2) <= m).sum(axis=1)

        y = None
        if k is not None:
            in_gk = (self.weights <= k).all(axis=1)
            gaps = np.diff(np.sort(vc, axis=2), axis=2)
            progression = (gaps == k + 1).all(axis=2) & in_gk
            m_y = default_m(self.gamma.v0, k)
            good_at_my = (within & (diff <= m_y)).all(axis=2)
            if (progression & ~good_at_my).any():
                raise ContractViolation(f"a progression copy in G_K is not {m_y}-good")
            y = progression.sum(axis=1)
        return BatchCounts(good.sum(axis=1), y, z)


def colouring_is_good(
    g: Graph,
    w: EdgeWeightMap,
    gamma: PatternGraph,
    colours: Colouring,
    m: int,
    *,
    k: int | None = None,
    full: bool = True,
) -> GoodnessReport:
    """Is there at least one M-good copy of Gamma? With `full`, count all of them
    (and Y at K / Z at M when `k` is given); otherwise stop at the first."""
    if m < 1:
        raise InvalidInputError(f"M must be >= 1, got {m}")
    if len(colours) != g.n:
        raise InvalidInputError(f"colouring covers {len(colours)} vertices, graph has {g.n}")

    if not full:
        examined = 0
        for t in enumerate_copies(g, gamma):
            examined += 1
            if is_good_copy(t, w, colours, m):
                return GoodnessReport(examined, 1, None, None, True, complete=False)
        return GoodnessReport(examined, 0, None, None, False, complete=True)

    table = CopyTable(g, w, gamma)
    counts = table.evaluate(np.array([colours.colours]), m, k)
    good_copies = int(counts.good_copies[0])
    y = int(counts.y[0]) if counts.y is not None else None
    z = int(counts.z[0]) if k is not None else None
    return GoodnessReport(table.count, good_copies, y, z, good_copies >= 1)


@dataclass(frozen=True)
class GoodnessSample:
    """Summary of `trials` uniform colourings of one host graph."""

    trials: int
    fraction: float
    stderr: float
    copies: int
    good_copies: int
    y_total: int | None
    z_total: int


def _binomial_stderr(fraction: float, trials: int) -> float:
    return math.sqrt(fraction * (1.0 - fraction) / trials)


def sample_goodness(
    g: Graph,
    w: EdgeWeightMap,
    gamma: PatternGraph,
    r: int,
    m: int,
    trials: int,
    seed: Seed,
    *,
    k: int | None = None,
    table: CopyTable | None = None,
) -> GoodnessSample:
    """Draw i.i.d. uniform colourings V -> {1..r} and score each one."""
    if trials < 1:
        raise InvalidInputError(f"trials must be >= 1, got {trials}")
    if r < 1:
        raise InvalidInputError(f"r must be >= 1, got {r}")
    if m < 1:
        raise InvalidInputError(f"M must be >= 1, got {m}")
    table = table or CopyTable(g, w, gamma)
    colourings = seed.rng().integers(1, r + 1, size=(trials, g.n))
    counts = table.evaluate(colourings, m, k)

    good = counts.good_copies >= 1
    # Y <= good only holds once M reaches v0 (K + 1)
    if counts.y is not None and m >= default_m(gamma.v0, k) and (counts.y > counts.good_copies).any():
        raise ContractViolation("Y exceeded the number of good copies")
    fraction = float(good.mean())
    return GoodnessSample(
        trials=trials,
        fraction=fraction,
        stderr=_binomial_stderr(fraction, trials),
        copies=table.count,
        good_copies=int(counts.good_copies.sum()),
        y_total=int(counts.y.sum()) if counts.y is not None else None,
        z_total=int(counts.z.sum()),
    )


def estimate_good_fraction(
    g: Graph,
    w: EdgeWeightMap,
    gamma: PatternGraph,
    r: int,
    m: int,
    trials: int,
    seed: Seed,
) -> tuple[float, float]:
    """Monte Carlo estimate of N_good / N_tot and its binomial standard error."""
    sample = sample_goodness(g, w, gamma, r, m, trials, seed)
    return sample.fraction, sample.stderr


def exhaustive_good_fraction(g: Graph, w: EdgeWeightMap, gamma: PatternGraph, r: int, m: int) -> float:
    """Exact N_good / N_tot by visiting every colouring V -> {1..r}."""
    if r < 1:
        raise InvalidInputError(f"r must be >= 1, got {r}")
    total = r ** g.n
    if total > EXHAUSTIVE_MAX_COLOURINGS:
        raise InvalidInputError(f"{r}^{g.n} colourings exceed the exhaustive limit {EXHAUSTIVE_MAX_COLOURINGS}")
    table = CopyTable(g, w, gamma)
    good = 0
    shape = (r,) * g.n
    for start in range(0, total, _BATCH):
        idx = np.arange(start, min(start + _BATCH, total))
        colourings = np.stack(np.unravel_index(idx, shape), axis=1) + 1
        good += int((table.evaluate(colourings, m).good_copies >= 1).sum())
    log.debug("exhaustive oracle: %d of %d colourings good", good, total)
    return good / total
