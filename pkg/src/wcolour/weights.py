"""Edge-weight laws and i.i.d. per-edge weight sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.special import zeta

from .config import DIST_CONFIG
from .errors import InvalidInputError
from .graph import EdgeWeightMap, Graph, edge_keys
from .seeding import Seed, hashed_uniforms

_WEIGHT_CAP = 2.0**62


@dataclass(frozen=True)
class WeightDistributionSpec:
    """Declarative weight law: Constant(w0) or ParetoCeil(alpha).

    ParetoCeil draws X with P(X > x) = x^(-alpha) on [1, inf) and returns
    ceil(X), so P(w >= k) = (k - 1)^(-alpha) for integer k >= 2.
    """

    kind: Literal["constant", "pareto"]
    w0: int = 1
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind == "constant":
            if int(self.w0) != self.w0 or self.w0 < 1:
                raise InvalidInputError(f"constant weight must be an integer >= 1, got {self.w0}")
        elif self.kind == "pareto":
            if not (self.alpha > 0) or math.isinf(self.alpha):
                raise InvalidInputError(f"pareto alpha must be a positive real, got {self.alpha}")
        else:
            raise InvalidInputError(f"unknown weight distribution '{self.kind}'")

    @classmethod
    def constant(cls, w0: int = 1) -> WeightDistributionSpec:
        return cls("constant", w0=w0)

    @classmethod
    def pareto(cls, alpha: float) -> WeightDistributionSpec:
        return cls("pareto", alpha=float(alpha))

    @classmethod
    def parse(cls, text: str) -> WeightDistributionSpec:
        """Parse the shell form "constant:3" or "pareto:2.5"."""
        name, _, param = text.strip().partition(":")
        name = name.lower()
        if name not in DIST_CONFIG:
            raise InvalidInputError(
                f"unknown distribution '{name}' (valid: {', '.join(DIST_CONFIG)})"
            )
        if not param:
            raise InvalidInputError(f"distribution '{name}' needs a parameter, e.g. {name}:1")
        try:
            if name == "constant":
                return cls.constant(int(param))
            return cls.pareto(float(param))
        except ValueError as e:
            raise InvalidInputError(f"invalid parameter in '{text}': {e}") from e

    def __str__(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.w0}"
        return f"pareto:{self.alpha:g}"

    def mean(self) -> float:
        """Exact expected weight; inf when alpha <= 1."""
        if self.kind == "constant":
            return float(self.w0)
        if self.alpha <= 1.0:
            return math.inf
        # E w = sum_{k>=1} P(w >= k) = 1 + sum_{j>=1} j^(-alpha)
        return 1.0 + float(zeta(self.alpha))

    def tail(self, x: int) -> float:
        """P(w >= x) for integer x."""
        if x <= 1:
            return 1.0
        if self.kind == "constant":
            return 1.0 if self.w0 >= x else 0.0
        return float(x - 1) ** (-self.alpha)

    def z(self, k: int) -> float:
        """z_K = P(w <= K)."""
        return 1.0 - self.tail(k + 1)

    def default_k(self) -> int:
        """Smallest integer K >= 1 with z_K >= 1/2."""
        if self.kind == "constant":
            return self.w0
        # 1 - K^(-alpha) >= 1/2  <=>  K >= 2^(1/alpha); K = 1 has z_1 = 0
        k = max(2, math.ceil(2.0 ** (1.0 / self.alpha)))
        while self.z(k) < 0.5:
            k += 1
        return k

    def has_finite_moment(self, order: float) -> bool:
        return self.kind == "constant" or self.alpha > order

    def transform(self, uniforms: np.ndarray) -> np.ndarray:
        """Map uniforms in [0, 1) to integer weights by inversion."""
        if self.kind == "constant":
            return np.full(np.shape(uniforms), self.w0, dtype=np.int64)
        with np.errstate(over="ignore"):
            x = np.power(1.0 - np.asarray(uniforms), -1.0 / self.alpha)
        # small alpha can overflow float64; cap so the cast stays in int64
        return np.ceil(np.minimum(x, _WEIGHT_CAP)).astype(np.int64)

    def draw(self, size: int, seed: Seed) -> np.ndarray:
        """`size` i.i.d. weights from counters 0..size-1 of the seed's stream."""
        return self.transform(hashed_uniforms(seed.key(), np.arange(size, dtype=np.int64)))


def sample_weights(g: Graph, dist: WeightDistributionSpec, seed: Seed) -> EdgeWeightMap:
    """One i.i.d. draw per edge, keyed by the edge's pair index."""
    if g.m == 0:
        return EdgeWeightMap(g, ())
    values = dist.transform(hashed_uniforms(seed.key(), edge_keys(g)))
    return EdgeWeightMap(g, tuple(values.tolist()))
