"""Reproducible seeding: (master seed, derivation path) pairs and counter-based hashing.

A Seed names one random stream. Streams for sub-tasks are derived by extending
the path, never by drawing from a parent generator, so results do not depend
on the order in which trials are executed.

Per-edge randomness is counter based: the uniform for vertex pair (u, v) is a
hash of the seed key and the triangular pair index, so any subset of pairs can
be generated in any order with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0**-53


@dataclass(frozen=True)
class Seed:
    """Master seed plus derivation path."""

    master: int
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.master) < 2**64:
            raise InvalidInputError(f"master seed must be in [0, 2^64), got {self.master}")
        path = tuple(int(i) for i in self.path)
        if any(i < 0 for i in path):
            raise InvalidInputError(f"seed path entries must be non-negative, got {path}")
        object.__setattr__(self, "master", int(self.master))
        object.__setattr__(self, "path", path)

    def child(self, *idx: int) -> Seed:
        return Seed(self.master, self.path + tuple(idx))

    def sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.master, spawn_key=self.path)

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.sequence())

    def key(self) -> np.uint64:
        """64-bit key used by the counter-based hash."""
        return self.sequence().generate_state(1, dtype=np.uint64)[0]

    def __str__(self) -> str:
        return "/".join(str(i) for i in (self.master, *self.path))

    @classmethod
    def parse(cls, text: str) -> Seed:
        """Inverse of str(): "master/i/j/..."."""
        try:
            parts = [int(p) for p in text.strip().split("/")]
        except ValueError as e:
            raise InvalidInputError(f"invalid seed '{text}'") from e
        return cls(parts[0], tuple(parts[1:]))


def mix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser, vectorised over uint64 arrays."""
    z = np.asarray(x, dtype=np.uint64).copy()
    with np.errstate(over="ignore"):
        z ^= z >> np.uint64(30)
        z *= _MIX1
        z ^= z >> np.uint64(27)
        z *= _MIX2
        z ^= z >> np.uint64(31)
    return z


def hashed_uniforms(key: np.uint64, counters: np.ndarray) -> np.ndarray:
    """Uniforms in [0, 1), one per counter, as a pure function of (key, counter)."""
    c = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        state = np.uint64(key) + (c + np.uint64(1)) * _GOLDEN
    return (mix64(state) >> np.uint64(11)).astype(np.float64) * _U53


def pair_index(u: int, v: int) -> int:
    """Triangular index of the unordered pair {u, v}; independent of n."""
    if u == v:
        raise InvalidInputError(f"self-loop ({u}, {v}) has no pair index")
    if u > v:
        u, v = v, u
    return v * (v - 1) // 2 + u


def pairs_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised inverse of pair_index: returns (u, v) arrays with u < v."""
    k = np.asarray(k, dtype=np.int64)
    v = ((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    # float sqrt may be off by one near perfect squares
    v = np.where(v * (v - 1) // 2 > k, v - 1, v)
    v = np.where((v + 1) * v // 2 <= k, v + 1, v)
    u = k - v * (v - 1) // 2
    return u, v
