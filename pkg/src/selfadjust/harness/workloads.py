"""Deterministic access sequences."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

KINDS = ("sequential", "uniform", "zipf", "permutation-repeat")


@dataclass(frozen=True)
class Workload:
    kind: str
    n: int
    m: int
    alpha: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown workload {self.kind!r}; choose from {KINDS}")
        if self.n < 1 or self.m < 0:
            raise ValueError("need n >= 1 and m >= 0")

    def streams(self) -> list[np.random.Generator]:
        """Independent generators for the keys, the weights and the start tree."""
        return [np.random.default_rng(ss) for ss in np.random.SeedSequence(self.seed).spawn(3)]

    def keys(self) -> np.ndarray:
        return generate(self, self.streams()[0])

    def to_dict(self) -> dict:
        return asdict(self)


def zipf_keys(n: int, m: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF sampling of ranks ``r`` with probability ``~ r^-alpha``;
    ranks map to keys through a seeded permutation."""
    ranks = np.arange(1, n + 1, dtype=float)
    cdf = np.cumsum(ranks**-alpha)
    cdf /= cdf[-1]
    perm = rng.permutation(n) + 1
    idx = np.searchsorted(cdf, rng.random(m), side="right")
    return perm[np.minimum(idx, n - 1)]


def generate(w: Workload, rng: np.random.Generator) -> np.ndarray:
    n, m = w.n, w.m
    if w.kind == "sequential":
        out = np.arange(m) % n + 1
    elif w.kind == "uniform":
        out = rng.integers(1, n + 1, size=m)
    elif w.kind == "zipf":
        out = zipf_keys(n, m, w.alpha, rng)
    else:
        perm = rng.permutation(n) + 1
        out = np.resize(perm, m)
    return out.astype(np.int64)
