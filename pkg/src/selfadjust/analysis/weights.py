"""Positive weights and sum-of-logs potentials.

Weights are stored as exact integers after scaling every float by a common
power of two, so interval weights computed from prefix sums carry no
cancellation error no matter how wide the weight range is.  Logarithms are
base 2 throughout.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np


class HasBounds(Protocol):
    def bounds(self, key: int) -> tuple[int | None, int | None]: ...


class WeightMap:
    """Positive weights over a sorted key set, with exact interval sums."""

    def __init__(self, keys: Sequence[int], weights: Iterable[float | int]) -> None:
        ks = list(keys)
        ws = list(weights)
        if len(ks) != len(ws):
            raise ValueError("keys and weights differ in length")
        order = sorted(range(len(ks)), key=ks.__getitem__)
        self.keys = [ks[i] for i in order]
        if any(a == b for a, b in zip(self.keys, self.keys[1:])):
            raise ValueError("duplicate key")
        raw = [ws[i] for i in order]
        for x in raw:
            if not (x > 0) or math.isinf(x):
                raise ValueError(f"weights must be positive and finite, got {x}")
        self._ints, self._shift = _to_scaled_ints(raw)
        pre = [0]
        acc = 0
        for v in self._ints:
            acc += v
            pre.append(acc)
        self._prefix = pre
        self.total_int = acc
        self.w = np.array(raw, dtype=float)

    @classmethod
    def uniform(cls, keys: Sequence[int]) -> "WeightMap":
        return cls(keys, [1] * len(keys))

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, float]) -> "WeightMap":
        items = sorted(mapping.items())
        return cls([k for k, _ in items], [v for _, v in items])

    @classmethod
    def random(
        cls, keys: Sequence[int], rng: np.random.Generator, low: float = 1e-3, high: float = 1e6
    ) -> "WeightMap":
        """Log-uniform weights in ``[low, high]``."""
        ws = np.exp(rng.uniform(math.log(low), math.log(high), size=len(keys)))
        return cls(keys, np.clip(ws, low, high).tolist())

    def __len__(self) -> int:
        return len(self.keys)

    def __getitem__(self, key: int) -> float:
        return float(self.w[self._pos(key)])

    def _pos(self, key: int) -> int:
        i = bisect_left(self.keys, key)
        if i == len(self.keys) or self.keys[i] != key:
            raise KeyError(key)
        return i

    @property
    def W(self) -> float:
        return self.total_int / (1 << self._shift)

    # exact integer interval sums ------------------------------------------

    def int_between(self, lo: int | None, hi: int | None) -> int:
        """Scaled weight of the keys strictly between ``lo`` and ``hi``."""
        a = 0 if lo is None else bisect_right(self.keys, lo)
        b = len(self.keys) if hi is None else bisect_left(self.keys, hi)
        return self._prefix[b] - self._prefix[a] if b > a else 0

    def int_of(self, key: int) -> int:
        return self._ints[self._pos(key)]

    def between(self, lo: int | None, hi: int | None) -> float:
        return self.int_between(lo, hi) / (1 << self._shift)

    def of_set(self, keys: Iterable[int]) -> float:
        return sum(self.int_of(k) for k in keys) / (1 << self._shift)

    def log2_between(self, lo: int | None, hi: int | None) -> float:
        v = self.int_between(lo, hi)
        if v <= 0:
            raise ValueError("empty interval has no logarithm")
        return math.log2(v) - self._shift

    def log2_of(self, key: int) -> float:
        return math.log2(self.int_of(key)) - self._shift

    def log2_total(self) -> float:
        return math.log2(self.total_int) - self._shift

    def log2_ratio_total(self, lo: int | None, hi: int | None) -> float:
        """``log2(W / w(lo, hi))``."""
        return math.log2(self.total_int) - math.log2(self.int_between(lo, hi))

    def log2_ratio_total_key(self, key: int) -> float:
        """``log2(W / w(key))``."""
        return math.log2(self.total_int) - math.log2(self.int_of(key))

    def subtree_log2(self, tree: HasBounds, key: int) -> float:
        return self.log2_between(*tree.bounds(key))


def _to_scaled_ints(values: list[float | int]) -> tuple[list[int], int]:
    if all(isinstance(v, int) for v in values):
        return [int(v) for v in values], 0
    fracs = [float(v).as_integer_ratio() for v in values]
    shift = max(d.bit_length() - 1 for _, d in fracs)
    return [num << (shift - (d.bit_length() - 1)) for num, d in fracs], shift


def _bounds_lookup(tree: HasBounds, X: list[int]):
    # per-key bounds walk to the root; one pass is cheaper for most of a tree
    if hasattr(tree, "all_bounds") and 4 * len(X) >= len(tree):
        return tree.all_bounds().__getitem__
    return tree.bounds


def sol_potential(tree, w: WeightMap) -> float:
    """Sum over all nodes of ``log2 w(T(a))``."""
    return partial_potential(tree, w, tree.keys)


def partial_potential(tree: HasBounds, w: WeightMap, X: Iterable[int]) -> float:
    X = list(X)
    bd = _bounds_lookup(tree, X)
    return math.fsum(w.log2_between(*bd(a)) for a in X)


def potential_drop(before: HasBounds, after: HasBounds, w: WeightMap, X: Iterable[int]) -> float:
    """``Phi_before(X) - Phi_after(X)`` summed term by term."""
    X = list(X)
    bb = _bounds_lookup(before, X)
    ab = _bounds_lookup(after, X)
    out = []
    for a in X:
        out.append(math.log2(w.int_between(*bb(a))) - math.log2(w.int_between(*ab(a))))
    return math.fsum(out)
