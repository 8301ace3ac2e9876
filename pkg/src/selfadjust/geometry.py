"""Height diagrams: the geometric view of BSTs and the Greedy BST algorithm.

A diagram is an integer array ``h`` over the keys ``1..n`` (``h[a-1]`` is the
height of key ``a``).  Open intervals are returned as integer endpoint pairs
``(x, y)``: the endpoints are the nearest blocking keys, or the sentinels
``0`` and ``n + 1`` when nothing blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis.weights import WeightMap
from .bst import NIL, TreeArena

RENORMALIZE_AT = 1 << 60


class DiagramError(ValueError):
    pass


def as_diagram(h) -> np.ndarray:
    arr = np.asarray(h, dtype=np.int64)
    if arr.ndim != 1:
        raise DiagramError("height diagram must be one-dimensional")
    return arr


def _check_key(h: np.ndarray, a: int) -> int:
    if not 1 <= a <= len(h):
        raise DiagramError(f"key {a} outside [1, {len(h)}]")
    return a - 1


def tree_to_height_diagram(tree: TreeArena) -> np.ndarray:
    """``h(a) = H - depth(a)``; the tree keys must be ``1..n``."""
    if tree.keys != list(range(1, tree.n + 1)):
        raise DiagramError("tree keys must be 1..n")
    depth = np.zeros(tree.n, dtype=np.int64)
    for key, (d, _, _) in tree.depths().items():
        depth[key - 1] = d
    return depth.max() - depth


def has_tree_structure(h) -> bool:
    """True iff every key interval has a unique maximum height."""
    h = as_diagram(h)
    stack: list[int] = []
    for v in h.tolist():
        while stack and stack[-1] < v:
            stack.pop()
        if stack and stack[-1] == v:
            return False
        stack.append(v)
    return True


def height_diagram_to_tree(h) -> TreeArena:
    """Cartesian tree of ``h`` (maxima on top) over keys ``1..n``."""
    h = as_diagram(h)
    if not has_tree_structure(h):
        raise DiagramError("height diagram has no tree structure")
    n = len(h)
    left = [NIL] * n
    right = [NIL] * n
    parent = [NIL] * n
    stack: list[int] = []
    hv = h.tolist()
    for i in range(n):
        last = NIL
        while stack and hv[stack[-1]] < hv[i]:
            last = stack.pop()
        left[i] = last
        if last != NIL:
            parent[last] = i
        if stack:
            right[stack[-1]] = i
            parent[i] = stack[-1]
        stack.append(i)
    root = stack[0] if stack else NIL
    return TreeArena(list(range(1, n + 1)), left, right, parent, root)


def stair(h, a: int) -> list[int]:
    """Keys visible from above ``a``: ``b`` qualifies when no other point,
    ``(a, h(a))`` included, lies in the closed region between columns ``a``
    and ``b`` at height ``>= h(b)``."""
    h = as_diagram(h)
    i = _check_key(h, a)
    out = [a]
    right = h[i + 1 :]
    if len(right):
        prev = np.maximum.accumulate(np.concatenate(([h[i]], right[:-1])))
        out.extend((np.nonzero(right > prev)[0] + i + 2).tolist())
    lft = h[:i][::-1]
    if len(lft):
        prev = np.maximum.accumulate(np.concatenate(([h[i]], lft[:-1])))
        out.extend((i - np.nonzero(lft > prev)[0]).tolist())
    return sorted(out)


@dataclass(frozen=True)
class Neighborhood:
    """Open interval ``(x, y)`` around ``a``; covers keys ``x+1 .. y-1``."""

    a: int
    x: int
    y: int

    def keys(self) -> range:
        return range(self.x + 1, self.y)

    def bounds(self) -> tuple[int, int]:
        return self.x, self.y


def neighborhood(h, a: int) -> Neighborhood:
    h = as_diagram(h)
    i = _check_key(h, a)
    v = h[i]
    lb = np.nonzero(h[:i] >= v)[0]
    rb = np.nonzero(h[i + 1 :] >= v)[0]
    x = int(lb[-1]) + 1 if len(lb) else 0
    y = int(rb[0]) + i + 2 if len(rb) else len(h) + 1
    return Neighborhood(a, x, y)


def all_neighborhoods(h) -> list[Neighborhood]:
    """Every neighborhood via two monotone-stack sweeps."""
    hv = as_diagram(h).tolist()
    n = len(hv)
    xs = [0] * n
    ys = [n + 1] * n
    stack: list[int] = []
    for i in range(n):
        while stack and hv[stack[-1]] < hv[i]:
            stack.pop()
        xs[i] = stack[-1] + 1 if stack else 0
        stack.append(i)
    stack = []
    for i in range(n - 1, -1, -1):
        while stack and hv[stack[-1]] < hv[i]:
            stack.pop()
        ys[i] = stack[-1] + 1 if stack else n + 1
        stack.append(i)
    return [Neighborhood(i + 1, xs[i], ys[i]) for i in range(n)]


def greedy_access(h, s: int) -> tuple[np.ndarray, int]:
    """Raise every stair key of ``s`` to ``max(h) + 1``; cost is the stair size."""
    h = as_diagram(h)
    st = stair(h, s)
    out = h.copy()
    top = int(h.max()) + 1
    out[np.asarray(st) - 1] = top
    if top > RENORMALIZE_AT:
        out -= out.min()
    return out, len(st)


class _NeighborhoodView:
    """Adapter giving diagrams the ``bounds`` interface of trees."""

    def __init__(self, h) -> None:
        self.h = as_diagram(h)

    def bounds(self, a: int) -> tuple[int | None, int | None]:
        nb = neighborhood(self.h, a)
        n = len(self.h)
        return (None if nb.x == 0 else nb.x), (None if nb.y == n + 1 else nb.y)


def geometric_potential(h, w: WeightMap) -> float:
    """Sum over keys of ``log2 w(N_h(a))``."""
    n = len(as_diagram(h))
    return math.fsum(
        w.log2_between(None if nb.x == 0 else nb.x, None if nb.y == n + 1 else nb.y)
        for nb in all_neighborhoods(h)
    )


def is_neighborhood_disjoint(h_after, X) -> bool:
    xs = sorted(X)
    nbs = [neighborhood(h_after, a) for a in xs]
    return all(p.y - 1 < q.x + 1 for p, q in zip(nbs, nbs[1:]))


@dataclass(frozen=True)
class GeometricAudit:
    odd_slack: float
    even_slack: float
    odd_disjoint: bool
    even_disjoint: bool

    @property
    def min_slack(self) -> float:
        return min(self.odd_slack, self.even_slack)

    @property
    def ok(self) -> bool:
        return self.odd_disjoint and self.even_disjoint


def _geo_slack(before: _NeighborhoodView, after: _NeighborhoodView, w: WeightMap, X, s: int) -> float:
    drop = math.fsum(
        math.log2(w.int_between(*before.bounds(a))) - math.log2(w.int_between(*after.bounds(a)))
        for a in X
    )
    return 2 + 8 * w.log2_ratio_total(*before.bounds(s)) + drop - len(X)


def check_geometric_access_lemma(h, h_after, s: int, w: WeightMap) -> GeometricAudit:
    """Split the stair of ``s`` into odd/even positions and audit each half
    with the neighborhood-disjoint inequality
    ``|X| <= 2 + 8 log(W/w(N_h(s))) + Phi_h(X) - Phi_h'(X)``."""
    h = as_diagram(h)
    h_after = as_diagram(h_after)
    S = stair(h, s)
    expected, _ = greedy_access(h, s)
    shift = h_after - expected
    if len(shift) and not (shift == shift[0]).all():
        raise DiagramError("h_after is not the greedy access of s")
    odd, even = S[0::2], S[1::2]
    bv, av = _NeighborhoodView(h), _NeighborhoodView(h_after)
    return GeometricAudit(
        _geo_slack(bv, av, w, odd, s),
        _geo_slack(bv, av, w, even, s),
        is_neighborhood_disjoint(h_after, odd),
        is_neighborhood_disjoint(h_after, even),
    )


def left_path_diagram(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def greedy_sequence(h, keys) -> tuple[np.ndarray, list[int]]:
    h = as_diagram(h)
    costs = []
    for s in keys:
        h, c = greedy_access(h, s)
        costs.append(c)
    return h, costs
