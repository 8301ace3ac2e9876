"""Wing partitions and the sequential-access lower-bound potential."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ..bst import NIL, BeforePath, TreeArena, apply_restructure, search_path


def _xlogx(x: float) -> float:
    return x * math.log2(x) if x > 0 else 0.0


@dataclass(frozen=True)
class WingPartition:
    wings: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(w) for w in self.wings]

    def __len__(self) -> int:
        return len(self.wings)


def wing_partition(tree: TreeArena, root: int | None = None) -> WingPartition:
    """Maximal left-leaning runs, each listed in increasing key order.

    With ``root`` given, only the subtree under that key is partitioned."""
    if tree.n == 0:
        return WingPartition(())
    start = tree.root if root is None else tree.index(root)
    wings = []
    stack = [start]
    while stack:
        top = stack.pop()
        run = []
        i = top
        while i != NIL:
            run.append(tree.keys[i])
            if tree.right[i] != NIL:
                stack.append(tree.right[i])
            i = tree.left[i]
        wings.append(tuple(run[::-1]))
    return WingPartition(tuple(sorted(wings)))


def wing_potential(tree: TreeArena, root: int | None = None) -> float:
    """Sum of ``|w| log2 |w|`` over the wings."""
    return math.fsum(_xlogx(len(w)) for w in wing_partition(tree, root).wings)


def _sub_depth_stats(tree: TreeArena, root: int) -> tuple[int, int]:
    """(right-depth in levels, leaves) of the subtree at node index ``root``."""
    max_rd = 0
    leaves = 0
    stack = [(root, 1)]
    while stack:
        i, rd = stack.pop()
        max_rd = max(max_rd, rd)
        a, b = tree.left[i], tree.right[i]
        if a == NIL and b == NIL:
            leaves += 1
        if a != NIL:
            stack.append((a, rd))
        if b != NIL:
            stack.append((b, rd + 1))
    return max_rd, leaves


def check_wing_count(tree: TreeArena) -> bool:
    """``|wp(R)| <= m k`` with ``m`` the right-depth counted in levels (a left
    path has ``m = 1``) and ``k`` the number of leaves."""
    if tree.n == 0:
        return True
    m, k = _sub_depth_stats(tree, tree.root)
    return len(wing_partition(tree)) <= m * k


@dataclass(frozen=True)
class WingStep:
    i: int
    n_i: int
    phi_before: float
    phi_after: float
    lower: float

    @property
    def slack(self) -> float:
        return (self.phi_after - self.phi_before) - self.lower


def _right_subtree_of_root(tree: TreeArena) -> int:
    return tree.right[tree.root]


def check_wing_telescoping(
    n: int, transformer: Callable[[BeforePath], TreeArena]
) -> tuple[float, list[WingStep], int]:
    """Sequential accesses ``1..n`` from a left path under a virtual root ``0``.

    Checks ``phi_i - phi_{i-1} >= sum_{w' in wp(A''_i)} f(|w'|) - f(n_i - 1)``
    with ``f(x) = x log2 x`` at every access.  Returns the minimum slack, the
    per-step rows and the total cost."""
    tree = TreeArena.from_insertion_order([0] + list(range(n, 0, -1)))
    r = _right_subtree_of_root(tree)
    phi_prev = wing_potential(tree, tree.keys[r]) if r != NIL else 0.0
    steps = []
    total = 0
    for i in range(1, n + 1):
        path = search_path(tree, i)
        if path.keys[0] != i - 1 or any(k < i for k in path.keys[1:-1]):
            raise ValueError("run is not sequential")
        after = transformer(path)
        total += len(path)
        # A''_i: the right subtree of i inside the after-tree
        ai = after.index(i)
        rr = after.right[ai]
        lower = -_xlogx(len(path) - 1)
        if rr != NIL:
            lower += math.fsum(_xlogx(len(w)) for w in wing_partition(after, after.keys[rr]).wings)
        tree = apply_restructure(tree, path, after, inplace=True)
        r = _right_subtree_of_root(tree)
        phi = wing_potential(tree, tree.keys[r]) if r != NIL else 0.0
        steps.append(WingStep(i, len(path), phi_prev, phi, lower))
        phi_prev = phi
    return min(s.slack for s in steps), steps, total
