"""Partitions of a search path into subtree-disjoint, monotone and zigzag sets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..bst import BeforePath, TreeArena


def side_alternations(path: BeforePath) -> int:
    """Edges of the path (not touching ``s``) whose ends straddle ``s``."""
    s = path.s
    body = path.keys[:-1]
    return sum((a < s) != (b < s) for a, b in zip(body, body[1:]))


def zigzag_sets(path: BeforePath) -> tuple[list[frozenset[int]], frozenset[int]]:
    """``(Z, Z_P)`` where ``Z[i-1] = {a_i, a_{i+1}}`` for an alternation, else empty.

    ``a_1, a_2, ...`` is the reversed path without ``s``."""
    s = path.s
    a = path.keys[-2::-1]
    Z = [
        frozenset((a[i], a[i + 1])) if (a[i] < s) != (a[i + 1] < s) else frozenset()
        for i in range(len(a) - 1)
    ]
    return Z, frozenset().union(*Z) if Z else frozenset()


@dataclass(frozen=True)
class MonotonePartition:
    l_left: int
    l_right: int
    sets: dict[tuple[str, int], frozenset[int]]

    @property
    def count(self) -> int:
        return self.l_left + self.l_right


def monotone_partition(after: TreeArena, s: int | None = None) -> MonotonePartition:
    """Group keys ``> s`` by right-depth and keys ``< s`` by left-depth."""
    s = after.root_key if s is None else s
    groups: dict[tuple[str, int], set[int]] = {}
    for key, (_, ld, rd) in after.depths().items():
        if key > s:
            groups.setdefault(("R", rd), set()).add(key)
        elif key < s:
            groups.setdefault(("L", ld), set()).add(key)
    sets = {k: frozenset(v) for k, v in sorted(groups.items())}
    return MonotonePartition(
        sum(1 for side, _ in sets if side == "L"),
        sum(1 for side, _ in sets if side == "R"),
        sets,
    )


def is_monotone(after: TreeArena, X, s: int) -> bool:
    X = list(X)
    if not X:
        return True
    if all(x > s for x in X):
        return len({after.right_depth(x) for x in X}) == 1
    if all(x < s for x in X):
        return len({after.left_depth(x) for x in X}) == 1
    return False


def _contains(bounds: tuple[int | None, int | None], key: int) -> bool:
    lo, hi = bounds
    return (lo is None or lo < key) and (hi is None or key < hi)


def is_subtree_disjoint(after, X) -> bool:
    """Pairwise disjoint subtrees in ``after`` (any object with ``bounds``)."""
    xs = sorted(X)
    for a, b in zip(xs, xs[1:]):
        if _contains(after.bounds(a), b) or _contains(after.bounds(b), a):
            return False
    return True


@dataclass
class Decomposition:
    """Labelled sets covering (part of) a search path."""

    disjoint: list[frozenset[int]] = field(default_factory=list)
    monotone: list[frozenset[int]] = field(default_factory=list)
    k: int | None = None
    l: int | None = None

    def __post_init__(self) -> None:
        self.disjoint = [frozenset(x) for x in self.disjoint if x]
        self.monotone = [frozenset(x) for x in self.monotone if x]
        if self.k is None:
            self.k = len(self.disjoint)
        if self.l is None:
            self.l = len(self.monotone)

    @property
    def keys(self) -> frozenset[int]:
        return frozenset().union(*self.disjoint, *self.monotone)

    @property
    def disjoint_size(self) -> int:
        return sum(len(d) for d in self.disjoint)

    def problems(self, path: BeforePath, after: TreeArena) -> list[str]:
        out = []
        sets = self.disjoint + self.monotone
        if sum(map(len, sets)) != len(self.keys):
            out.append("sets overlap")
        if not self.keys <= set(path.keys):
            out.append("keys outside the path")
        if len(self.disjoint) > self.k or len(self.monotone) > self.l:
            out.append("more sets than declared")
        for d in self.disjoint:
            if not is_subtree_disjoint(after, d):
                out.append(f"not subtree-disjoint: {sorted(d)}")
        for m in self.monotone:
            if not is_monotone(after, m, path.s):
                out.append(f"not monotone: {sorted(m)}")
        return out

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "l": self.l,
            "disjoint": [sorted(d) for d in self.disjoint],
            "monotone": [sorted(m) for m in self.monotone],
        }


def canonical_decomposition(path: BeforePath, after: TreeArena) -> Decomposition:
    """Leaves of the after-tree (one disjoint set) plus the monotone classes of
    the remaining nodes of ``P \\ {s}``."""
    s = path.s
    leaves = frozenset(after.leaves()) - {s}
    mp = monotone_partition(after, s)
    mono = [m - leaves for m in mp.sets.values()]
    return Decomposition([leaves], mono, k=1)


def depth_class_decomposition(path: BeforePath, after: TreeArena) -> Decomposition:
    """Nodes grouped by depth in the after-tree (each class is an antichain).

    ``k`` is fixed to ``ceil(log2(1+|P|)) + 1``, the count a depth bound of
    ``ceil(log2(1+|P|))`` allows."""
    classes: dict[int, set[int]] = {}
    for key, (d, _, _) in after.depths().items():
        classes.setdefault(d, set()).add(key)
    k = math.ceil(math.log2(1 + len(path))) + 1
    return Decomposition([frozenset(classes[d]) for d in sorted(classes)], [], k=max(k, len(classes)), l=0)
