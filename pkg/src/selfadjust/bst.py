"""Arena binary search trees, search paths and path restructuring.

Nodes live in flat lists indexed by the rank of their key, so the in-order
traversal of a valid tree visits indices ``0, 1, ..., n-1``.  Keys are
distinct integers (``1..n`` by default).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

NIL = -1

LEFT = "L"
RIGHT = "R"


class TreeError(ValueError):
    """Raised for malformed trees, paths or restructurings."""


class TreeArena:
    """Index-based BST.  ``left/right/parent`` hold node indices or ``NIL``."""

    __slots__ = ("keys", "left", "right", "parent", "root", "_rank")

    def __init__(
        self,
        keys: Sequence[int],
        left: list[int],
        right: list[int],
        parent: list[int],
        root: int,
    ) -> None:
        self.keys = list(keys)
        self.left = left
        self.right = right
        self.parent = parent
        self.root = root
        self._rank = {k: i for i, k in enumerate(self.keys)}

    # -- construction ----------------------------------------------------

    @classmethod
    def _empty(cls, keys: Iterable[int]) -> "TreeArena":
        ks = sorted(keys)
        if len(set(ks)) != len(ks):
            raise TreeError("duplicate key")
        n = len(ks)
        return cls(ks, [NIL] * n, [NIL] * n, [NIL] * n, NIL)

    @classmethod
    def from_shape(cls, shape: Iterable[tuple[int, int | None, str | None]]) -> "TreeArena":
        """Build from ``(key, parent_key_or_None, side)`` triples; side is "L"/"R"."""
        triples = list(shape)
        keys = [t[0] for t in triples]
        tree = cls._empty(keys)
        roots = []
        for key, par, side in triples:
            i = tree._rank[key]
            if par is None:
                roots.append(i)
                continue
            if par not in tree._rank:
                raise TreeError(f"parent {par} of {key} is not a key")
            p = tree._rank[par]
            side = str(side).upper()[:1]
            slot = tree.left if side == LEFT else tree.right if side == RIGHT else None
            if slot is None:
                raise TreeError(f"bad side {side!r}")
            if slot[p] != NIL:
                raise TreeError(f"slot {side} of {par} used twice")
            slot[p] = i
            tree.parent[i] = p
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root, got {len(roots)}")
        tree.root = roots[0]
        _raise_if_invalid(tree)
        return tree

    @classmethod
    def from_links(
        cls, root: int, children: Mapping[int, tuple[int | None, int | None]]
    ) -> "TreeArena":
        """Build from ``{key: (left_key, right_key)}``; keys absent from the
        mapping are leaves."""
        keys = {root}
        for k, (a, b) in children.items():
            keys.add(k)
            if a is not None:
                keys.add(a)
            if b is not None:
                keys.add(b)
        tree = cls._empty(keys)
        rk = tree._rank
        for k, (a, b) in children.items():
            i = rk[k]
            if a is not None:
                tree.left[i] = rk[a]
                tree.parent[rk[a]] = i
            if b is not None:
                tree.right[i] = rk[b]
                tree.parent[rk[b]] = i
        tree.root = rk[root]
        return tree

    @classmethod
    def from_insertion_order(cls, order: Sequence[int]) -> "TreeArena":
        tree = cls._empty(order)
        rk = tree._rank
        it = iter(order)
        first = next(it, None)
        if first is None:
            return tree
        tree.root = rk[first]
        for key in it:
            i = rk[key]
            cur = tree.root
            while True:
                if i < cur:
                    if tree.left[cur] == NIL:
                        tree.left[cur] = i
                        break
                    cur = tree.left[cur]
                else:
                    if tree.right[cur] == NIL:
                        tree.right[cur] = i
                        break
                    cur = tree.right[cur]
            tree.parent[i] = cur
        return tree

    @classmethod
    def left_path(cls, n: int, start: int = 1) -> "TreeArena":
        """Left-leaning path: largest key at the root, smallest at the bottom."""
        keys = list(range(start, start + n))
        return cls.from_insertion_order(keys[::-1])

    @classmethod
    def right_path(cls, n: int, start: int = 1) -> "TreeArena":
        return cls.from_insertion_order(list(range(start, start + n)))

    @classmethod
    def random(cls, n: int, rng: random.Random | None = None, start: int = 1) -> "TreeArena":
        """Random BST from a uniformly random insertion order."""
        rng = rng or random.Random()
        order = list(range(start, start + n))
        rng.shuffle(order)
        return cls.from_insertion_order(order)

    @classmethod
    def balanced(cls, keys: Sequence[int]) -> "TreeArena":
        ks = sorted(keys)
        order: list[int] = []
        stack = [(0, len(ks) - 1)]
        while stack:
            lo, hi = stack.pop()
            if lo > hi:
                continue
            mid = (lo + hi) // 2
            order.append(ks[mid])
            stack.append((mid + 1, hi))
            stack.append((lo, mid - 1))
        return cls.from_insertion_order(order)

    def copy(self) -> "TreeArena":
        new = TreeArena.__new__(TreeArena)
        new.keys = self.keys
        new.left = self.left.copy()
        new.right = self.right.copy()
        new.parent = self.parent.copy()
        new.root = self.root
        new._rank = self._rank
        return new

    # -- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.keys)

    @property
    def n(self) -> int:
        return len(self.keys)

    def __contains__(self, key: object) -> bool:
        return key in self._rank

    def index(self, key: int) -> int:
        try:
            return self._rank[key]
        except KeyError:
            raise TreeError(f"key {key} not in tree") from None

    @property
    def root_key(self) -> int | None:
        return None if self.root == NIL else self.keys[self.root]

    def _key(self, i: int) -> int | None:
        return None if i == NIL else self.keys[i]

    def left_key(self, key: int) -> int | None:
        return self._key(self.left[self.index(key)])

    def right_key(self, key: int) -> int | None:
        return self._key(self.right[self.index(key)])

    def parent_key(self, key: int) -> int | None:
        return self._key(self.parent[self.index(key)])

    def children(self) -> dict[int, tuple[int | None, int | None]]:
        """``{key: (left_key, right_key)}`` for every internal node."""
        out = {}
        for i, k in enumerate(self.keys):
            a, b = self.left[i], self.right[i]
            if a != NIL or b != NIL:
                out[k] = (self._key(a), self._key(b))
        return out

    def inorder(self) -> list[int]:
        out: list[int] = []
        stack: list[int] = []
        cur = self.root
        while stack or cur != NIL:
            while cur != NIL:
                stack.append(cur)
                cur = self.left[cur]
            cur = stack.pop()
            out.append(self.keys[cur])
            cur = self.right[cur]
        return out

    def preorder(self) -> list[int]:
        out: list[int] = []
        stack = [self.root] if self.root != NIL else []
        while stack:
            i = stack.pop()
            out.append(self.keys[i])
            if self.right[i] != NIL:
                stack.append(self.right[i])
            if self.left[i] != NIL:
                stack.append(self.left[i])
        return out

    def search_path(self, s: int) -> "BeforePath":
        return search_path(self, s)

    def ancestors(self, key: int) -> list[int]:
        """Proper ancestors of ``key``, root first."""
        out = []
        i = self.parent[self.index(key)]
        while i != NIL:
            out.append(self.keys[i])
            i = self.parent[i]
        return out[::-1]

    def depth(self, key: int) -> int:
        d = 0
        i = self.parent[self.index(key)]
        while i != NIL:
            d += 1
            i = self.parent[i]
        return d

    def depths(self) -> dict[int, tuple[int, int, int]]:
        """``{key: (depth, left_depth, right_depth)}`` counted in edges."""
        out: dict[int, tuple[int, int, int]] = {}
        if self.root == NIL:
            return out
        stack = [(self.root, 0, 0, 0)]
        while stack:
            i, d, ld, rd = stack.pop()
            out[self.keys[i]] = (d, ld, rd)
            if self.left[i] != NIL:
                stack.append((self.left[i], d + 1, ld + 1, rd))
            if self.right[i] != NIL:
                stack.append((self.right[i], d + 1, ld, rd + 1))
        return out

    def height(self) -> int:
        """Height in edges (a single node has height 0)."""
        return max((d for d, _, _ in self.depths().values()), default=-1)

    def left_depth(self, key: int) -> int:
        return self._side_depth(key, self.left)

    def right_depth(self, key: int) -> int:
        return self._side_depth(key, self.right)

    def _side_depth(self, key: int, side: list[int]) -> int:
        i = self.index(key)
        c = 0
        while self.parent[i] != NIL:
            p = self.parent[i]
            if side[p] == i:
                c += 1
            i = p
        return c

    def bounds(self, key: int) -> tuple[int | None, int | None]:
        """Exclusive key bounds of the subtree of ``key``: its first left and
        first right ancestor (``None`` for an infinite side)."""
        i = self.index(key)
        lo = hi = None
        while self.parent[i] != NIL:
            p = self.parent[i]
            if self.left[p] == i:
                if hi is None:
                    hi = self.keys[p]
            elif lo is None:
                lo = self.keys[p]
            if lo is not None and hi is not None:
                break
            i = p
        return lo, hi

    def all_bounds(self) -> dict[int, tuple[int | None, int | None]]:
        """:meth:`bounds` for every key in one top-down pass."""
        out: dict[int, tuple[int | None, int | None]] = {}
        if self.root == NIL:
            return out
        stack = [(self.root, None, None)]
        while stack:
            i, lo, hi = stack.pop()
            k = self.keys[i]
            out[k] = (lo, hi)
            if self.left[i] != NIL:
                stack.append((self.left[i], lo, k))
            if self.right[i] != NIL:
                stack.append((self.right[i], k, hi))
        return out

    def subtree_keys(self, key: int) -> list[int]:
        out = []
        stack = [self.index(key)]
        while stack:
            i = stack.pop()
            out.append(self.keys[i])
            if self.left[i] != NIL:
                stack.append(self.left[i])
            if self.right[i] != NIL:
                stack.append(self.right[i])
        return sorted(out)

    def subtree_sizes(self) -> dict[int, int]:
        sizes = [1] * self.n
        for i in self._postorder():
            for c in (self.left[i], self.right[i]):
                if c != NIL:
                    sizes[i] += sizes[c]
        return {self.keys[i]: sizes[i] for i in range(self.n)}

    def _postorder(self) -> list[int]:
        out: list[int] = []
        stack = [self.root] if self.root != NIL else []
        while stack:
            i = stack.pop()
            out.append(i)
            if self.left[i] != NIL:
                stack.append(self.left[i])
            if self.right[i] != NIL:
                stack.append(self.right[i])
        return out[::-1]

    def leaves(self) -> list[int]:
        return [
            k
            for i, k in enumerate(self.keys)
            if self.left[i] == NIL and self.right[i] == NIL and (self.parent[i] != NIL or i == self.root)
        ]

    def to_shape(self) -> list[tuple[int, int | None, str | None]]:
        out = []
        for i, k in enumerate(self.keys):
            p = self.parent[i]
            if p == NIL:
                out.append((k, None, None))
            else:
                out.append((k, self.keys[p], LEFT if self.left[p] == i else RIGHT))
        return out

    def shape_key(self) -> tuple:
        """Hashable canonical description (keys plus child links)."""
        return (tuple(self.keys), self.root, tuple(self.left), tuple(self.right))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeArena):
            return NotImplemented
        return self.shape_key() == other.shape_key()

    def __hash__(self) -> int:
        return hash(self.shape_key())

    def __repr__(self) -> str:
        return f"TreeArena(n={self.n}, root={self.root_key}, {self.sketch()})"

    def sketch(self) -> str:
        """Parenthesised form, e.g. ``2(1,3)``."""

        def rec(i: int) -> str:
            if i == NIL:
                return "."
            if self.left[i] == NIL and self.right[i] == NIL:
                return str(self.keys[i])
            return f"{self.keys[i]}({rec(self.left[i])},{rec(self.right[i])})"

        if self.n > 64:
            return "..."
        return rec(self.root)


def build_tree(shape: Iterable[tuple[int, int | None, str | None]]) -> TreeArena:
    return TreeArena.from_shape(shape)


def _violations(tree: TreeArena) -> str | None:
    n = tree.n
    if n == 0:
        return None if tree.root == NIL else "root set on empty tree"
    if not 0 <= tree.root < n:
        return "no root"
    if tree.parent[tree.root] != NIL:
        return "root has a parent"
    for i in range(n):
        for c in (tree.left[i], tree.right[i]):
            if c != NIL and (not 0 <= c < n or tree.parent[c] != i):
                return f"inconsistent link at {tree.keys[i]}"
        p = tree.parent[i]
        if i != tree.root and (p == NIL or (tree.left[p] != i and tree.right[p] != i)):
            return f"node {tree.keys[i]} detached"
    # in-order must visit ranks 0..n-1; a cycle or unreachable node breaks this
    seen = 0
    stack: list[int] = []
    cur = tree.root
    expect = 0
    while stack or cur != NIL:
        while cur != NIL:
            stack.append(cur)
            cur = tree.left[cur]
            if len(stack) > n:
                return "cycle"
        cur = stack.pop()
        if cur != expect:
            return "BST order violated"
        expect += 1
        seen += 1
        if seen > n:
            return "cycle"
        cur = tree.right[cur]
    if seen != n:
        return "unreachable nodes"
    if any(tree.keys[i] >= tree.keys[i + 1] for i in range(n - 1)):
        return "keys not strictly increasing"
    return None


def validate_bst(tree: TreeArena) -> bool:
    return _violations(tree) is None


def _raise_if_invalid(tree: TreeArena) -> None:
    v = _violations(tree)
    if v is not None:
        raise TreeError(v)


@dataclass(frozen=True)
class BeforePath:
    """Root-to-``s`` key sequence of one access."""

    keys: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.keys:
            raise TreeError("empty path")
        object.__setattr__(self, "keys", tuple(self.keys))

    @property
    def accessed(self) -> int:
        return self.keys[-1]

    @property
    def s(self) -> int:
        return self.keys[-1]

    def __len__(self) -> int:
        return len(self.keys)

    def __iter__(self):
        return iter(self.keys)

    def depth(self, key: int) -> int:
        """Number of ancestors of ``key`` on the path."""
        return self._index[key]

    @property
    def _index(self) -> dict[int, int]:
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {k: i for i, k in enumerate(self.keys)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def is_valid(self) -> bool:
        if len(set(self.keys)) != len(self.keys):
            return False
        s = self.s
        lo = hi = None
        for k in self.keys:
            if (lo is not None and k <= lo) or (hi is not None and k >= hi):
                return False
            if s < k:
                hi = k
            elif s > k:
                lo = k
        return True

    def bounds(self, key: int) -> tuple[int | None, int | None]:
        """Exclusive key bounds of the subtree of ``key`` before the access."""
        b = self.__dict__.get("_bounds")
        if b is None:
            b = {}
            s = self.s
            lo = hi = None
            for k in self.keys:
                b[k] = (lo, hi)
                if s < k:
                    hi = k
                elif s > k:
                    lo = k
            object.__setattr__(self, "_bounds", b)
        return b[key]

    def directions(self) -> list[str]:
        """Direction (L/R) taken below each non-final entry."""
        s = self.s
        return [LEFT if s < k else RIGHT for k in self.keys[:-1]]

    def as_tree(self) -> TreeArena:
        """The path itself as a BST on its own keys."""
        links = {}
        for a, b in zip(self.keys, self.keys[1:]):
            links[a] = (b, None) if b < a else (None, b)
        return TreeArena.from_links(self.keys[0], links)

    @classmethod
    def from_directions(cls, dirs: Sequence[str], start: int = 1) -> "BeforePath":
        """Path of ``len(dirs)+1`` nodes whose i-th edge goes ``dirs[i]``.

        Keys are ``start..start+len(dirs)``; the accessed key is fixed by the
        turn pattern."""
        k = len(dirs) + 1
        lo, hi = start, start + k - 1
        keys = []
        for d in dirs:
            if d == LEFT:
                keys.append(hi)
                hi -= 1
            else:
                keys.append(lo)
                lo += 1
        keys.append(lo)
        return cls(tuple(keys))


def search_path(tree: TreeArena, s: int) -> BeforePath:
    target = tree.index(s)
    out = []
    cur = tree.root
    keys = tree.keys
    while cur != target:
        out.append(keys[cur])
        cur = tree.left[cur] if target < cur else tree.right[cur]
    out.append(s)
    return BeforePath(tuple(out))


def _check_after(path: BeforePath, after: TreeArena) -> None:
    if set(after.keys) != set(path.keys) or after.n != len(path):
        raise TreeError("after-tree key set differs from the path key set")
    if after.root_key != path.s:
        raise TreeError("after-tree root is not the accessed element")


def replace_path(tree: TreeArena, path_keys: Sequence[int], new: TreeArena) -> TreeArena:
    """Replace the downward path ``path_keys`` of ``tree`` (in place) by the BST
    ``new`` on the same keys; hanging subtrees relink by key order."""
    idx = [tree.index(k) for k in path_keys]
    for a, b in zip(idx, idx[1:]):
        if tree.parent[b] != a:
            raise TreeError("keys do not form a downward path")
    if sorted(new.keys) != sorted(path_keys) or len(new.keys) != len(idx):
        raise TreeError("replacement keys differ from path keys")
    top = idx[0]
    top_parent = tree.parent[top]
    top_was_left = top_parent != NIL and tree.left[top_parent] == top
    srt = sorted(idx)
    onpath = set(idx)
    left, right, parent = tree.left, tree.right, tree.parent

    # pendent subtree sitting in each of the k+1 key gaps of the path
    pend = [left[srt[0]]]
    for a, b in zip(srt, srt[1:]):
        r = right[a]
        pend.append(left[b] if r != NIL and r in onpath else r)
    pend.append(right[srt[-1]])

    # new.keys is sorted, so new-index j corresponds to srt[j]
    for j, i in enumerate(srt):
        a, b = new.left[j], new.right[j]
        left[i] = srt[a] if a != NIL else NIL
        right[i] = srt[b] if b != NIL else NIL
        p = new.parent[j]
        parent[i] = srt[p] if p != NIL else NIL
    slots = [(srt[0], left)]
    for j in range(len(srt) - 1):
        if new.right[j] == NIL:
            slots.append((srt[j], right))
        else:
            slots.append((srt[j + 1], left))
    slots.append((srt[-1], right))
    for (owner, side), sub in zip(slots, pend):
        side[owner] = sub
        if sub != NIL:
            parent[sub] = owner

    new_top = srt[new.root]
    parent[new_top] = top_parent
    if top_parent == NIL:
        tree.root = new_top
    elif top_was_left:
        left[top_parent] = new_top
    else:
        right[top_parent] = new_top
    return tree


def apply_restructure(
    tree: TreeArena, path: BeforePath, after: TreeArena, inplace: bool = False
) -> TreeArena:
    """Replace the search path by ``after``, reattaching pendent subtrees."""
    _check_after(path, after)
    if tree.root_key != path.keys[0]:
        raise TreeError("path does not start at the root")
    out = tree if inplace else tree.copy()
    return replace_path(out, path.keys, after)


Transformer = Callable[[BeforePath], TreeArena]


@dataclass
class AccessRecord:
    """One audited access; analysis fields default to NaN until filled."""

    access_index: int
    key: int
    cost: int
    z: int = 0
    leaves: int = 0
    l_left: int = 0
    l_right: int = 0
    phi_before: float = float("nan")
    phi_after: float = float("nan")
    slack_lemma1: float = float("nan")
    slack_lemma2: float = float("nan")
    slack_zigzag: float = float("nan")
    slack_theorem: float = float("nan")
    lost_min_ratio: float = float("nan")
    gained_max: int = 0


def access(
    tree: TreeArena,
    s: int,
    t: Transformer,
    *,
    inplace: bool = False,
    index: int = 0,
    hook: Callable[[BeforePath, TreeArena, AccessRecord], None] | None = None,
) -> tuple[TreeArena, AccessRecord]:
    path = search_path(tree, s)
    after = t(path)
    rec = AccessRecord(access_index=index, key=s, cost=len(path))
    if hook is not None:
        hook(path, after, rec)
    return apply_restructure(tree, path, after, inplace=inplace), rec
