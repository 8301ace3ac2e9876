"""Local decompositions of a before-path to after-tree transformation.

A decomposition rewrites the path in steps ``Q_0 -> Q_1 -> ... -> Q_k``; step
``i`` replaces a path ``P_i`` of ``Q_i`` by a BST ``T_i`` on the same keys and
relinks hanging subtrees by key order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .analysis.decompose import monotone_partition
from .bst import NIL, BeforePath, TreeArena, TreeError, replace_path

CONDITIONS = ("start", "progress", "overlap", "no-revisit", "window-size")


@dataclass
class LocalDecomposition:
    steps: list[tuple[tuple[int, ...], TreeArena]] = field(default_factory=list)

    @property
    def window(self) -> int:
        return max((len(p) for p, _ in self.steps), default=0)

    def __len__(self) -> int:
        return len(self.steps)

    def to_json(self) -> str:
        return json.dumps(
            {
                "window": self.window,
                "steps": [
                    {"path": list(p), "root": t.root_key, "links": {str(k): v for k, v in t.children().items()}}
                    for p, t in self.steps
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "LocalDecomposition":
        data = json.loads(text)
        steps = []
        for st in data["steps"]:
            links = {int(k): tuple(v) for k, v in st["links"].items()}
            tree = TreeArena.from_links(st["root"], links) if links else TreeArena.from_links(st["root"], {})
            steps.append((tuple(st["path"]), tree))
        return cls(steps)


@dataclass(frozen=True)
class LocalityResult:
    ok: bool
    violation: str | None = None
    step: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def _as_downward_path(tree: TreeArena, keys) -> list[int]:
    """Order ``keys`` top-down and check they form a parent-child chain."""
    ks = sorted(keys, key=tree.depth)
    for a, b in zip(ks, ks[1:]):
        if tree.parent_key(b) != a:
            raise TreeError(f"step keys {sorted(keys)} are not a path of the current tree")
    return ks


def verify_local(
    before: BeforePath, after: TreeArena, dec: LocalDecomposition, window: int
) -> LocalityResult:
    """Replay ``dec`` from the path and check the five locality conditions.

    Structural problems (a step that is not a path, or whose replacement has
    other keys) raise :class:`TreeError`.  Returns the first violated
    condition otherwise; ``"final"`` means the replay does not end at
    ``after``."""
    q = before.as_tree()
    evicted: set[int] = set()
    prev: frozenset[int] | None = None
    prev_prev: frozenset[int] | None = None
    for i, (pkeys, repl) in enumerate(dec.steps):
        cur = frozenset(pkeys)
        if i == 0 and before.s not in cur:
            return LocalityResult(False, "start", i)
        if len(cur) > window:
            return LocalityResult(False, "window-size", i)
        if prev is not None:
            if not cur - prev:
                return LocalityResult(False, "progress", i)
            if not cur & prev:
                return LocalityResult(False, "overlap", i)
        if prev_prev is not None:
            evicted |= prev_prev - prev
        if cur & evicted:
            return LocalityResult(False, "no-revisit", i)
        ordered = _as_downward_path(q, cur)
        if sorted(repl.keys) != sorted(cur):
            raise TreeError(f"step {i}: replacement keys differ from the step path")
        replace_path(q, ordered, repl)
        prev_prev, prev = prev, cur
    if not dec.steps and len(before) > 1:
        return LocalityResult(False, "start", 0)
    if q != after:
        return LocalityResult(False, "final", len(dec.steps))
    return LocalityResult(True)


def _subtree_min_index(after: TreeArena, idx: dict[int, int]) -> dict[int, int]:
    """Smallest path index (shallowest before-position) in each after-subtree."""
    best = {}
    for i in after._postorder():
        k = after.keys[i]
        m = idx[k]
        for c in (after.left[i], after.right[i]):
            if c != NIL:
                m = min(m, best[after.keys[c]])
        best[k] = m
    return best


def synthesize_local(before: BeforePath, after: TreeArena) -> LocalDecomposition:
    """Bottom-up local decomposition.

    Walks the path from ``s`` towards the root.  After absorbing the suffix
    ``X = {x_j, ..., x_k}``, a node of ``X`` is *active* while its after-subtree
    still contains unprocessed keys; every other node of ``X`` already sits in
    its final after-subtree.  Active nodes are kept as a left-leaning path with
    the largest at the top, and each step rewrites ``{x_{j-1}}`` plus that
    path.  The active set holds at most one node per monotone class plus
    ``s``, so the window stays within the monotone class count plus two."""
    keys = before.keys
    k = len(keys)
    s = before.s
    if k == 1:
        return LocalDecomposition([((s,), TreeArena.from_links(s, {}))])
    idx = {key: i for i, key in enumerate(keys)}
    done_at = _subtree_min_index(after, idx)
    a_left = {after.keys[i]: after._key(after.left[i]) for i in range(after.n)}
    a_right = {after.keys[i]: after._key(after.right[i]) for i in range(after.n)}
    a_parent = {after.keys[i]: after._key(after.parent[i]) for i in range(after.n)}

    active = [s]
    steps = []
    for j in range(k - 1, 0, -1):
        x = keys[j - 1]
        step_keys = [x] + sorted(active, reverse=True)
        # after absorbing x the processed suffix starts at index j-1
        new_active = sorted((y for y in step_keys if done_at[y] < j - 1), reverse=True)
        fresh = set(step_keys) - set(new_active)
        links: dict[int, tuple[int | None, int | None]] = {}
        for y in fresh:
            lc = a_left[y] if a_left[y] in fresh else None
            rc = a_right[y] if a_right[y] in fresh else None
            if lc is not None or rc is not None:
                links[y] = (lc, rc)
        for a, b in zip(new_active, new_active[1:]):
            links[a] = (b, None)
        comps = [y for y in fresh if a_parent[y] not in fresh]
        if new_active:
            root = new_active[0]
            for c in comps:
                _insert(links, root, c)
        else:
            (root,) = comps
        steps.append((tuple(step_keys), TreeArena.from_links(root, links)))
        active = new_active
    return LocalDecomposition(steps)


def _insert(links: dict[int, tuple[int | None, int | None]], root: int, key: int) -> None:
    cur = root
    while True:
        a, b = links.get(cur, (None, None))
        if key < cur:
            if a is None:
                links[cur] = (key, b)
                return
            cur = a
        else:
            if b is None:
                links[cur] = (a, key)
                return
            cur = b


def monotone_bound_from_local(after: TreeArena, dec: LocalDecomposition, s: int | None = None) -> int:
    """Bound ``2w`` on the monotone class count implied by a window-``w``
    decomposition; raises if the after-tree exceeds it."""
    bound = 2 * dec.window
    mp = monotone_partition(after, s)
    if mp.count > bound:
        raise AssertionError(f"{mp.count} monotone classes exceed 2w = {bound}")
    return bound
