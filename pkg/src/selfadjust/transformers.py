"""Before-path to after-tree maps.

Every transformer takes a :class:`BeforePath` and returns a
:class:`TreeArena` on the path keys rooted at the accessed element.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .bst import LEFT, NIL, RIGHT, BeforePath, TreeArena

Links = dict[int, tuple[int | None, int | None]]


@dataclass(frozen=True)
class SideSplit:
    """Path keys on each side of ``s``, deepest first.

    ``left_side`` is then decreasing by key and ``right_side`` increasing."""

    s: int
    left_side: tuple[int, ...]
    right_side: tuple[int, ...]


def side_split(path: BeforePath) -> SideSplit:
    s = path.s
    rev = path.keys[-2::-1]
    return SideSplit(
        s,
        tuple(k for k in rev if k < s),
        tuple(k for k in rev if k > s),
    )


def _set(links: Links, parent: int, child: int | None, side: str) -> None:
    a, b = links.get(parent, (None, None))
    links[parent] = (child, b) if side == LEFT else (a, child)


def _rtr_links(path: BeforePath) -> Links:
    sp = side_split(path)
    links: Links = {}
    for side_keys, side in ((sp.left_side, LEFT), (sp.right_side, RIGHT)):
        # shallowest first: each deeper node hangs toward s
        chain = side_keys[::-1]
        if not chain:
            continue
        _set(links, sp.s, chain[0], side)
        inner = RIGHT if side == LEFT else LEFT
        for a, b in zip(chain, chain[1:]):
            _set(links, a, b, inner)
    return links


def rotate_to_root(path: BeforePath) -> TreeArena:
    """Root ``s``; each side keeps its before-path ancestor order as a chain."""
    return TreeArena.from_links(path.s, _rtr_links(path))


def splay_global(path: BeforePath) -> TreeArena:
    """Splay described as rotate-to-root followed by pairwise rotations.

    With ``v0 = s, v1, v2, ...`` the reversed path, each pair
    ``(v_{2i+1}, v_{2i+2})`` lying on one side is rotated: ``v_{2i+2}`` leaves
    its side chain and becomes the outer child of ``v_{2i+1}``."""
    s = path.s
    rev = path.keys[::-1]
    # per side chain, listed from the top (child of s) downwards
    chains: dict[str, list[int]] = {LEFT: [], RIGHT: []}
    hang: dict[int, int] = {}
    for j in range(len(rev) - 1, 0, -1):
        v = rev[j]
        side = LEFT if v < s else RIGHT
        if j % 2 == 0 and (rev[j - 1] < s) == (v < s):
            hang[rev[j - 1]] = v
        else:
            chains[side].append(v)
    links: Links = {}
    for side, chain in chains.items():
        if not chain:
            continue
        _set(links, s, chain[0], side)
        inner = RIGHT if side == LEFT else LEFT
        for a, b in zip(chain, chain[1:]):
            _set(links, a, b, inner)
        for v in chain:
            if v in hang:
                _set(links, v, hang[v], side)
    return TreeArena.from_links(s, links)


def splay_classic(path: BeforePath) -> TreeArena:
    """Bottom-up zig / zig-zig / zig-zag rotations on the path tree."""
    tree = path.as_tree()
    x = tree.index(path.s)
    left, right, parent = tree.left, tree.right, tree.parent

    def rotate(c: int) -> None:
        p = parent[c]
        g = parent[p]
        if left[p] == c:
            left[p] = right[c]
            if right[c] != NIL:
                parent[right[c]] = p
            right[c] = p
        else:
            right[p] = left[c]
            if left[c] != NIL:
                parent[left[c]] = p
            left[c] = p
        parent[p] = c
        parent[c] = g
        if g == NIL:
            tree.root = c
        elif left[g] == p:
            left[g] = c
        else:
            right[g] = c

    while parent[x] != NIL:
        p = parent[x]
        g = parent[p]
        if g == NIL:
            rotate(x)
        elif (left[g] == p) == (left[p] == x):
            rotate(p)
            rotate(x)
        else:
            rotate(x)
            rotate(x)
    return tree


def _balanced_links(keys: list[int], links: Links) -> int | None:
    """Lower-median balanced BST on sorted ``keys``; returns its root."""
    if not keys:
        return None
    mid = (len(keys) - 1) // 2
    root = keys[mid]
    a = _balanced_links(keys[:mid], links)
    b = _balanced_links(keys[mid + 1 :], links)
    if a is not None or b is not None:
        links[root] = (a, b)
    return root


def path_balance(path: BeforePath) -> TreeArena:
    """Root ``s`` with each side rebuilt as a median-rooted balanced BST."""
    s = path.s
    links: Links = {}
    lo = _balanced_links(sorted(k for k in path.keys if k < s), links)
    hi = _balanced_links(sorted(k for k in path.keys if k > s), links)
    if lo is not None or hi is not None:
        links[s] = (lo, hi)
    return TreeArena.from_links(s, links)


def _block3_side(keys: tuple[int, ...], s: int, side: str, links: Links) -> None:
    """Lay out one side; ``keys`` are deepest-first (closest to ``s`` first)."""
    m = len(keys)
    if m == 0:
        return
    inner = RIGHT if side == LEFT else LEFT
    outer = side
    b = (None,) + keys  # 1-based: b[1] deepest
    full = m // 3
    rem = list(b[3 * full + 1 :])  # topmost leftovers, deepest first
    spine = [b[3 * j] for j in range(full, 0, -1)]  # top spine node first
    chain = rem[::-1] + spine
    _set(links, s, chain[0], side)
    for a, c in zip(chain, chain[1:]):
        _set(links, a, c, inner)
    if full:
        # lowest block: left-leaning (mirror: right-leaning) chain b3 -> b2 -> b1
        _set(links, b[3], b[2], inner)
        _set(links, b[2], b[1], inner)
        for j in range(2, full + 1):
            # members of block j hang off the spine node of block j-1
            _set(links, b[3 * (j - 1)], b[3 * j - 1], outer)
            _set(links, b[3 * j - 1], b[3 * j - 2], inner)


def block3_depth_halving(path: BeforePath) -> TreeArena:
    """Strict depth-halving by blocks of three per side.

    Per side the keys ``b1, b2, ...`` (deepest first) are cut into blocks of
    three from the bottom, leftovers on top.  Block maxima form a spine below
    ``s``; the other two members of each block hang off the spine node one
    block lower.  Every node then keeps roughly a third of its same-side
    ancestors and gains at most two descendants."""
    sp = side_split(path)
    links: Links = {}
    _block3_side(sp.left_side, sp.s, LEFT, links)
    _block3_side(sp.right_side, sp.s, RIGHT, links)
    return TreeArena.from_links(sp.s, links)


def identity(path: BeforePath) -> TreeArena:
    """Keeps the path as it is (only valid when ``s`` is already the root)."""
    return path.as_tree()


TRANSFORMERS: dict[str, Callable[[BeforePath], TreeArena]] = {
    "rotate-to-root": rotate_to_root,
    "splay": splay_global,
    "splay-classic": splay_classic,
    "path-balance": path_balance,
    "block3": block3_depth_halving,
}


def get_transformer(name: str) -> Callable[[BeforePath], TreeArena]:
    try:
        return TRANSFORMERS[name]
    except KeyError:
        raise KeyError(f"unknown algorithm {name!r}; choose from {sorted(TRANSFORMERS)}") from None
