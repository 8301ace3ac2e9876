"""Brute-force oracles shared by the tests.

These deliberately avoid the package's own traversal helpers: subtrees,
search paths and potentials are recomputed from the raw child links.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import pytest

from selfadjust.bst import BeforePath, TreeArena


@lru_cache(maxsize=None)
def _shapes(lo: int, hi: int) -> tuple:
    """Every BST on keys lo..hi as nested (key, left, right) tuples."""
    if lo > hi:
        return (None,)
    out = []
    for r in range(lo, hi + 1):
        for a in _shapes(lo, r - 1):
            for b in _shapes(r + 1, hi):
                out.append((r, a, b))
    return tuple(out)


def _links(shape, acc):
    if shape is None:
        return None
    k, a, b = shape
    la, lb = _links(a, acc), _links(b, acc)
    if la is not None or lb is not None:
        acc[k] = (la, lb)
    return k


def all_bsts(n: int):
    for shape in _shapes(1, n):
        acc: dict = {}
        root = _links(shape, acc)
        yield TreeArena.from_links(root, acc)


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def naive_children(tree: TreeArena) -> dict:
    return tree.children()


def naive_subtree(tree: TreeArena, key: int) -> set[int]:
    ch = naive_children(tree)
    out, stack = set(), [key]
    while stack:
        k = stack.pop()
        out.add(k)
        for c in ch.get(k, (None, None)):
            if c is not None:
                stack.append(c)
    return out


def naive_search(tree: TreeArena, s: int) -> list[int]:
    ch = naive_children(tree)
    cur, out = tree.root_key, []
    while True:
        out.append(cur)
        if cur == s:
            return out
        cur = ch[cur][0] if s < cur else ch[cur][1]


def naive_potential(tree: TreeArena, w: dict) -> float:
    return sum(math.log2(sum(w[k] for k in naive_subtree(tree, a))) for a in tree.keys)


def all_paths(max_len: int):
    """Every before-path shape (direction pattern) with at most ``max_len`` nodes."""
    for L in range(1, max_len + 1):
        for dirs in itertools.product("LR", repeat=L - 1):
            yield BeforePath.from_directions(dirs)


@pytest.fixture
def small_bsts():
    return {n: list(all_bsts(n)) for n in range(1, 7)}


# one line per acceptance criterion, echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
