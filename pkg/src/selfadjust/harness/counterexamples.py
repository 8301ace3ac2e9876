"""Block constructions of before/after pairs that defeat the structural
sufficient conditions while each node still sheds many ancestors.

The constructions are ours; what is guaranteed is the property report that
comes with each instance.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field

from ..analysis.audits import depth_halving_conditions, lost_gained_all
from ..analysis.decompose import monotone_partition, side_alternations
from ..bst import LEFT, RIGHT, BeforePath, TreeArena
from ..transformers import Links, _balanced_links, _set

FAMILIES = ("fig2-left", "fig2-right", "fig3")
MIN_N = 16


@dataclass
class CounterexampleReport:
    family: str
    n: int
    checks: dict[str, bool] = field(default_factory=dict)
    stats: dict[str, float] = field(default_factory=dict)
    witness: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "ok": self.ok,
            "checks": self.checks,
            "stats": self.stats,
            "witness": self.witness,
        }


def _flip(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


def _twig_side_layout(top_first: list[int], s: int, side: str, q: int, links: Links) -> None:
    """Top ``3q`` nodes as blocks of three (first of each block on the spine,
    the other two hanging off the next spine node), the rest as a chain."""
    inner = _flip(side)
    u = [None] + top_first
    m = len(top_first)
    q = min(q, (m - 1) // 3)
    spine = [u[i] for i in range(1, min(3 * q, m) + 1, 3)] + top_first[3 * q :]
    _set(links, s, spine[0], side)
    for a, b in zip(spine, spine[1:]):
        _set(links, a, b, inner)
    for i in range(1, q + 1):
        _set(links, u[3 * i + 1], u[3 * i - 1], side)
        _set(links, u[3 * i - 1], u[3 * i], inner)


def _assign_keys(sides: list[str]) -> tuple[list[int], int]:
    """Keys for a top-down side sequence: left side gets 1, 2, ... from the
    top, right side n, n-1, ... from the top, ``s`` sits between."""
    n_left = sides.count(LEFT)
    n = len(sides) + 1
    s = n_left + 1
    lo, hi = 1, n
    keys = []
    for side in sides:
        if side == LEFT:
            keys.append(lo)
            lo += 1
        else:
            keys.append(hi)
            hi -= 1
    return keys + [s], s


def fig2_left(n: int) -> tuple[BeforePath, TreeArena]:
    """Both sides, ``O(sqrt n)`` alternations and leaves; every node loses about
    half of its ancestors and gains at most two descendants.

    The top ``6q`` path nodes alternate sides one by one and are laid out in
    blocks of three, leaving ``2q`` nodes per side in twigs that every deeper
    node loses.  Below, the path alternates in runs of ``2q - 1``; the lost
    twig nodes pay for the imbalance inside a run."""
    _require(n)
    q = max(1, math.ceil(math.sqrt(n) / 2))
    run = max(1, 2 * q - 1)
    sides: list[str] = []
    while len(sides) < min(6 * q, n - 1):
        sides.append(RIGHT if len(sides) % 2 == 0 else LEFT)
    cur = RIGHT
    while len(sides) < n - 1:
        sides.extend([cur] * min(run, n - 1 - len(sides)))
        cur = _flip(cur)
    keys, s = _assign_keys(sides)
    links: Links = {}
    for side in (LEFT, RIGHT):
        top_first = [k for k, sd in zip(keys, sides) if sd == side]
        if top_first:
            _twig_side_layout(top_first, s, side, q, links)
    return BeforePath(tuple(keys)), TreeArena.from_links(s, links)


def fig2_right(n: int) -> tuple[BeforePath, TreeArena]:
    """One-sided path; every node keeps ``O(sqrt n)`` ancestors.

    Keys above ``s`` are cut into blocks of about ``sqrt n`` consecutive keys.
    Block minima form a chain below ``s``; each block's other keys hang off its
    minimum as a chain in their old order."""
    _require(n)
    keys = tuple(range(n, 0, -1))
    s = 1
    right = list(range(2, n + 1))
    b = math.ceil(math.sqrt(len(right)))
    blocks = [right[i : i + b] for i in range(0, len(right), b)]
    links: Links = {}
    heads = [blk[0] for blk in blocks][::-1]
    _set(links, s, heads[0], RIGHT)
    for a, c in zip(heads, heads[1:]):
        _set(links, a, c, LEFT)
    for blk in blocks:
        rest = blk[1:][::-1]
        if rest:
            _set(links, blk[0], rest[0], RIGHT)
            for a, c in zip(rest, rest[1:]):
                _set(links, a, c, LEFT)
    return BeforePath(keys), TreeArena.from_links(s, links)


def _budget(d: int) -> int:
    return math.ceil(d / 2) + 2


class _HalvingLayout:
    """Lays out keys whose path depths are consecutive so that each lands at
    after-depth at most ``ceil(d/2) + 2``.

    A layout rooted at depth ``D`` is a left spine; spine node ``t`` closes a
    block whose earlier (larger, shallower) keys form a pocket under its right
    child, laid out the same way one level lower.  ``cap(j, D)`` is the most
    keys starting at path depth ``j`` this greedy scheme fits below depth
    ``D``."""

    def __init__(self, limit: int) -> None:
        self.limit = limit
        self._cap: dict[tuple[int, int], int] = {}

    def cap(self, j: int, D: int) -> int:
        # shifting j by 2 and D by 1 moves every budget in step
        key = (j % 2, D - math.ceil(j / 2))
        if key in self._cap:
            return self._cap[key]
        total = 0
        depth = D
        if D <= _budget(j):
            while total < self.limit:
                jt = j + total
                p = min(self.cap(jt, depth + 1), self.limit - total - 1)
                if depth > _budget(jt + p):
                    break
                total += p + 1
                depth += 1
        self._cap[key] = total
        return total

    def spine_length(self, m: int, j: int, D: int) -> int:
        """Length of the spine :meth:`build` would return for ``m`` keys."""
        count, pos, depth = 0, 0, D
        while pos < m:
            jt = j + pos
            rem = m - pos
            c = self.cap(jt, depth + 1)
            if c >= rem and depth > _budget(jt + rem - 1):
                return count + self.spine_length(rem, jt, depth + 1)
            pos += min(c, rem - 1) + 1
            depth += 1
            count += 1
        return count

    def build(self, top_first: list[int], j: int, D: int, links: Links) -> list[int]:
        """Place ``top_first`` (path depths ``j, j+1, ...``); returns the spine.

        Any prefix of a feasible layout is feasible: dropping the smallest key
        lifts its right subtree by one level.  So when the last block's head
        would not fit, its pocket takes the head's place on the spine."""
        spine = []
        pos = 0
        depth = D
        m = len(top_first)
        while pos < m:
            jt = j + pos
            rem = m - pos
            c = self.cap(jt, depth + 1)
            if c >= rem and depth > _budget(jt + rem - 1):
                return spine + self.build(top_first[pos:], jt, depth + 1, links)
            p = min(c, rem - 1)
            if depth > _budget(jt + p):
                raise ValueError("keys do not fit the depth bound")
            blk = top_first[pos : pos + p + 1]
            head = blk[-1]
            if p:
                sub = self.build(blk[:-1], jt, depth + 1, links)
                _set(links, head, sub[0], RIGHT)
                for a, c2 in zip(sub, sub[1:]):
                    _set(links, a, c2, LEFT)
            spine.append(head)
            pos += p + 1
            depth += 1
        return spine


def fig3(n: int) -> tuple[BeforePath, TreeArena]:
    """One-sided path rearranged so each node roughly halves its depth while
    one key collects a linear number of right turns.

    The ``L`` smallest keys above ``s`` form a right-going chain hanging at
    the bottom of a short left spine; the larger keys sit in pockets off that
    spine, recursively laid out the same way."""
    _require(n)
    keys = tuple(range(n, 0, -1))
    s = 1
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 8 * n + 1000))
    try:
        lay = _HalvingLayout(n)
        for L in range((n - 1) // 2, 0, -1):
            depth0 = lay.spine_length(n - 1 - L, 0, 1)
            # chain key i + 1 sits at depth depth0 + i and path depth n - i - 1
            if all(depth0 + i <= _budget(n - i - 1) for i in range(1, L + 1)):
                break
        else:
            raise ValueError(f"n={n} too small for the block structure")
        links: Links = {}
        spine = lay.build(list(range(n, L + 1, -1)), 0, 1, links)
    finally:
        sys.setrecursionlimit(old)
    _set(links, s, spine[0], RIGHT)
    for a, c in zip(spine, spine[1:]):
        _set(links, a, c, LEFT)
    _set(links, spine[-1], 2, LEFT)
    for c in range(2, L + 1):
        _set(links, c, c + 1, RIGHT)
    return BeforePath(keys), TreeArena.from_links(s, links)


GENERATORS = {"fig2-left": fig2_left, "fig2-right": fig2_right, "fig3": fig3}


def _require(n: int) -> None:
    if n < MIN_N:
        raise ValueError(f"n must be at least {MIN_N}")


def max_turns(path: BeforePath, after: TreeArena) -> tuple[int, int]:
    """Most right turns (keys above ``s``) or left turns (below) of any key."""
    s = path.s
    best = (0, s)
    for key, (_, ld, rd) in after.depths().items():
        t = rd if key > s else ld if key < s else 0
        best = max(best, (t, key))
    return best


HALVING_EPS = (0.05, 0.1, 1 / 6, 0.25)


def property_report(family: str, path: BeforePath, after: TreeArena) -> CounterexampleReport:
    n = len(path)
    rep = CounterexampleReport(family, n)
    lg = lost_gained_all(path, after)
    s = path.s
    z = side_alternations(path)
    leaves = len(set(after.leaves()) - {s})
    mp = monotone_partition(after, s)
    rep.stats.update(z=z, leaves=leaves, l=mp.count, sqrt_n=math.sqrt(n))
    others = [x for x in path.keys if x != s]
    if family == "fig2-left":
        rep.checks["loses_half"] = all(lg[x].lost_ancestors >= path.depth(x) // 2 for x in path.keys)
        rep.checks["gains_le_2_descendants"] = all(lg[x].gained_descendants <= 2 for x in others)
        rep.checks["leaves_plus_z"] = leaves + z <= 8 * math.sqrt(n)
        fails = {}
        for eps in HALVING_EPS:
            res = depth_halving_conditions(path, after, eps, 4, 2, lg)
            if not res.ok:
                fails[f"{eps:.4g}"] = {"key": res.witness, "depth": path.depth(res.witness), "detail": res.detail}
        rep.witness["halving_failures"] = fails
        deep = [x for x in path.keys if path.depth(x) >= n // 2]
        rep.stats["deep_lost_ratio_min"] = min(lg[x].lost_ancestors / path.depth(x) for x in deep)
    elif family == "fig2-right":
        r = 2 * math.sqrt(n)
        rep.checks["loses_all_but_2sqrt_n"] = all(
            lg[x].lost_ancestors >= path.depth(x) - r for x in path.keys
        )
        # every node trivially gains s; count the others
        rep.checks["gains_le_1_ancestor"] = all(lg[x].gained_ancestors - 1 <= 1 for x in others)
        rep.checks["z_zero"] = z == 0
        rep.checks["leaves_le_4sqrt_n"] = leaves <= 4 * math.sqrt(n)
    elif family == "fig3":
        depths = after.depths()
        rep.checks["depth_halves"] = all(
            depths[x][0] <= math.ceil(path.depth(x) / 2) + 2 for x in path.keys
        )
        t, key = max_turns(path, after)
        rep.checks["turns_ge_n_over_8"] = t >= n / 8
        rep.stats["max_turns"] = t
        rep.witness["turn_key"] = key
    else:
        raise ValueError(f"unknown family {family!r}")
    return rep


def gen_counterexample(family: str, n: int) -> tuple[BeforePath, TreeArena, CounterexampleReport]:
    try:
        gen = GENERATORS[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}") from None
    path, after = gen(n)
    return path, after, property_report(family, path, after)
