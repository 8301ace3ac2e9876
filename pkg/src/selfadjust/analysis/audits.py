"""Per-access audits of the potential inequalities.

Each ``check_*`` function returns a slack (right-hand side minus left-hand
side); a correct inequality means ``slack >= 0`` up to rounding.  ``before``
and ``after`` are anything exposing ``bounds(key)``: full trees, the
:class:`BeforePath` itself, or a small after-tree (a search path always
starts at the root, so path-local bounds equal the full-tree bounds).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..bst import BeforePath, TreeArena
from .decompose import (
    Decomposition,
    is_monotone,
    is_subtree_disjoint,
    zigzag_sets,
)
from .weights import WeightMap, potential_drop


class AuditPreconditionError(ValueError):
    """The audited set does not have the structure the inequality needs."""


def _log_W_over_subtree_s(before, w: WeightMap, s: int) -> float:
    return w.log2_ratio_total(*before.bounds(s))


def check_lemma_disjoint(before, after, w: WeightMap, X, s: int, *, check: bool = True) -> float:
    """``2 + 8 log(W/w(T(s))) + Phi_T(X) - Phi_T'(X) - |X|``."""
    X = list(X)
    if check and not is_subtree_disjoint(after, X):
        raise AuditPreconditionError("set is not subtree-disjoint after the access")
    return 2 + 8 * _log_W_over_subtree_s(before, w, s) + potential_drop(before, after, w, X) - len(X)


def monotone_containment(path: BeforePath, before, after, X) -> bool:
    """``T'(a) ⊆ T(b)`` for each monotone ``a`` and its next shallower ``b``."""
    xs = sorted(X, key=path.depth, reverse=True)
    for a, b in zip(xs, xs[1:]):
        alo, ahi = after.bounds(a)
        blo, bhi = before.bounds(b)
        lo_ok = blo is None or (alo is not None and alo >= blo)
        hi_ok = bhi is None or (ahi is not None and ahi <= bhi)
        if not (lo_ok and hi_ok):
            return False
    return True


def check_lemma_monotone(
    path: BeforePath, before, after: TreeArena, w: WeightMap, X, *, check: bool = True
) -> float:
    """``Phi_T(X) - Phi_T'(X) + log(W/w(s))``."""
    X = list(X)
    s = path.s
    if check:
        if not is_monotone(after, X, s):
            raise AuditPreconditionError("set is not monotone in the after-tree")
        if not monotone_containment(path, before, after, X):
            raise AssertionError("monotone containment T'(a) ⊆ T(b) violated")
    return potential_drop(before, after, w, X) + w.log2_ratio_total_key(s)


@dataclass(frozen=True)
class ZigzagAudit:
    pair_slacks: tuple[float, ...]
    aggregate: float
    z: int
    zp: int

    @property
    def min_pair(self) -> float:
        return min(self.pair_slacks, default=math.inf)

    @property
    def min_slack(self) -> float:
        return min(self.min_pair, self.aggregate)


def check_zigzag_claim(path: BeforePath, rtr_after, w: WeightMap) -> ZigzagAudit:
    """Zig-zag pair inequality and its aggregate over ``Z_P``.

    ``rtr_after`` must be the rotate-to-root after-tree of ``path``.  Each
    alternation pair ``{a_i, a_{i+1}}`` must satisfy
    ``2 <= Phi(Z_i) - Phi'(Z_i) + log(w(T(a_{i+1})) / w(T(a_i)))``; the
    aggregate slack is
    ``Phi(Z_P) - Phi'(Z_P) + 2 log(W/w(s)) + 2 log(W/w(T(s))) - |Z_P|``."""
    s = path.s
    a = path.keys[-2::-1]
    pairs = []
    for i in range(len(a) - 1):
        if (a[i] < s) != (a[i + 1] < s):
            drop = potential_drop(path, rtr_after, w, (a[i], a[i + 1]))
            ratio = math.log2(w.int_between(*path.bounds(a[i + 1]))) - math.log2(
                w.int_between(*path.bounds(a[i]))
            )
            pairs.append(drop + ratio - 2)
    _, zp = zigzag_sets(path)
    agg = (
        potential_drop(path, rtr_after, w, zp)
        + 2 * w.log2_ratio_total_key(s)
        + 2 * _log_W_over_subtree_s(path, w, s)
        - len(zp)
    )
    return ZigzagAudit(tuple(pairs), agg, len(pairs), len(zp))


def theorem_rhs_constants(k: int, l: int, w: WeightMap, s: int) -> float:
    return 2 * k + (8 * k + l) * w.log2_ratio_total_key(s)


def check_theorem_bound(
    path: BeforePath,
    before,
    after: TreeArena,
    w: WeightMap,
    dec: Decomposition,
    *,
    zigzag: bool = False,
    check: bool = True,
) -> float:
    """Disjoint-plus-monotone bound, optionally with zigzag sets added.

    Without ``zigzag``: ``sum|D_i| <= Phi_T(U) - Phi_T'(U) + 2k + (8k+l) log(W/w(s))``
    over the union ``U`` of the decomposition.  With ``zigzag``: ``|Z_P|``
    joins the left side, the potential runs over all of ``P`` and the
    rotate-to-root constants ``2 log(W/w(s)) + 2 log(W/w(T(s)))`` join the
    right side (the intermediate potential telescopes away)."""
    if check:
        probs = dec.problems(path, after)
        if probs:
            raise AuditPreconditionError("; ".join(probs))
    s = path.s
    rhs = theorem_rhs_constants(dec.k, dec.l, w, s)
    lhs = dec.disjoint_size
    if zigzag:
        _, zp = zigzag_sets(path)
        lhs += len(zp)
        rhs += potential_drop(before, after, w, path.keys)
        rhs += 2 * w.log2_ratio_total_key(s) + 2 * _log_W_over_subtree_s(before, w, s)
    else:
        rhs += potential_drop(before, after, w, dec.keys)
    return rhs - lhs


@dataclass(frozen=True)
class LostGained:
    lost_ancestors: int
    gained_ancestors: int
    lost_descendants: int
    gained_descendants: int


def lost_gained(path: BeforePath, after: TreeArena, x: int) -> LostGained:
    """Ancestor/descendant changes of ``x`` counted among path nodes only."""
    if x not in path._index:
        raise KeyError(f"{x} is not on the path")
    d = path.depth(x)
    b_anc = set(path.keys[:d])
    b_desc = set(path.keys[d + 1 :])
    a_anc = set(after.ancestors(x))
    a_desc = set(after.subtree_keys(x)) - {x}
    return LostGained(
        len(b_anc - a_anc), len(a_anc - b_anc), len(b_desc - a_desc), len(a_desc - b_desc)
    )


def lost_gained_all(path: BeforePath, after: TreeArena) -> dict[int, LostGained]:
    """:func:`lost_gained` for every path node in one sweep over after-ancestors."""
    idx = path._index
    n = len(path)
    keep_anc = dict.fromkeys(path.keys, 0)
    keep_desc = dict.fromkeys(path.keys, 0)
    gain_anc = dict.fromkeys(path.keys, 0)
    gain_desc = dict.fromkeys(path.keys, 0)
    keys, parent = after.keys, after.parent
    for j, y in enumerate(keys):
        iy = idx[y]
        p = parent[j]
        while p != -1:
            x = keys[p]
            if idx[x] < iy:
                keep_anc[y] += 1
                keep_desc[x] += 1
            else:
                gain_anc[y] += 1
                gain_desc[x] += 1
            p = parent[p]
    return {
        y: LostGained(
            idx[y] - keep_anc[y],
            gain_anc[y],
            (n - 1 - idx[y]) - keep_desc[y],
            gain_desc[y],
        )
        for y in path.keys
    }


@dataclass(frozen=True)
class DepthHalvingResult:
    ok: bool
    witness: int | None = None
    condition: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def depth_halving_conditions(
    path: BeforePath, after: TreeArena, eps: float, c: float, d: int, lg: dict | None = None
) -> DepthHalvingResult:
    """(i) each node loses ``>= (1/2 + eps) d(x) - c`` ancestors;
    (ii) each node except ``s`` gains ``<= d`` descendants."""
    lg = lg if lg is not None else lost_gained_all(path, after)
    s = path.s
    for x in path.keys:
        dx = path.depth(x)
        need = (0.5 + eps) * dx - c
        if lg[x].lost_ancestors < need - 1e-12:
            return DepthHalvingResult(
                False, x, "lost-ancestors", f"d={dx} lost={lg[x].lost_ancestors} need>={need:g}"
            )
        if x != s and lg[x].gained_descendants > d:
            return DepthHalvingResult(
                False, x, "gained-descendants", f"gained={lg[x].gained_descendants} > {d}"
            )
    return DepthHalvingResult(True)


@dataclass(frozen=True)
class AdversarialResult:
    weights: WeightMap
    x: int
    side: str
    k: int
    gap: float
    bound: float
    budget: float

    @property
    def bound_holds(self) -> bool:
        return self.gap >= self.bound - 1e-6

    @property
    def exceeds_budget(self) -> bool:
        return self.gap > self.budget


def adversarial_weights(path: BeforePath, after: TreeArena, K: int) -> AdversarialResult:
    """Weights that punish a deep one-sided turn sequence in the after-tree.

    ``x`` is the node with the most right turns (keys above ``s``) or left
    turns (keys below ``s``).  It and its path ancestors weigh ``K``, its
    proper path descendants weigh 1.  The path is treated as the whole tree.
    Returns the exact ``Phi' - Phi`` next to the lower bound
    ``k log(K/|P|) - |P| log|P|`` and the budget ``2 + 16 log(W/w(s))``."""
    if len(path) < 2:
        raise ValueError("path needs at least two nodes")
    s = path.s
    best = None
    for key, (_, ld, rd) in after.depths().items():
        turns, side = (rd, "R") if key > s else (ld, "L") if key < s else (-1, "")
        if best is None or turns > best[0]:
            best = (turns, key, side)
    k, x, side = best
    dx = path.depth(x)
    wts = [K if path.depth(a) <= dx else 1 for a in path.keys]
    w = WeightMap(path.keys, wts)
    gap = -potential_drop(path, after, w, path.keys)
    p = len(path)
    bound = k * math.log2(K / p) - p * math.log2(p)
    budget = 2 + 16 * w.log2_ratio_total_key(s)
    return AdversarialResult(w, x, side, k, gap, bound, budget)
