import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_bsts, all_paths, naive_potential, naive_subtree
from selfadjust.analysis import (
    AuditPreconditionError,
    Decomposition,
    WeightMap,
    adversarial_weights,
    canonical_decomposition,
    check_lemma_disjoint,
    check_lemma_monotone,
    check_theorem_bound,
    check_wing_count,
    check_wing_telescoping,
    check_zigzag_claim,
    depth_class_decomposition,
    depth_halving_conditions,
    is_monotone,
    is_subtree_disjoint,
    lost_gained,
    lost_gained_all,
    monotone_partition,
    partial_potential,
    potential_drop,
    side_alternations,
    sol_potential,
    wing_partition,
    wing_potential,
    zigzag_sets,
)
from selfadjust.bst import BeforePath, TreeArena, apply_restructure, search_path
from selfadjust.transformers import (
    TRANSFORMERS,
    block3_depth_halving,
    path_balance,
    rotate_to_root,
    splay_global,
)

# A 12-node access with letters standing for keys: a..g = 1..7, s = 8,
# v..y = 9..12.  Four side changes on the path, five leaves after.
a, b, c, d, e, f, g, s, v, w_, x, y = range(1, 13)
FIG_PATH = BeforePath((a, b, c, y, x, d, e, f, w_, v, g, s))
FIG_AFTER = TreeArena.from_links(
    s,
    {
        s: (d, w_),
        d: (b, e),
        b: (a, c),
        e: (None, g),
        g: (f, None),
        w_: (v, y),
        y: (x, None),
    },
)


# weights -------------------------------------------------------------------


def test_potential_examples():
    u3 = WeightMap.uniform([1, 2, 3])
    assert sol_potential(TreeArena.balanced([1, 2, 3]), u3) == pytest.approx(math.log2(3))
    assert sol_potential(TreeArena.left_path(3), u3) == pytest.approx(math.log2(6))
    assert sol_potential(TreeArena.from_links(5, {}), WeightMap.uniform([5])) == 0.0


def test_potential_matches_oracle(small_bsts):
    rng = np.random.default_rng(1)
    for n, trees in small_bsts.items():
        w = WeightMap.random(list(range(1, n + 1)), rng)
        wd = {k: w[k] for k in range(1, n + 1)}
        for t in trees:
            assert sol_potential(t, w) == pytest.approx(naive_potential(t, wd), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 60), st.integers(0, 10**6))
def test_potential_additivity(n, seed):
    rng = random.Random(seed)
    t = TreeArena.random(n, rng)
    w = WeightMap.random(t.keys, np.random.default_rng(seed))
    X = [k for k in t.keys if rng.random() < 0.5]
    Y = [k for k in t.keys if k not in X]
    assert partial_potential(t, w, X) + partial_potential(t, w, Y) == pytest.approx(sol_potential(t, w))
    assert partial_potential(t, w, []) == 0


def test_weights_are_exact_over_wide_ranges():
    w = WeightMap([1, 2, 3], [1e-3, 1e6, 0.1])
    assert w.int_between(None, None) == w.int_of(1) + w.int_of(2) + w.int_of(3)
    assert w.between(1, 3) == 1e6
    assert w.of_set([1, 3]) == pytest.approx(0.101)
    with pytest.raises(ValueError):
        WeightMap([1, 2], [1.0, 0.0])
    with pytest.raises(ValueError):
        WeightMap([1, 1], [1, 2])
    with pytest.raises(KeyError):
        w[9]


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 80), st.integers(0, 10**6), st.sampled_from(sorted(TRANSFORMERS)))
def test_off_path_potential_is_invariant(n, seed, name):
    rng = random.Random(seed)
    t = TreeArena.random(n, rng)
    wm = WeightMap.random(t.keys, np.random.default_rng(seed))
    p = search_path(t, rng.randint(1, n))
    t2 = apply_restructure(t, p, TRANSFORMERS[name](p))
    full = sol_potential(t, wm) - sol_potential(t2, wm)
    assert potential_drop(p, TRANSFORMERS[name](p), wm, p.keys) == pytest.approx(full, abs=1e-7)


# decompositions ------------------------------------------------------------


def test_fixture_counts():
    assert FIG_PATH.is_valid()
    assert side_alternations(FIG_PATH) == 4
    assert len(FIG_AFTER.leaves()) == 5
    assert FIG_AFTER.left_depth(a) == 3 and FIG_AFTER.right_depth(y) == 2
    assert is_subtree_disjoint(FIG_AFTER, {a, c, f, v, y})
    for m in ({d, e, g}, {b, f}, {x, y}, {w_}):
        assert is_monotone(FIG_AFTER, m, s)
    mp = monotone_partition(FIG_AFTER)
    assert {b, f} <= mp.sets[("L", 2)] and mp.sets[("L", 1)] == {d, e, g}
    assert mp.sets[("R", 2)] == {x, y} and w_ in mp.sets[("R", 1)]


def test_side_alternation_and_zigzag_examples():
    assert side_alternations(BeforePath((3, 2, 1))) == 0
    assert side_alternations(BeforePath((3, 1, 2))) == 1
    Z, zp = zigzag_sets(BeforePath((3, 1, 2)))
    assert Z == [frozenset({1, 3})] and zp == {1, 3}
    assert zigzag_sets(BeforePath((4, 3, 2, 1)))[1] == frozenset()
    alt = BeforePath.from_directions("LRLRL")
    assert len(zigzag_sets(alt)[1]) == 5


def test_monotone_partition_matches_brute_force(small_bsts):
    for trees in small_bsts.values():
        for t in trees:
            mp = monotone_partition(t)
            r = t.root_key
            ld = {k: t.left_depth(k) for k in t.keys}
            rd = {k: t.right_depth(k) for k in t.keys}
            assert mp.l_left == len({ld[k] for k in t.keys if k < r})
            assert mp.l_right == len({rd[k] for k in t.keys if k > r})


def test_subtree_disjoint_matches_brute_force(small_bsts):
    rng = random.Random(3)
    for trees in small_bsts.values():
        for t in trees:
            X = [k for k in t.keys if rng.random() < 0.5]
            subs = [naive_subtree(t, k) for k in X]
            brute = all(not (p & q) for i, p in enumerate(subs) for q in subs[i + 1 :])
            assert is_subtree_disjoint(t, X) == brute
            if len(t) > 1:
                assert not is_subtree_disjoint(t, [t.root_key, t.keys[0] if t.keys[0] != t.root_key else t.keys[-1]])


def test_decomposition_problems():
    dec = canonical_decomposition(FIG_PATH, FIG_AFTER)
    assert dec.problems(FIG_PATH, FIG_AFTER) == []
    bad = Decomposition([{a, b}], [{d, w_}])
    probs = bad.problems(FIG_PATH, FIG_AFTER)
    assert any("subtree-disjoint" in p for p in probs) and any("monotone" in p for p in probs)
    assert Decomposition([{a}, {a}]).problems(FIG_PATH, FIG_AFTER) == ["sets overlap"]


def test_depth_classes_are_disjoint_for_path_balance():
    for p in all_paths(10):
        after = path_balance(p)
        dec = depth_class_decomposition(p, after)
        assert dec.problems(p, after) == []
        assert dec.k == math.ceil(math.log2(1 + len(p))) + 1


# audits --------------------------------------------------------------------


def test_lemma_slack_trivial_cases():
    p = BeforePath((3, 2, 1))
    after = rotate_to_root(p)
    u = WeightMap.uniform([1, 2, 3])
    base = 2 + 8 * math.log2(3 / 1)
    assert check_lemma_disjoint(p, after, u, [], 1) == pytest.approx(base)
    assert check_lemma_monotone(p, p.as_tree(), after, u, []) == pytest.approx(math.log2(3))
    with pytest.raises(AuditPreconditionError):
        check_lemma_disjoint(p, after, u, [1, 3], 1)
    with pytest.raises(AuditPreconditionError):
        check_lemma_monotone(p, p, after, u, [1, 3])


def test_fixture_audits():
    rng = np.random.default_rng(5)
    for wm in (WeightMap.uniform(list(range(1, 13))), WeightMap.random(list(range(1, 13)), rng)):
        assert check_lemma_disjoint(FIG_PATH, FIG_AFTER, wm, {a, c, f, v, y}, s) >= -1e-9
        for m in ({d, e, g}, {b, f}, {x, y}, {w_}):
            assert check_lemma_monotone(FIG_PATH, FIG_PATH, FIG_AFTER, wm, m) >= -1e-9
        dec = canonical_decomposition(FIG_PATH, FIG_AFTER)
        assert check_theorem_bound(FIG_PATH, FIG_PATH, FIG_AFTER, wm, dec) >= -1e-9
        assert check_theorem_bound(FIG_PATH, FIG_PATH, FIG_AFTER, wm, dec, zigzag=True) >= -1e-9


def test_zigzag_examples():
    p = BeforePath((3, 1, 2))
    za = check_zigzag_claim(p, rotate_to_root(p), WeightMap.uniform([1, 2, 3]))
    assert za.z == 1 and za.min_pair >= 0 and za.aggregate >= 0
    q = BeforePath((3, 2, 1))
    zq = check_zigzag_claim(q, rotate_to_root(q), WeightMap.uniform([1, 2, 3]))
    assert zq.pair_slacks == () and zq.aggregate >= 0


def test_all_audits_exhaustive_random_weights():
    rng = np.random.default_rng(11)
    worst = math.inf
    for p in all_paths(9):
        wm = WeightMap.random(sorted(p.keys), rng)
        r = rotate_to_root(p)
        worst = min(worst, check_zigzag_claim(p, r, wm).min_slack)
        for name, f in TRANSFORMERS.items():
            after = f(p)
            if name == "path-balance":
                dec = depth_class_decomposition(p, after)
            else:
                dec = canonical_decomposition(p, after)
            worst = min(worst, check_theorem_bound(p, p, after, wm, dec))
            worst = min(worst, check_theorem_bound(p, p, after, wm, dec, zigzag=True))
            for m in dec.monotone:
                worst = min(worst, check_lemma_monotone(p, p, after, wm, m))
            for dset in dec.disjoint:
                worst = min(worst, check_lemma_disjoint(p, after, wm, dset, p.s))
    assert worst >= -1e-6


def test_theorem_single_node():
    p = BeforePath((4,))
    # nothing to charge: the slack is the constant 2k with k = 1
    slack = check_theorem_bound(p, p, p.as_tree(), WeightMap.uniform([4]), Decomposition(k=1))
    assert slack == 2


# lost / gained and depth halving -------------------------------------------


def test_lost_gained_examples():
    p = BeforePath((7, 6, 5, 4, 3, 2, 1))
    assert lost_gained(p, block3_depth_halving(p), 2).lost_ancestors == 2
    lg = lost_gained(p, block3_depth_halving(p), 1)
    assert lg.lost_ancestors == 6 and lg.gained_descendants == 6
    q = BeforePath((1, 9, 2, 8, 5))
    r = rotate_to_root(q)
    # 2 has path ancestors 1 and 9; only the cross-side one is lost
    assert lost_gained(q, r, 2).lost_ancestors == 1
    assert lost_gained(q, r, 8).lost_ancestors == 2
    with pytest.raises(KeyError):
        lost_gained(q, r, 42)


def test_lost_gained_all_matches_single():
    for p in all_paths(8):
        for f in TRANSFORMERS.values():
            after = f(p)
            allv = lost_gained_all(p, after)
            for k in p.keys:
                assert allv[k] == lost_gained(p, after, k)


def test_depth_halving_trivial_and_splay_witness():
    assert depth_halving_conditions(BeforePath((3,)), BeforePath((3,)).as_tree(), 0.25, 0, 0)
    # splay on a 50-node left path: node 27 sits at depth 23 and keeps 12 ancestors
    p = TreeArena.left_path(50).search_path(1)
    r = depth_halving_conditions(p, splay_global(p), 1 / 6, 4, 10**9)
    assert not r and r.witness == 27 and r.condition == "lost-ancestors"


def test_adversarial_examples():
    p = TreeArena.left_path(64).search_path(1)
    res = adversarial_weights(p, path_balance(p), 64**4)
    assert res.k >= 5 and res.bound_holds
    rr = adversarial_weights(p, rotate_to_root(p), 64**4)
    assert rr.k == 1 and rr.bound_holds
    with pytest.raises(ValueError):
        adversarial_weights(BeforePath((1,)), BeforePath((1,)).as_tree(), 10)


# wings ---------------------------------------------------------------------


def test_wing_examples():
    assert wing_partition(TreeArena.left_path(3)).wings == ((1, 2, 3),)
    bal = TreeArena.balanced([1, 2, 3])
    assert wing_partition(bal).wings == ((1, 2), (3,))
    assert wing_potential(bal) == pytest.approx(2.0)
    rp = TreeArena.from_insertion_order([1, 2, 3, 4])
    assert wing_partition(rp).sizes == [1, 1, 1, 1]
    assert wing_potential(rp) == 0.0
    assert wing_potential(TreeArena.left_path(8)) == pytest.approx(24.0)


def test_wing_count_all_small_bsts():
    for n in range(1, 8):
        for t in all_bsts(n):
            assert check_wing_count(t)


@pytest.mark.parametrize("name", ["rotate-to-root", "splay"])
def test_wing_telescoping(name):
    slack, steps, total = check_wing_telescoping(256, TRANSFORMERS[name])
    assert slack >= -1e-6
    assert steps[0].phi_before == pytest.approx(256 * 8) and steps[-1].phi_after == 0.0
    slack2, steps2, _ = check_wing_telescoping(2, TRANSFORMERS[name])
    assert len(steps2) == 2 and slack2 >= -1e-9
