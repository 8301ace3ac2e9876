"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines are also
collected into an "acceptance criteria" section at the end of the session.
"""

import math
import random
import time

import numpy as np

from conftest import ACCEPTANCE_LINES, all_bsts, all_paths, naive_search, naive_subtree
from selfadjust.analysis import (
    WeightMap,
    adversarial_weights,
    canonical_decomposition,
    check_theorem_bound,
    check_wing_count,
    check_wing_telescoping,
    depth_halving_conditions,
    monotone_partition,
    side_alternations,
)
from selfadjust.bst import BeforePath, TreeArena, apply_restructure, search_path
from selfadjust.geometry import (
    all_neighborhoods,
    height_diagram_to_tree,
    stair,
    tree_to_height_diagram,
)
from selfadjust.harness import FAMILIES, Workload, gen_counterexample, run, run_greedy
from selfadjust.harness.counterexamples import fig3
from selfadjust.harness.experiments import experiment_pathbalance_scaling, sequential_cost
from selfadjust.locality import LocalDecomposition, monotone_bound_from_local, synthesize_local, verify_local
from selfadjust.transformers import (
    block3_depth_halving,
    path_balance,
    rotate_to_root,
    splay_classic,
    splay_global,
)

TOL = 1e-6


def verdict(num: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _random_paths(count: int, n: int, seed: int):
    """Search paths of uniformly random accesses, restructuring by splay in
    between so the trees drift away from random-insertion shapes."""
    rng = random.Random(seed)
    t = TreeArena.random(n, rng)
    for _ in range(count):
        p = search_path(t, rng.randint(1, n))
        yield p
        t = apply_restructure(t, p, splay_global(p), inplace=True)


def test_criterion_1_splay_structure():
    t0 = time.perf_counter()
    bad = 0
    for dirs in map(list, np.ndindex(*(2,) * 11)):
        p = BeforePath.from_directions(["LR"[d] for d in dirs])
        a = splay_global(p)
        mp = monotone_partition(a)
        bad += len(a.leaves()) < len(p) / 2 - 1 - side_alternations(p) or mp.l_left > 2 or mp.l_right > 2
    rows = 0
    for seed in range(10):
        rep = run("splay", Workload("uniform", 1023, 1000, seed=seed), "uniform", "none")
        for r in rep.rows:
            rows += 1
            bad += r.leaves < r.cost / 2 - 1 - r.z or r.l_left > 2 or r.l_right > 2
    dt = time.perf_counter() - t0
    verdict(1, bad == 0 and rows == 10**4 and dt < 30, f"2^11 patterns + {rows} accesses, {bad} violations, {dt:.1f}s")


def test_criterion_2_splay_equivalence():
    mism = total = 0
    for p in all_paths(12):
        total += 1
        mism += splay_global(p) != splay_classic(p)
    verdict(2, mism == 0, f"{total} patterns with |P| <= 12, {mism} mismatches")


def test_criterion_3_inequality_audits():
    worst = {}
    for algo in ("splay", "rotate-to-root", "path-balance", "block3"):
        for wname, seed in [("uniform", 0)] + [("random", s) for s in range(1, 6)]:
            rep = run(algo, Workload("uniform", 511, 10**4, seed=seed), wname, "lemma1,lemma2,zigzag,theorem")
            ag = rep.aggregates
            assert not rep.errors, rep.errors[:3]
            for f in ("slack_lemma1", "slack_lemma2", "slack_zigzag", "slack_theorem"):
                v = ag["min_" + f]
                if not math.isnan(v):
                    worst[f] = min(worst.get(f, math.inf), v)
    ok = all(v >= -TOL for v in worst.values()) and len(worst) == 4
    detail = ", ".join(f"{k}={v:.3g}" for k, v in sorted(worst.items()))
    verdict(3, ok, f"4 algorithms x 6 weightings x 10^4 accesses: {detail}")


def test_criterion_4_path_balance_scaling():
    t0 = time.perf_counter()
    ns = [1 << k for k in range(10, 17)]
    res = experiment_pathbalance_scaling(ns, seed=0)
    dt = time.perf_counter() - t0
    min_slack = min(r["min_slack_theorem"] for r in res.rows)
    ok = min_slack >= -TOL and res.slope > 0 and res.max_rel_residual < 0.25 and dt < 300
    Ks = " ".join(f"{r['K']:.3f}" for r in res.rows)
    verdict(
        4,
        ok,
        f"min slack {min_slack:.3g}, K = {Ks}, slope {res.slope:.3f}, "
        f"max residual {res.max_rel_residual:.1%}, {dt:.0f}s",
    )


def test_criterion_5_block3():
    bad = []
    for p in all_paths(12):
        if not depth_halving_conditions(p, block3_depth_halving(p), 1 / 6, 4, 2):
            bad.append(p.keys)
    rng = np.random.default_rng(5)
    worst = math.inf
    count = 0
    for p in _random_paths(10**4, 1023, seed=5):
        a = block3_depth_halving(p)
        count += 1
        mp = monotone_partition(a)
        if not depth_halving_conditions(p, a, 1 / 6, 4, 2):
            bad.append(p.keys)
        if len(a.leaves()) < (len(p) - 1) / 3 - 2 or mp.l_left > 2 or mp.l_right > 2:
            bad.append(p.keys)
        if count % 10 == 0:
            w = WeightMap.random(sorted(p.keys), rng)
            dec = canonical_decomposition(p, a)
            worst = min(worst, check_theorem_bound(p, p, a, w, dec), check_theorem_bound(p, p, a, w, dec, zigzag=True))
    for seed in range(3):
        rep = run("block3", Workload("uniform", 511, 10**4, seed=seed), "random", "theorem")
        worst = min(worst, rep.aggregates["min_slack_theorem"])
    verdict(5, not bad and worst >= -TOL, f"exhaustive |P| <= 12 + {count} accesses, {len(bad)} violations, theorem slack {worst:.3g}")


def test_criterion_6_sequential_contrast():
    n = 1 << 12
    rtr = sequential_cost("rotate-to-root", n)
    spl = sequential_cost("splay", n)
    gr = sequential_cost("greedy", n)
    ok = rtr >= n * n / 4 and spl <= 16 * n and gr <= 16 * n
    parts = [f"rotate-to-root {rtr} (n^2/4 = {n * n // 4})", f"splay {spl}", f"greedy {gr} (16n = {16 * n})"]
    for name, f in (("rotate-to-root", rotate_to_root), ("splay", splay_global)):
        slack, steps, _ = check_wing_telescoping(n, f)
        phi0_ok = steps[0].phi_before == n * math.log2(n)
        ok &= slack >= -TOL and phi0_ok and steps[-1].phi_after == 0
        parts.append(f"{name} wing slack {slack:.2g}")
    rng = random.Random(6)
    wp_ok = all(check_wing_count(TreeArena.random(rng.randint(1, 64), rng)) for _ in range(10**5))
    ok &= wp_ok
    parts.append(f"|wp| <= mk on 10^5 trees: {wp_ok}")
    verdict(6, ok, "; ".join(parts))


def test_criterion_7_geometric_greedy():
    bad = 0
    for n in range(1, 7):
        for t in all_bsts(n):
            h = tree_to_height_diagram(t)
            nbs = all_neighborhoods(h)
            for a in t.keys:
                bad += set(stair(h, a)) != set(naive_search(t, a))
                bad += set(nbs[a - 1].keys()) != naive_subtree(t, a)
    rng = np.random.default_rng(7)
    for _ in range(10**3):
        n = int(rng.integers(1, 40))
        h = rng.permutation(n)
        t = height_diagram_to_tree(h)
        a = int(rng.integers(1, n + 1))
        bad += set(stair(h, a)) != set(naive_search(t, a))
        bad += set(all_neighborhoods(h)[a - 1].keys()) != naive_subtree(t, a)
    g = run_greedy(Workload("uniform", 512, 10**4, seed=7), "random")
    ok = bad == 0 and g.all_disjoint and g.min_slack >= -TOL
    verdict(7, ok, f"{bad} stair/neighborhood mismatches, disjoint={g.all_disjoint}, min slack {g.min_slack:.3g} over 10^4 accesses")


def _local_ok(p, f):
    a = f(p)
    dec = synthesize_local(p, a)
    mp = monotone_partition(a)
    w = mp.l_left + mp.l_right + 4
    if not verify_local(p, a, dec, w):
        return False
    try:
        monotone_bound_from_local(a, dec)
    except AssertionError:
        return False
    return True


def test_criterion_8_locality():
    algos = (splay_global, rotate_to_root, block3_depth_halving)
    bad = checked = 0
    for p in all_paths(12):
        for f in algos:
            checked += 1
            bad += not _local_ok(p, f)
    for p in _random_paths(10**4, 1023, seed=8):
        for f in algos:
            checked += 1
            bad += not _local_ok(p, f)
    lp = TreeArena.left_path(4).search_path(1)
    after = rotate_to_root(lp)

    def chain(root, links):
        return TreeArena.from_links(root, links)

    negatives = {
        "no-revisit": LocalDecomposition(
            [((2, 1), chain(1, {1: (None, 2)})), ((3, 1), chain(3, {3: (1, None)})), ((1, 2), chain(1, {1: (None, 2)}))]
        ),
        "overlap": LocalDecomposition([((2, 1), chain(1, {1: (None, 2)})), ((4, 3), chain(4, {4: (3, None)}))]),
        "window-size": LocalDecomposition([(lp.keys, after)]),
    }
    labels = {want: verify_local(lp, after, dec, 3).violation for want, dec in negatives.items()}
    neg_ok = all(want == got for want, got in labels.items())
    verdict(8, bad == 0 and neg_ok, f"{checked} round trips, {bad} failures; negatives -> {labels}")


def test_criterion_9_necessity():
    P = 1 << 10
    K = P**4
    t0 = time.perf_counter()
    path, after = fig3(P)
    pb_path = TreeArena.left_path(P).search_path(1)
    results = {
        "fig3": adversarial_weights(path, after, K),
        "path-balance": adversarial_weights(pb_path, path_balance(pb_path), K),
    }
    dt = time.perf_counter() - t0
    ok = dt < 10
    parts = []
    for name, r in results.items():
        ok &= r.bound_holds and r.exceeds_budget
        parts.append(
            f"{name}: k={r.k} gap={r.gap:.0f} bound={r.bound:.0f} budget={r.budget:.0f} "
            f"bound_holds={r.bound_holds} exceeds_budget={r.exceeds_budget}"
        )
    verdict(9, ok, "; ".join(parts) + f"; {dt:.1f}s")


def test_criterion_10_counterexamples():
    failures = []
    witness = None
    for n in (64, 256, 1024, 4096):
        for fam in FAMILIES:
            _, _, rep = gen_counterexample(fam, n)
            if not rep.ok:
                failures.append((fam, n, {k: v for k, v in rep.checks.items() if not v}))
            if fam == "fig2-left" and n == 4096:
                witness = rep.witness["halving_failures"]
    halving_ok = witness is not None and set(witness) == {"0.05", "0.1", "0.1667", "0.25"}
    verdict(
        10,
        not failures and halving_ok,
        f"{3 * 4} reports, failures {failures}; fig2-left n=4096 halving witnesses {witness}",
    )
