"""Run an algorithm over a workload, auditing every access."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

from ..analysis.audits import (
    AuditPreconditionError,
    check_lemma_disjoint,
    check_lemma_monotone,
    check_theorem_bound,
    check_zigzag_claim,
    lost_gained_all,
)
from ..analysis.decompose import (
    canonical_decomposition,
    depth_class_decomposition,
    monotone_partition,
    side_alternations,
)
from ..analysis.weights import WeightMap, potential_drop, sol_potential
from ..bst import AccessRecord, BeforePath, TreeArena, apply_restructure, search_path
from ..transformers import get_transformer, rotate_to_root
from .workloads import Workload, generate

AUDITS = ("lemma1", "lemma2", "zigzag", "theorem", "halving")
SLACK_FIELDS = ("slack_lemma1", "slack_lemma2", "slack_zigzag", "slack_theorem")
TOL = 1e-6
RECORD_FIELDS = tuple(f.name for f in fields(AccessRecord))


class AuditFailure(AssertionError):
    """An inequality came out negative beyond tolerance."""

    def __init__(self, record: AccessRecord, audit: str) -> None:
        self.record = record
        self.audit = audit
        super().__init__(f"{audit} failed at access {record.access_index}: {asdict(record)}")


def parse_audits(choice) -> frozenset[str]:
    if choice is None or choice == "none":
        return frozenset()
    if choice == "all":
        return frozenset(AUDITS)
    items = choice.split(",") if isinstance(choice, str) else list(choice)
    bad = set(items) - set(AUDITS)
    if bad:
        raise ValueError(f"unknown audits {sorted(bad)}; choose from {AUDITS}")
    return frozenset(items)


def make_weights(kind, keys, rng) -> tuple[WeightMap, str]:
    if isinstance(kind, WeightMap):
        return kind, "custom"
    if kind == "uniform":
        return WeightMap.uniform(keys), "uniform"
    if kind == "random":
        return WeightMap.random(keys, rng), "random"
    raise ValueError(f"unknown weights {kind!r}")


def initial_tree(kind: str, n: int, rng) -> TreeArena:
    if kind == "left-path":
        return TreeArena.left_path(n)
    if kind == "balanced":
        return TreeArena.balanced(range(1, n + 1))
    if kind == "random":
        # random insertion order; the reports say so
        return TreeArena.from_insertion_order((rng.permutation(n) + 1).tolist())
    raise ValueError(f"unknown initial tree {kind!r}")


@dataclass
class RunReport:
    algorithm: str
    workload: dict
    weights: str
    initial: str
    audits: list[str]
    rows: list[AccessRecord] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)

    @property
    def aggregates(self) -> dict:
        return aggregate(self.rows, self.workload["n"])

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "workload": self.workload,
            "weights": self.weights,
            "initial": self.initial,
            "audits": self.audits,
            "aggregates": self.aggregates,
            "errors": self.errors,
            "rows": [asdict(r) for r in self.rows],
        }


def _nanmin(vals) -> float:
    vals = [v for v in vals if not math.isnan(v)]
    return min(vals) if vals else math.nan


def aggregate(rows: list[AccessRecord], n: int) -> dict:
    m = len(rows)
    total = sum(r.cost for r in rows)
    out = {"m": m, "total_cost": total}
    out["K"] = total / ((n + m) * math.log2(n)) if m and n > 1 else math.nan
    for f in SLACK_FIELDS + ("lost_min_ratio",):
        out["min_" + f] = _nanmin(getattr(r, f) for r in rows)
    out["max_gained"] = max((r.gained_max for r in rows), default=0)
    out["max_z"] = max((r.z for r in rows), default=0)
    return out


class _Auditor:
    def __init__(self, algorithm: str, w: WeightMap, audits: frozenset[str], tol: float) -> None:
        self.decompose = depth_class_decomposition if algorithm == "path-balance" else canonical_decomposition
        self.w = w
        self.audits = audits
        self.tol = tol
        self.errors: list[str] = []

    def __call__(self, path: BeforePath, after: TreeArena, rec: AccessRecord) -> None:
        w, s, audits = self.w, path.s, self.audits
        rec.z = side_alternations(path)
        rec.leaves = len(after.leaves())
        mp = monotone_partition(after, s)
        rec.l_left, rec.l_right = mp.l_left, mp.l_right
        if audits & {"lemma1", "lemma2", "theorem"}:
            dec = self.decompose(path, after)
        try:
            if "lemma1" in audits:
                rec.slack_lemma1 = _nanmin(check_lemma_disjoint(path, after, w, d, s) for d in dec.disjoint)
            if "lemma2" in audits:
                rec.slack_lemma2 = _nanmin(check_lemma_monotone(path, path, after, w, x) for x in dec.monotone)
            if "zigzag" in audits:
                rec.slack_zigzag = check_zigzag_claim(path, rotate_to_root(path), w).min_slack
            if "theorem" in audits:
                rec.slack_theorem = min(
                    check_theorem_bound(path, path, after, w, dec),
                    check_theorem_bound(path, path, after, w, dec, zigzag=True, check=False),
                )
        except AuditPreconditionError as e:
            self.errors.append(f"access {rec.access_index}: {e}")
        if "halving" in audits:
            lg = lost_gained_all(path, after)
            ratios = [lg[x].lost_ancestors / path.depth(x) for x in path.keys if path.depth(x) > 0]
            rec.lost_min_ratio = min(ratios) if ratios else math.nan
            rec.gained_max = max((lg[x].gained_descendants for x in path.keys if x != s), default=0)
        for f in SLACK_FIELDS:
            v = getattr(rec, f)
            if v < -self.tol:
                raise AuditFailure(rec, f)


def run(
    algorithm: str,
    workload: Workload,
    weights="uniform",
    audits="all",
    *,
    initial: str | None = None,
    tol: float = TOL,
) -> RunReport:
    """Execute ``workload`` with ``algorithm``; every access yields one
    :class:`AccessRecord`.  Sequential workloads start from the left path,
    the others from a random-insertion BST unless ``initial`` says otherwise."""
    t = get_transformer(algorithm)
    aud = parse_audits(audits)
    key_rng, w_rng, tree_rng = workload.streams()
    keys = generate(workload, key_rng)
    init = initial or ("left-path" if workload.kind == "sequential" else "random")
    tree = initial_tree(init, workload.n, tree_rng)
    w, wlabel = make_weights(weights, tree.keys, w_rng)
    report = RunReport(algorithm, workload.to_dict(), wlabel, init, sorted(aud))
    auditor = _Auditor(algorithm, w, aud, tol)
    phi = sol_potential(tree, w) if workload.m else math.nan
    for i, s in enumerate(keys.tolist()):
        path = search_path(tree, s)
        after = t(path)
        rec = AccessRecord(access_index=i, key=s, cost=len(path))
        rec.phi_before = phi
        phi -= potential_drop(path, after, w, path.keys)
        rec.phi_after = phi
        auditor(path, after, rec)
        report.rows.append(rec)
        apply_restructure(tree, path, after, inplace=True)
    report.errors = auditor.errors
    return report
