"""Experiments built on :func:`run`."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..analysis.weights import WeightMap
from ..geometry import check_geometric_access_lemma, greedy_access, left_path_diagram
from .runner import make_weights, run
from .workloads import Workload, generate


@dataclass
class ScalingResult:
    rows: list[dict]
    slope: float
    intercept: float
    max_rel_residual: float

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "fit": {
                "slope": self.slope,
                "intercept": self.intercept,
                "max_rel_residual": self.max_rel_residual,
            },
        }


def experiment_pathbalance_scaling(
    ns, *, seed: int = 0, audits=("theorem",), m_factor: int = 1
) -> ScalingResult:
    """``K(n) = C / ((n + m) log2 n)`` for ``m = n`` uniform accesses from a
    random-insertion BST, plus a least-squares line of ``K`` against
    ``log2 log2 n``."""
    rows = []
    for n in ns:
        if n < 4 or n & (n - 1):
            raise ValueError("grid must hold powers of two >= 4")
        m = m_factor * n
        if m == 0:
            raise ValueError("K is undefined for m = 0")
        rep = run("path-balance", Workload("uniform", n, m, seed=seed), "uniform", audits)
        ag = rep.aggregates
        rows.append(
            {
                "n": n,
                "m": m,
                "total_cost": ag["total_cost"],
                "K": ag["K"],
                "loglog_n": math.log2(math.log2(n)),
                "min_slack_theorem": ag["min_slack_theorem"],
            }
        )
    x = np.array([r["loglog_n"] for r in rows])
    y = np.array([r["K"] for r in rows])
    if len(rows) >= 2:
        slope, intercept = np.polyfit(x, y, 1)
        resid = np.abs(y - (slope * x + intercept)) / y
    else:
        slope, intercept, resid = math.nan, math.nan, np.zeros(1)
    return ScalingResult(rows, float(slope), float(intercept), float(resid.max()))


def sequential_cost(algorithm: str, n: int) -> int:
    """Total cost of accessing ``1..n`` in order from the left path ``n..1``;
    ``algorithm`` may also be ``"greedy"``."""
    if algorithm == "greedy":
        h = left_path_diagram(n)
        total = 0
        for s in range(1, n + 1):
            h, c = greedy_access(h, s)
            total += c
        return total
    rep = run(algorithm, Workload("sequential", n, n), "uniform", "none")
    return rep.aggregates["total_cost"]


@dataclass
class GreedyRun:
    costs: list[int]
    min_odd_slack: float = math.inf
    min_even_slack: float = math.inf
    all_disjoint: bool = True
    heights: list[list[int]] = field(default_factory=list)

    @property
    def total_cost(self) -> int:
        return sum(self.costs)

    @property
    def min_slack(self) -> float:
        return min(self.min_odd_slack, self.min_even_slack)

    def to_dict(self) -> dict:
        return {
            "total_cost": self.total_cost,
            "min_slack": self.min_slack if self.costs else None,
            "all_disjoint": self.all_disjoint,
            "costs": self.costs,
        }


def run_greedy(workload: Workload, weights="uniform", audit: bool = True, h0=None) -> GreedyRun:
    """Greedy over ``workload`` from ``h0`` (the left path by default)."""
    key_rng, w_rng, _ = workload.streams()
    keys = generate(workload, key_rng)
    h = left_path_diagram(workload.n) if h0 is None else np.asarray(h0, dtype=np.int64)
    w, _ = make_weights(weights, list(range(1, workload.n + 1)), w_rng)
    out = GreedyRun([])
    for s in keys.tolist():
        h2, c = greedy_access(h, s)
        out.costs.append(c)
        if audit:
            ga = check_geometric_access_lemma(h, h2, s, w)
            out.min_odd_slack = min(out.min_odd_slack, ga.odd_slack)
            out.min_even_slack = min(out.min_even_slack, ga.even_slack)
            out.all_disjoint &= ga.ok
        h = h2
    return out


__all__ = [
    "ScalingResult",
    "experiment_pathbalance_scaling",
    "sequential_cost",
    "GreedyRun",
    "run_greedy",
    "WeightMap",
]
