"""Workloads, audited runs, experiments and reports."""

from .counterexamples import FAMILIES, CounterexampleReport, gen_counterexample
from .experiments import (
    experiment_pathbalance_scaling,
    run_greedy,
    sequential_cost,
)
from .report import CSV_HEADER, emit, read_csv, to_csv, to_json
from .runner import AuditFailure, RunReport, run
from .workloads import KINDS, Workload
