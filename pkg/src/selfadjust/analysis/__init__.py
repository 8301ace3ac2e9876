"""Potentials, decompositions and per-access audits."""

from .audits import (
    AdversarialResult,
    AuditPreconditionError,
    DepthHalvingResult,
    LostGained,
    ZigzagAudit,
    adversarial_weights,
    check_lemma_disjoint,
    check_lemma_monotone,
    check_theorem_bound,
    check_zigzag_claim,
    depth_halving_conditions,
    lost_gained,
    lost_gained_all,
    monotone_containment,
)
from .decompose import (
    Decomposition,
    MonotonePartition,
    canonical_decomposition,
    depth_class_decomposition,
    is_monotone,
    is_subtree_disjoint,
    monotone_partition,
    side_alternations,
    zigzag_sets,
)
from .weights import WeightMap, partial_potential, potential_drop, sol_potential
from .wings import (
    WingPartition,
    check_wing_count,
    check_wing_telescoping,
    wing_partition,
    wing_potential,
)
