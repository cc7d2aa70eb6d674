"""Size/beneficiary trade-off frontiers for reserve allocation.

A matching of patients to category seats scores a point (e, b): e
eligible matches in total, b of them beneficiaries.  No matching can push
both numbers to their individual maxima at once; the attainable maxima
form a frontier.  This package computes that frontier exactly, selects a
frontier matching for an exact share target, repairs it to respect
per-category priorities, audits the induced choice rule, and cross-checks
all of it against brute-force enumeration at small scale.
"""

from .core import (
    Instance,
    InstanceError,
    Matching,
    MatchingError,
    MatchPoint,
    Problem,
    SeatInstance,
    beneficiary_share,
    dominates,
    expand_to_seats,
    match_point,
    restrict_patients,
    validate_instance,
    validate_matching,
)
from .cycles import (
    AssociatedGraph,
    Cycle,
    CycleError,
    DominatedInputError,
    apply_cycle,
    beneficiary_loss,
    build_associated_graph,
    check_applicable,
    find_minimal_cycle,
    frontier_walk,
)
from .frontier import (
    Frontier,
    FrontierInvariantError,
    check_frontier_invariants,
    compute_frontier,
    frontier_endpoints,
    frontier_iteration,
    half_bound_ratio,
    kinks_of,
    with_all_witnesses,
)
from .generator import (
    NAMED_INSTANCES,
    GenConfig,
    gen_chain_family,
    gen_named,
    gen_random,
)
from .mechanism import (
    AuditViolation,
    ChoiceRecord,
    NoNonEmptyMatchingError,
    PriorityOrder,
    ProblemWithOrder,
    audit_path_independence,
    audit_substitutability,
    dominates_exact_share_matchings,
    induce_choice,
    rank_sum,
    repair_priority,
    respects_priority,
    respects_share,
    select_approx_on_frontier,
    validate_priority,
)
from .oracle import (
    BudgetExceededError,
    CheckReport,
    EnumerationBudget,
    check_disjoint_cycles,
    check_matched_preservation,
    count_matchings,
    enumerate_matchings,
    matchings_at_point,
    oracle_frontier,
    oracle_min_cycle_loss,
    sample_matchings_at_points,
)
from .verify import (
    SUITES,
    CheckResult,
    run_suites,
    verify_cycles,
    verify_frontier,
    verify_lemmas,
    verify_mechanism,
)

__version__ = "0.1.0"

__all__ = [
    "AssociatedGraph",
    "AuditViolation",
    "BudgetExceededError",
    "CheckReport",
    "CheckResult",
    "ChoiceRecord",
    "Cycle",
    "CycleError",
    "DominatedInputError",
    "EnumerationBudget",
    "Frontier",
    "FrontierInvariantError",
    "GenConfig",
    "Instance",
    "InstanceError",
    "MatchPoint",
    "Matching",
    "MatchingError",
    "NAMED_INSTANCES",
    "NoNonEmptyMatchingError",
    "PriorityOrder",
    "Problem",
    "ProblemWithOrder",
    "SUITES",
    "SeatInstance",
    "apply_cycle",
    "audit_path_independence",
    "audit_substitutability",
    "beneficiary_loss",
    "beneficiary_share",
    "build_associated_graph",
    "check_applicable",
    "check_disjoint_cycles",
    "check_frontier_invariants",
    "check_matched_preservation",
    "compute_frontier",
    "count_matchings",
    "dominates",
    "dominates_exact_share_matchings",
    "enumerate_matchings",
    "expand_to_seats",
    "find_minimal_cycle",
    "frontier_endpoints",
    "frontier_iteration",
    "frontier_walk",
    "gen_chain_family",
    "gen_named",
    "gen_random",
    "half_bound_ratio",
    "induce_choice",
    "kinks_of",
    "match_point",
    "matchings_at_point",
    "oracle_frontier",
    "oracle_min_cycle_loss",
    "rank_sum",
    "repair_priority",
    "respects_priority",
    "respects_share",
    "restrict_patients",
    "run_suites",
    "sample_matchings_at_points",
    "select_approx_on_frontier",
    "validate_instance",
    "validate_matching",
    "validate_priority",
    "verify_cycles",
    "verify_frontier",
    "verify_lemmas",
    "verify_mechanism",
    "with_all_witnesses",
]
