"""Marginal measurement-to-landmark association probabilities for semantic
SLAM, computed from the K likeliest assignments with a certified error bound,
plus exact brute-force and matrix-permanent oracles."""

from ._core import (
    Assignment,
    AssignmentProblem,
    BudgetExceeded,
    DegenerateQuadric,
    Ellipsoid,
    MarginalTable,
    ParseError,
    RankedAssignmentSet,
    count_bound_log,
    count_exact,
    default_demo_config,
    ellipsoid_distance,
    enumerate_all,
    error_bound,
    generate_corpus,
    kbest,
    log_sum_exp,
    marginals,
    permanent_marginals,
    permanent_ryser_log,
    problem_read,
    problem_write,
    solve,
    true_marginals,
)

__all__ = [
    "Assignment",
    "AssignmentProblem",
    "BudgetExceeded",
    "DegenerateQuadric",
    "Ellipsoid",
    "MarginalTable",
    "ParseError",
    "RankedAssignmentSet",
    "count_bound_log",
    "count_exact",
    "default_demo_config",
    "ellipsoid_distance",
    "enumerate_all",
    "error_bound",
    "generate_corpus",
    "kbest",
    "log_sum_exp",
    "marginals",
    "permanent_marginals",
    "permanent_ryser_log",
    "problem_read",
    "problem_write",
    "solve",
    "true_marginals",
]
