"""levelwalk: level-weighted random walks for backtracking-tree size estimation.

A library for the size-of-subtree problem: given a succinct membership
predicate for a prefix-closed subtree of the perfect binary tree of height n,
estimate how many nodes it has. The walk here weights depth-i nodes by
2^(n-i), mixes in time polynomial in n, and its normalizing factors over the
depth-prunings of the instance telescope into the exact size; estimating them
by sampling gives an additive-error size estimate in randomized polynomial
time. Exact rational oracles (stationarity, detailed balance, conductance,
mixing times, the telescoping identities) verify every quantitative claim on
small instances.
"""

from .chain import (
    ChainParams,
    LocalKernel,
    burn_in_steps,
    local_kernel,
    run_chain,
    sample_final_states,
    sample_stationary,
    step,
)
from .cnf import Cnf, cnf_tree, parse_dimacs, render_dimacs
from .descriptors import DescriptorError, tree_from_descriptor
from .errors import (
    BudgetExceededError,
    CapExceededError,
    DegenerateChainError,
    DimacsParseError,
    EstimationError,
    InconsistentProfileError,
    LevelwalkError,
    NotInTreeError,
    OutOfRangeError,
)
from .estimators import (
    AlphaEstimate,
    ProbabilityEstimate,
    SizeEstimate,
    batch_count,
    estimate_alpha,
    estimate_probability,
    estimate_size_additive,
    estimate_size_uniform,
    knuth_estimate,
    median_of_batches,
    resolve_burn_in,
    samples_per_batch,
)
from .exact import (
    ExplicitChain,
    LevelProfile,
    StationaryProfile,
    alpha_inverses_of_pruned_family,
    conductance_exact,
    distribution_at_time,
    level_counts_from_alphas,
    mixing_time_exact,
    size_from_alpha_inverses,
    stationary_exact,
    transition_matrix,
    tv_distance,
    verify_detailed_balance,
    verify_stationary,
)
from .rng import RandomStream, mix64
from .trees import (
    ExplicitTree,
    NodeAddr,
    ROOT,
    SuccinctTree,
    addr_from_heap_index,
    children_in_tree,
    comb_tree,
    contains,
    enumerate_tree,
    exact_count,
    full_tree,
    hash_random_tree,
    heap_index,
    parent_of,
    path_tree,
    prune,
    root_only_tree,
    validate_prefix_closed,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaEstimate",
    "BudgetExceededError",
    "CapExceededError",
    "ChainParams",
    "Cnf",
    "DegenerateChainError",
    "DescriptorError",
    "DimacsParseError",
    "EstimationError",
    "ExplicitChain",
    "ExplicitTree",
    "InconsistentProfileError",
    "LevelProfile",
    "LevelwalkError",
    "LocalKernel",
    "NodeAddr",
    "NotInTreeError",
    "OutOfRangeError",
    "ProbabilityEstimate",
    "ROOT",
    "RandomStream",
    "SizeEstimate",
    "StationaryProfile",
    "SuccinctTree",
    "addr_from_heap_index",
    "alpha_inverses_of_pruned_family",
    "batch_count",
    "burn_in_steps",
    "children_in_tree",
    "comb_tree",
    "conductance_exact",
    "contains",
    "cnf_tree",
    "distribution_at_time",
    "enumerate_tree",
    "estimate_alpha",
    "estimate_probability",
    "estimate_size_additive",
    "estimate_size_uniform",
    "exact_count",
    "full_tree",
    "hash_random_tree",
    "heap_index",
    "knuth_estimate",
    "level_counts_from_alphas",
    "local_kernel",
    "median_of_batches",
    "mix64",
    "mixing_time_exact",
    "parent_of",
    "parse_dimacs",
    "path_tree",
    "prune",
    "render_dimacs",
    "resolve_burn_in",
    "root_only_tree",
    "run_chain",
    "sample_final_states",
    "sample_stationary",
    "samples_per_batch",
    "size_from_alpha_inverses",
    "stationary_exact",
    "step",
    "transition_matrix",
    "tree_from_descriptor",
    "tv_distance",
    "validate_prefix_closed",
    "verify_detailed_balance",
    "verify_stationary",
]
