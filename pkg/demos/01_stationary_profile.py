#!/usr/bin/env python3
"""Tour of the level-weighted stationary profile.

Builds a few instances, prints their stationary data, and checks the exact
identities: pi P = pi, detailed balance, and the integrality and bounds of
the inverse normalizing factor.
"""

from fractions import Fraction

from levelwalk import (
    comb_tree,
    enumerate_tree,
    full_tree,
    hash_random_tree,
    path_tree,
    stationary_exact,
    transition_matrix,
    verify_detailed_balance,
    verify_stationary,
)

print("A node at depth i carries stationary weight 2^(n-i); the inverse")
print("normalizing factor alpha^-1 = sum of weights is always an integer.\n")

for tree in (full_tree(3), path_tree(3), comb_tree(3),
             hash_random_tree(0, 4, 0.6)):
    explicit = enumerate_tree(tree)
    profile = stationary_exact(explicit)
    n = tree.level_budget
    print(f"{tree.label}: {explicit.size} nodes, "
          f"alpha^-1 = {profile.alpha_inverse} "
          f"(full-tree maximum {(n + 1) * 2 ** n})")
    print(f"  pi(root) = {profile.probs['']} >= 1/(n+1) = {Fraction(1, n + 1)}")
    for lazy in (True, False):
        chain = transition_matrix(explicit, lazy=lazy)
        ok_pi = verify_stationary(chain, profile)
        ok_db = verify_detailed_balance(chain, profile)
        kind = "lazy" if lazy else "non-lazy"
        print(f"  {kind:8s} kernel: stationary={ok_pi} detailed-balance={ok_db}")
    print()

print("The profile of the full tree spreads mass uniformly over levels:")
profile = stationary_exact(enumerate_tree(full_tree(4)))
by_level = {}
for addr, p in profile.probs.items():
    by_level[len(addr)] = by_level.get(len(addr), Fraction(0)) + p
print("  per-level mass:", dict(sorted(by_level.items())))
