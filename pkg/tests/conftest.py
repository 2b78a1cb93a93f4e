"""Shared instance builders for the test suite."""

import pytest

from levelwalk import (
    Cnf,
    RandomStream,
    SuccinctTree,
    cnf_tree,
    comb_tree,
    full_tree,
    hash_random_tree,
    path_tree,
    root_only_tree,
)


def small_shape_trees(max_n: int = 4) -> list[SuccinctTree]:
    trees = []
    for n in range(max_n + 1):
        trees += [full_tree(n), path_tree(n), comb_tree(n), root_only_tree(n)]
    return trees


def random_cnf(seed: int, num_vars: int, num_clauses: int, width: int = 3) -> Cnf:
    """A reproducible random formula (no empty clauses by construction)."""
    rng = RandomStream(seed, (0xCFC,))
    clauses = []
    for _ in range(num_clauses):
        k = 1 + int(rng.uniform() * width)
        lits = []
        seen = set()
        while len(lits) < k:
            v = 1 + int(rng.uniform() * num_vars)
            if v in seen:
                continue
            seen.add(v)
            sign = 1 if rng.uniform() < 0.5 else -1
            lits.append(sign * v)
        clauses.append(tuple(lits))
    return Cnf(num_vars, tuple(clauses))


@pytest.fixture
def shape_trees():
    return small_shape_trees(4)


@pytest.fixture
def mixed_trees():
    trees = small_shape_trees(3)
    trees += [hash_random_tree(s, 5, q) for s, q in [(1, 0.6), (2, 0.8), (3, 0.4)]]
    trees.append(cnf_tree(random_cnf(7, 5, 4), label="cnf:test7"))
    return trees
