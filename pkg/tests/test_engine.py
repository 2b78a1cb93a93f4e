import numpy as np
import pytest
from fractions import Fraction

from levelwalk import (
    RandomStream,
    comb_tree,
    distribution_at_time,
    enumerate_tree,
    full_tree,
    hash_random_tree,
    stationary_exact,
    transition_matrix,
)
from levelwalk import engine
from levelwalk.engine import (
    index_tree,
    run_counts,
    run_walkers,
    split_batch_hits,
    walker_keys,
)
from levelwalk.rng import derive_key


@pytest.fixture
def itree():
    return index_tree(enumerate_tree(comb_tree(3)))


def test_index_structure(itree):
    # comb(3): '', '0', '1', '00', '01', '000', '001', '0000', '0001'
    assert itree.addresses[0] == ""
    i0 = itree.addresses.index("0")
    assert itree.parent[i0] == 0
    assert itree.child0[0] == i0
    assert itree.child1[itree.addresses.index("00")] == itree.addresses.index("001")
    leafs = [i for i, a in enumerate(itree.addresses) if len(a) == 4]
    for i in leafs:
        assert itree.child0[i] == -1 and itree.child1[i] == -1


def test_thresholds_are_exact_dyadics(itree):
    thp, th0, th1 = itree.thresholds53(lazy=True)
    scale = 1 << 53
    assert thp[0] == 0 and th0[0] == scale // 8  # root: no parent, child0 at 1/8
    i = itree.addresses.index("0")  # internal, two children
    assert (int(thp[i]), int(th0[i]), int(th1[i])) == (
        scale // 4, scale // 4 + scale // 8, scale // 2)


def test_walker_keys_match_substreams():
    base = RandomStream(31)
    keys = walker_keys(base.key, 5)
    assert [int(k) for k in keys] == [base.child(w).key for w in range(5)]
    shifted = walker_keys(base.key, 3, start=2)
    assert [int(k) for k in shifted] == [base.child(w).key for w in (2, 3, 4)]


def test_numpy_twin_matches_numba():
    if not engine.numba_available():
        pytest.skip("numba not installed")
    it = index_tree(enumerate_tree(hash_random_tree(4, 6, 0.8)))
    keys = walker_keys(derive_key(99, 0), 512)
    for lazy in (True, False):
        fast = run_walkers(it, lazy, 301, keys)
        engine.force_numpy(True)
        try:
            slow = run_walkers(it, lazy, 301, keys)
        finally:
            engine.force_numpy(False)
        assert np.array_equal(fast, slow)


def test_run_walkers_zero_steps(itree):
    out = run_walkers(itree, True, 0, walker_keys(7, 64))
    assert np.all(out == 0)


def test_counts_preserves_walkers(itree):
    gen = RandomStream(5).numpy_generator()
    counts = run_counts(itree, True, 100, 10_000, gen)
    assert counts.sum() == 10_000
    assert counts.min() >= 0


def test_counts_deterministic(itree):
    a = run_counts(itree, True, 50, 5000, RandomStream(6).numpy_generator())
    b = run_counts(itree, True, 50, 5000, RandomStream(6).numpy_generator())
    assert np.array_equal(a, b)


def test_counts_matches_exact_distribution():
    # compare occupancy after t steps against the exact time-t law
    tree = full_tree(3)
    explicit = enumerate_tree(tree)
    it = index_tree(explicit)
    t, W = 12, 400_000
    counts = run_counts(it, True, t, W, RandomStream(17).numpy_generator())
    exact = distribution_at_time(
        transition_matrix(explicit, lazy=True), "", t
    )
    for i, addr in enumerate(explicit.nodes):
        p = float(exact[addr])
        se = (p * (1 - p) / W) ** 0.5
        assert abs(counts[i] / W - p) < 6 * se + 1e-9


def test_walkers_matches_exact_distribution():
    tree = full_tree(2)
    explicit = enumerate_tree(tree)
    it = index_tree(explicit)
    t, W = 9, 200_000
    finals = run_walkers(it, True, t, walker_keys(1234, W))
    exact = distribution_at_time(transition_matrix(explicit, lazy=True), "", t)
    hist = np.bincount(finals, minlength=it.size)
    for i, addr in enumerate(explicit.nodes):
        p = float(exact[addr])
        se = (p * (1 - p) / W) ** 0.5
        assert abs(hist[i] / W - p) < 6 * se + 1e-9


def test_nonlazy_walkers_match_exact_distribution():
    tree = comb_tree(2)
    explicit = enumerate_tree(tree)
    it = index_tree(explicit)
    t, W = 7, 200_000
    finals = run_walkers(it, False, t, walker_keys(777, W))
    exact = distribution_at_time(transition_matrix(explicit, lazy=False), "", t)
    hist = np.bincount(finals, minlength=it.size)
    for i, addr in enumerate(explicit.nodes):
        p = float(exact[addr])
        se = (p * (1 - p) / W) ** 0.5
        assert abs(hist[i] / W - p) < 6 * se + 1e-9


def test_split_batch_hits_partitions():
    gen = RandomStream(8).numpy_generator()
    hits = split_batch_hits(gen, 137, 1000, 100, 10)
    assert hits.sum() == 137
    assert np.all(hits >= 0) and np.all(hits <= 100)


def test_split_batch_hits_extremes():
    gen = RandomStream(9).numpy_generator()
    assert np.all(split_batch_hits(gen, 0, 600, 200, 3) == 0)
    assert np.all(split_batch_hits(gen, 600, 600, 200, 3) == 200)


def test_move_probs_rows_sum_below_one(itree):
    p_par, p_c0, p_c1 = itree.move_probs(lazy=False)
    total = p_par + p_c0 + p_c1
    assert np.all(total <= 1.0)
    assert p_par[0] == 0.0
    i = itree.addresses.index("0")
    assert (p_par[i], p_c0[i], p_c1[i]) == (0.5, 0.25, 0.25)
