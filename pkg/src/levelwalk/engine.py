"""Sampling engines over an index-array view of an explicit tree.

Three interchangeable ways to advance walkers:

* scalar   - one walker, membership probes on the succinct instance
             (`levelwalk.chain` wraps it); the reference semantics.
* walkers  - many walkers in lockstep over index arrays, each on its own
             splitmix64 counter stream. numpy implementation, with an
             optional numba kernel producing bit-identical results.
* counts   - the ensemble tracked as a per-state occupancy vector advanced
             by exact multinomial splits. Law-identical to independent
             walkers (occupancy of i.i.d. chains is multinomial) at
             O(states) cost per step, independent of the walker count.

Randomness layout per walker stream (draw positions are random-access):
with T steps and the lazy kernel, positions 0..B-1 (B = ceil(T/64)) hold the
lazy/active coin bits (bit t of the block stream decides whether step t
moves), and the j-th active move uses the uniform at position B+j. The
non-lazy kernel uses positions 0..T-1 directly, one uniform per step.
A uniform is the top 53 bits of a draw; move thresholds are dyadic rationals
scaled by 2^53, so threshold comparisons are exact integer compares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import GOLDEN, MASK64, U64, mix64_array
from .trees import ExplicitTree

TWO53 = 1 << 53

try:  # numba is optional; the numpy twin is the fallback
    from . import _kernels

    _HAVE_NUMBA = _kernels.AVAILABLE
except Exception:  # pragma: no cover - import-time environment issue
    _kernels = None
    _HAVE_NUMBA = False

_FORCE_NUMPY = False  # tests flip this to exercise the twin


@dataclass(frozen=True)
class IndexedTree:
    """Array view of an explicit tree, states in breadth-first order."""

    level_budget: int
    addresses: tuple[str, ...]
    parent: np.ndarray  # int64; parent[0] = 0 (root has no parent move)
    child0: np.ndarray  # int64; -1 when absent
    child1: np.ndarray
    depth: np.ndarray

    @property
    def size(self) -> int:
        return len(self.addresses)

    def thresholds53(self, lazy: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Cumulative move thresholds scaled by 2^53 (exact dyadics).

        Order: parent, child0, child1; remainder is the self-loop.
        """
        has_parent = np.arange(self.size) != 0
        pp = np.where(has_parent, TWO53 // 2, 0).astype(np.uint64)
        pc0 = np.where(self.child0 >= 0, TWO53 // 4, 0).astype(np.uint64)
        pc1 = np.where(self.child1 >= 0, TWO53 // 4, 0).astype(np.uint64)
        if lazy:
            pp >>= U64(1)
            pc0 >>= U64(1)
            pc1 >>= U64(1)
        thp = pp
        th0 = thp + pc0
        th1 = th0 + pc1
        return thp, th0, th1

    def move_probs(self, lazy: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-state move probabilities (parent, child0, child1) as float64."""
        thp, th0, th1 = self.thresholds53(lazy)
        scale = 1.0 / TWO53
        p_par = thp.astype(np.float64) * scale
        p_c0 = (th0 - thp).astype(np.float64) * scale
        p_c1 = (th1 - th0).astype(np.float64) * scale
        return p_par, p_c0, p_c1


def index_tree(explicit: ExplicitTree) -> IndexedTree:
    idx = explicit.index
    size = explicit.size
    parent = np.zeros(size, np.int64)
    child0 = np.full(size, -1, np.int64)
    child1 = np.full(size, -1, np.int64)
    depth = np.zeros(size, np.int64)
    for i, a in enumerate(explicit.nodes):
        depth[i] = len(a)
        if a:
            parent[i] = idx[a[:-1]]
        c = idx.get(a + "0")
        if c is not None:
            child0[i] = c
        c = idx.get(a + "1")
        if c is not None:
            child1[i] = c
    return IndexedTree(
        explicit.level_budget, explicit.nodes, parent, child0, child1, depth
    )


def walker_keys(base_key: int, count: int, start: int = 0) -> np.ndarray:
    """Substream keys derive_key(base_key, start..start+count-1), vectorized."""
    i = np.arange(start, start + count, dtype=np.uint64)
    tok = mix64_array(U64(GOLDEN & MASK64) + i)
    return mix64_array(U64(base_key & MASK64) ^ tok)


def _active_counts(keys: np.ndarray, steps: int) -> tuple[np.ndarray, int]:
    """Per-walker number of active (non-lazy) moves among `steps` lazy steps.

    Bit t of the walker's block stream is the coin for step t; the count is
    Binomial(steps, 1/2) by construction.
    """
    W = keys.shape[0]
    n_active = np.zeros(W, np.int64)
    nblk = (steps + 63) // 64
    for j in range(nblk):
        blk = mix64_array(keys + U64((GOLDEN * (j + 1)) & MASK64))
        width = min(64, steps - 64 * j)
        if width < 64:
            blk &= U64((1 << width) - 1)
        n_active += np.bitwise_count(blk).astype(np.int64)
    return n_active, nblk

def _steps_numpy(
    itree: IndexedTree,
    thp: np.ndarray,
    th0: np.ndarray,
    th1: np.ndarray,
    keys: np.ndarray,
    counters: np.ndarray,
    n_moves: np.ndarray,
    states: np.ndarray,
) -> np.ndarray:
    """Advance each walker by its own number of non-lazy moves (lockstep)."""
    parent, child0, child1 = itree.parent, itree.child0, itree.child1
    t = 0
    tmax = int(n_moves.max()) if n_moves.size else 0
    golden = U64(GOLDEN)
    while t < tmax:
        live = t < n_moves
        y = mix64_array(keys + golden * (counters + U64(t + 1))) >> U64(11)
        s = states
        go_p = live & (y < thp[s])
        go_0 = live & ~go_p & (y < th0[s])
        go_1 = live & ~go_p & ~go_0 & (y < th1[s])
        states = np.where(go_p, parent[s], np.where(go_0, child0[s],
                          np.where(go_1, child1[s], s)))
        t += 1
    return states


def run_walkers(
    itree: IndexedTree, lazy: bool, steps: int, keys: np.ndarray
) -> np.ndarray:
    """Final state ids of independent root-started walkers after `steps` steps."""
    keys = np.ascontiguousarray(keys, np.uint64)
    W = keys.shape[0]
    if steps == 0 or W == 0:
        return np.zeros(W, np.int64)
    if lazy:
        n_moves, nblk = _active_counts(keys, steps)
        base = np.full(W, nblk, np.uint64)
    else:
        n_moves = np.full(W, steps, np.int64)
        base = np.zeros(W, np.uint64)
    # the hold/move coins already encode laziness, so moves use the
    # non-lazy thresholds in either mode
    thp, th0, th1 = itree.thresholds53(lazy=False)
    if _HAVE_NUMBA and not _FORCE_NUMPY:
        out = np.zeros(W, np.int64)
        _kernels.steps_kernel(
            keys, base, n_moves, itree.parent, itree.child0, itree.child1,
            thp, th0, th1, out,
        )
        return out
    states = np.zeros(W, np.int64)
    return _steps_numpy(itree, thp, th0, th1, keys, base, n_moves, states)


def run_counts(
    itree: IndexedTree,
    lazy: bool,
    steps: int,
    walkers: int,
    generator: np.random.Generator,
) -> np.ndarray:
    """Occupancy counts of `walkers` i.i.d. root-started chains after `steps`.

    Each step splits every state's occupants multinomially across
    (stay-lazy, parent, child0, child1, stay) using exact conditional
    binomials, which reproduces the joint law of independent walkers.
    """
    size = itree.size
    counts = np.zeros(size, np.int64)
    counts[0] = walkers
    if steps == 0 or walkers == 0:
        return counts
    p_par, p_c0, p_c1 = itree.move_probs(lazy=False)
    # conditional probabilities for sequential binomial splitting
    rem1 = 1.0 - p_par
    q0 = np.divide(p_c0, rem1, out=np.zeros(size), where=rem1 > 0)
    rem2 = rem1 - p_c0
    q1 = np.divide(p_c1, rem2, out=np.zeros(size), where=rem2 > 0)
    parent, child0, child1 = itree.parent, itree.child0, itree.child1
    has_c0 = child0 >= 0
    has_c1 = child1 >= 0
    dest_c0 = child0[has_c0]
    dest_c1 = child1[has_c1]
    for _ in range(steps):
        if lazy:
            active = generator.binomial(counts, 0.5)
        else:
            active = counts
        up = generator.binomial(active, p_par)
        rem = active - up
        d0 = np.zeros(size, np.int64)
        d0[has_c0] = generator.binomial(rem[has_c0], q0[has_c0])
        rem = rem - d0
        d1 = np.zeros(size, np.int64)
        d1[has_c1] = generator.binomial(rem[has_c1], q1[has_c1])
        stay = counts - up - d0 - d1  # lazy holds + kernel self-loops
        new = np.zeros(size, np.int64)
        np.add.at(new, parent[1:], up[1:])
        np.add.at(new, dest_c0, d0[has_c0])
        np.add.at(new, dest_c1, d1[has_c1])
        counts = new + stay
    return counts


def split_batch_hits(
    generator: np.random.Generator,
    total_hits: int,
    total_walkers: int,
    batch_size: int,
    batches: int,
) -> np.ndarray:
    """Partition pooled root hits into per-batch counts.

    Walkers are exchangeable, so given the pooled hit count the per-batch
    counts are multivariate hypergeometric; sampled sequentially.
    """
    hits = np.zeros(batches, np.int64)
    good = int(total_hits)
    remaining = int(total_walkers)
    for b in range(batches - 1):
        h = int(generator.hypergeometric(good, remaining - good, batch_size))
        hits[b] = h
        good -= h
        remaining -= batch_size
    hits[batches - 1] = good
    return hits


def force_numpy(flag: bool) -> None:
    """Test hook: route run_walkers through the numpy twin."""
    global _FORCE_NUMPY
    _FORCE_NUMPY = flag


def numba_available() -> bool:
    return _HAVE_NUMBA
