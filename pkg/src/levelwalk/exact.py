"""Exact rational oracles on small explicit trees.

Everything here is integer/Fraction arithmetic: stationary profiles and their
normalizing factors, transition matrices, total-variation mixing times,
exhaustive conductance, and the pruned-family identities that reconstruct the
tree size from normalizing factors. Floating point appears only inside the
conductance subset screening, and every screened candidate is re-compared
exactly before anything is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import (
    CapExceededError,
    DegenerateChainError,
    InconsistentProfileError,
    OutOfRangeError,
)
from .trees import (
    DEFAULT_ENUM_CAP,
    ExplicitTree,
    NodeAddr,
    ROOT,
    SuccinctTree,
    enumerate_tree,
)

DEFAULT_MATRIX_CAP = 4096
DEFAULT_CONDUCTANCE_CAP = 18


@dataclass(frozen=True)
class StationaryProfile:
    """Exact stationary data: node u carries weight 2^(n - depth(u)), and
    alpha_inverse is the integer sum of all weights."""

    level_budget: int
    alpha_inverse: int
    probs: dict[NodeAddr, Fraction] = field(repr=False)

    def prob(self, addr: NodeAddr) -> Fraction:
        return self.probs[addr]

    @property
    def alpha(self) -> Fraction:
        return Fraction(1, self.alpha_inverse)


@dataclass(frozen=True)
class ExplicitChain:
    """A finite chain: breadth-first state list and exact sparse rows."""

    states: tuple[NodeAddr, ...]
    rows: tuple[tuple[tuple[int, Fraction], ...], ...]
    lazy: bool
    level_budget: int
    index: dict[NodeAddr, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(
                self, "index", {a: i for i, a in enumerate(self.states)}
            )

    @property
    def size(self) -> int:
        return len(self.states)

    def probability(self, u: NodeAddr, v: NodeAddr) -> Fraction:
        i, j = self.index[u], self.index[v]
        for k, p in self.rows[i]:
            if k == j:
                return p
        return Fraction(0)

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.size for _ in range(self.size)]
        for i, row in enumerate(self.rows):
            for j, p in row:
                out[i][j] = p
        return out


@dataclass(frozen=True)
class LevelProfile:
    """Node counts per depth; r_0 = 1 and r_{k+1} <= 2 r_k for a valid tree."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if not self.counts or self.counts[0] != 1:
            raise InconsistentProfileError("level counts must start with r_0 = 1")
        for k in range(1, len(self.counts)):
            if self.counts[k] < 0:
                raise InconsistentProfileError(f"negative level count r_{k}")
            if self.counts[k] > 2 * self.counts[k - 1]:
                raise InconsistentProfileError(
                    f"r_{k} = {self.counts[k]} exceeds twice r_{k-1}"
                )

    @property
    def size(self) -> int:
        return sum(self.counts)


def stationary_exact(tree: ExplicitTree) -> StationaryProfile:
    """Stationary distribution of the walk on an explicit tree.

    alpha_inverse = sum over nodes of 2^(n - depth), an exact integer;
    node u gets probability 2^(n - depth(u)) / alpha_inverse.
    """
    n = tree.level_budget
    alpha_inverse = 0
    weights: list[int] = []
    for a in tree.nodes:
        w = 1 << (n - len(a))
        weights.append(w)
        alpha_inverse += w
    probs = {
        a: Fraction(w, alpha_inverse) for a, w in zip(tree.nodes, weights)
    }
    return StationaryProfile(n, alpha_inverse, probs)


def transition_matrix(
    tree: ExplicitTree, lazy: bool = True, cap: int = DEFAULT_MATRIX_CAP
) -> ExplicitChain:
    """Assemble the walk's transition rows over all states of `tree`."""
    if tree.size > cap:
        raise CapExceededError(
            f"{tree.size} states exceed the matrix cap {cap}"
        )
    idx = tree.index
    half = Fraction(1, 2)
    quarter = Fraction(1, 4)
    scale = half if lazy else Fraction(1)
    rows = []
    for i, a in enumerate(tree.nodes):
        row: list[tuple[int, Fraction]] = []
        total = Fraction(0)
        if a:
            p = half * scale
            row.append((idx[a[:-1]], p))
            total += p
        for c in (a + "0", a + "1"):
            j = idx.get(c)
            if j is not None:
                p = quarter * scale
                row.append((j, p))
                total += p
        row.append((i, 1 - total))
        rows.append(tuple(row))
    return ExplicitChain(tree.nodes, tuple(rows), lazy, tree.level_budget)


def verify_stationary(chain: ExplicitChain, profile: StationaryProfile) -> bool:
    """Exact check that pi P = pi."""
    acc = [Fraction(0)] * chain.size
    for i, a in enumerate(chain.states):
        pi_i = profile.probs[a]
        for j, p in chain.rows[i]:
            acc[j] += pi_i * p
    return all(
        acc[j] == profile.probs[a] for j, a in enumerate(chain.states)
    )


def verify_detailed_balance(chain: ExplicitChain, profile: StationaryProfile) -> bool:
    """Exact check that pi(u) p(u,v) = pi(v) p(v,u) on every edge."""
    for i, a in enumerate(chain.states):
        pi_i = profile.probs[a]
        for j, p in chain.rows[i]:
            if j == i:
                continue
            b = chain.states[j]
            if pi_i * p != profile.probs[b] * chain.probability(b, a):
                return False
    return True


def _scaled_rows(chain: ExplicitChain) -> list[list[tuple[int, int]]]:
    """Rows as (target, 8p) integer pairs; every probability is a multiple of 1/8."""
    out = []
    for row in chain.rows:
        srow = []
        for j, p in row:
            c = p * 8
            if c.denominator != 1:
                raise InconsistentProfileError(
                    "chain probabilities must be multiples of 1/8"
                )
            srow.append((j, c.numerator))
        out.append(srow)
    return out


def distribution_at_time(
    chain: ExplicitChain, start: NodeAddr, t: int
) -> dict[NodeAddr, Fraction]:
    """Exact law of the chain after t steps from `start`."""
    if t < 0:
        raise OutOfRangeError("t must be nonnegative")
    srows = _scaled_rows(chain)
    num = [0] * chain.size
    num[chain.index[start]] = 1
    for _ in range(t):
        new = [0] * chain.size
        for i, ni in enumerate(num):
            if ni:
                for j, c in srows[i]:
                    if c:
                        new[j] += ni * c
        num = new
    den = 8**t
    return {a: Fraction(num[i], den) for i, a in enumerate(chain.states)}


def tv_distance(
    p: Mapping[NodeAddr, Fraction], q: Mapping[NodeAddr, Fraction]
) -> Fraction:
    """Total variation distance, (1/2) sum |p - q| over the union support."""
    keys = set(p) | set(q)
    zero = Fraction(0)
    return sum((abs(p.get(k, zero) - q.get(k, zero)) for k in keys), zero) / 2


def mixing_time_exact(
    chain: ExplicitChain,
    profile: StationaryProfile,
    eps: Fraction | float,
    start: NodeAddr = ROOT,
    max_steps: int = 10**7,
) -> int:
    """Least t with TV(law after t steps from `start`, pi) <= eps, exact.

    Works in integers: the time-t law has denominator 8^t and pi has
    denominator alpha_inverse, so the TV comparison cross-multiplies.
    TV to stationarity never increases with t, so the scan stops at the
    first success.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise OutOfRangeError("eps must lie in (0, 1)")
    srows = _scaled_rows(chain)
    n = chain.level_budget
    A = profile.alpha_inverse
    w = [1 << (n - len(a)) for a in chain.states]
    num = [0] * chain.size
    num[chain.index[start]] = 1
    pow8 = 1
    t = 0
    while True:
        # TV <= eps  <=>  sum_j |num_j A - w_j 8^t| * eps.den <= 2 * 8^t * A * eps.num
        lhs = sum(abs(nj * A - wj * pow8) for nj, wj in zip(num, w))
        if lhs * eps.denominator <= 2 * pow8 * A * eps.numerator:
            return t
        if t >= max_steps:
            raise OutOfRangeError(f"no mixing within {max_steps} steps")
        new = [0] * chain.size
        for i, ni in enumerate(num):
            if ni:
                for j, c in srows[i]:
                    if c:
                        new[j] += ni * c
        num = new
        pow8 *= 8
        t += 1


def conductance_exact(
    chain: ExplicitChain,
    profile: StationaryProfile,
    cap: int = DEFAULT_CONDUCTANCE_CAP,
) -> Fraction:
    """Exhaustive conductance: min over subsets Y with 0 < pi(Y) <= 1/2 of
    cut weight / pi(Y), with edge weights w_uv = pi(u) p(u,v).

    Scaled to integers (weights times 8 * alpha_inverse), all 2^size subsets
    are screened vectorized in float; the minimum is then confirmed among the
    near-minimal candidates by exact cross-multiplication.
    """
    size = chain.size
    if size < 2:
        raise DegenerateChainError(
            "conductance needs at least two states (no subset has 0 < pi(Y) <= 1/2)"
        )
    if size > cap:
        raise CapExceededError(f"{size} states exceed the conductance cap {cap}")
    n = chain.level_budget
    A = profile.alpha_inverse
    mass = np.array([8 << (n - len(a)) for a in chain.states], dtype=np.int64)
    srows = _scaled_rows(chain)
    edges = []  # (i, j, scaled weight) once per undirected edge
    for i, row in enumerate(srows):
        for j, c in row:
            if j > i and c:
                edges.append((i, j, (1 << (n - len(chain.states[i]))) * c))
    masks = np.arange(1, 1 << size, dtype=np.int64)
    bits = [(masks >> v) & 1 for v in range(size)]
    total_mass = np.zeros_like(masks)
    for v in range(size):
        total_mass += bits[v] * int(mass[v])
    cut = np.zeros_like(masks)
    for i, j, wq in edges:
        cut += (bits[i] ^ bits[j]) * int(wq)
    half = 4 * A  # total scaled mass is 8A
    valid = total_mass <= half  # mass > 0 holds since masks start at 1
    ratio = np.where(valid, cut / total_mass, np.inf)
    best = ratio.min()
    near = np.nonzero(ratio <= best * (1 + 1e-12) + 1e-300)[0]
    best_frac: Optional[Fraction] = None
    for k in near:
        f = Fraction(int(cut[k]), int(total_mass[k]))
        if best_frac is None or f < best_frac:
            best_frac = f
    assert best_frac is not None
    return best_frac


def size_from_alpha_inverses(alpha_inverses: Sequence[int]) -> int:
    """Tree size from the pruned family's inverse normalizing factors:
    |S| = A_n - sum_{k<n} A_k, where A_k = 1/alpha of the depth-k pruning."""
    if not alpha_inverses:
        raise InconsistentProfileError("need at least A_0")
    if alpha_inverses[0] != 1:
        raise InconsistentProfileError(
            f"A_0 must be 1 (a nonempty tree has exactly the root at depth 0), "
            f"got {alpha_inverses[0]}"
        )
    return alpha_inverses[-1] - sum(alpha_inverses[:-1])


def level_counts_from_alphas(alpha_inverses: Sequence[int]) -> LevelProfile:
    """Per-depth node counts from the pruned family: r_k = A_k - 2 A_{k-1}."""
    if not alpha_inverses:
        raise InconsistentProfileError("need at least A_0")
    if alpha_inverses[0] != 1:
        raise InconsistentProfileError("A_0 must be 1")
    counts = [1]
    for k in range(1, len(alpha_inverses)):
        r = alpha_inverses[k] - 2 * alpha_inverses[k - 1]
        if r < 0:
            raise InconsistentProfileError(
                f"negative level count r_{k} = {r}: inconsistent normalizing factors"
            )
        counts.append(r)
    return LevelProfile(tuple(counts))


def alpha_inverses_of_pruned_family(
    tree: SuccinctTree, cap: int = DEFAULT_ENUM_CAP
) -> list[int]:
    """[A_0, ..., A_n] where A_i is alpha_inverse of the depth-i pruning.

    Each pruning uses its own budget i, so a depth-d node weighs 2^(i-d)
    inside A_i. Enumerates the tree once and folds the level counts.
    """
    counts = enumerate_tree(tree, cap).level_counts()
    out = []
    acc = 0
    for i in range(tree.level_budget + 1):
        acc = 2 * acc + counts[i]  # sum_{d<=i} r_d 2^(i-d)
        out.append(acc)
    return out
