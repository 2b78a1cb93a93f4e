"""Randomized estimators for the normalizing factor and the tree size.

The normalizing-factor estimator samples the walk near stationarity, takes
the fraction of samples that landed on the root (whose stationary mass is
2^n * alpha), and repeats in batches whose median soaks up the failure
probability. The size estimator runs it on every depth-pruning and
telescopes 1/alpha estimates into a size with an additive-error guarantee
relative to 2^n. Two baselines round out the picture: uniform sampling of
the ambient perfect tree, and the classic single-descent branching-factor
estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import engine
from .chain import ChainParams, burn_in_steps, run_chain
from .errors import BudgetExceededError, EstimationError, OutOfRangeError
from .exact import (
    DEFAULT_MATRIX_CAP,
    mixing_time_exact,
    stationary_exact,
    transition_matrix,
)
from .rng import RandomStream
from .trees import (
    DEFAULT_ENUM_CAP,
    ROOT,
    SuccinctTree,
    addr_from_heap_index,
    children_in_tree,
    contains,
    enumerate_tree,
    prune,
    uniform_heap_index,
)

DEFAULT_CM = 4.0  # Chebyshev at success probability 3/4, given pi(root) >= 1/(n+1)


@dataclass(frozen=True)
class AlphaEstimate:
    """A (1 +- zeta) estimate of the normalizing factor, with its budget."""

    value: float
    zeta: float
    delta: float
    batches: int
    samples_per_batch: int
    burn_in: int
    chain_steps_total: int
    batch_values: tuple[float, ...] = field(default=(), repr=False)

    def to_record(self) -> dict:
        return {
            "alpha": self.value,
            "zeta": self.zeta,
            "delta": self.delta,
            "batches": self.batches,
            "samples_per_batch": self.samples_per_batch,
            "burn_in": self.burn_in,
            "chain_steps_total": self.chain_steps_total,
        }


@dataclass(frozen=True)
class SizeEstimate:
    """An additive-error size estimate: |value - |S|| <= xi 2^n w.p. >= 1-delta."""

    value: float
    xi: float
    delta: float
    a_hat: float
    b_hat: float
    per_level_alphas: tuple[AlphaEstimate, ...] = ()
    chain_steps_total: int = 0
    samples_total: int = 0

    def to_record(self) -> dict:
        rec = {
            "size": self.value,
            "xi": self.xi,
            "delta": self.delta,
            "a_hat": self.a_hat,
            "b_hat": self.b_hat,
            "chain_steps_total": self.chain_steps_total,
            "samples_total": self.samples_total,
        }
        if self.per_level_alphas:
            rec["per_level"] = [a.to_record() for a in self.per_level_alphas]
        return rec


@dataclass(frozen=True)
class ProbabilityEstimate:
    """Additive estimate of p = |S| / 2^n, clamped into [0, 2]."""

    value: float
    xi: float
    delta: float
    size_estimate: SizeEstimate

    def to_record(self) -> dict:
        return {
            "probability": self.value,
            "xi": self.xi,
            "delta": self.delta,
            "size": self.size_estimate.value,
        }


def median_of_batches(values: list[float]) -> float:
    """Middle order statistic; requires an odd number of batches."""
    if not values:
        raise OutOfRangeError("need at least one batch value")
    if len(values) % 2 == 0:
        raise OutOfRangeError(
            "median amplification needs an odd batch count"
        )
    return sorted(values)[len(values) // 2]


def batch_count(delta: float) -> int:
    """Batches for the median trick: 2 ceil(4 ln(1/delta)) + 1 (always odd)."""
    if not 0 < delta < 1:
        raise OutOfRangeError("delta must lie in (0, 1)")
    return 2 * math.ceil(4 * math.log(1 / delta)) + 1


def samples_per_batch(n: int, zeta: float, c_m: float = DEFAULT_CM) -> int:
    """ceil(c_m (n+1) / zeta^2): Chebyshev gives each batch success >= 3/4."""
    if not 0 < zeta <= 1:
        raise OutOfRangeError("zeta must lie in (0, 1]")
    return math.ceil(c_m * (n + 1) / zeta**2)


@lru_cache(maxsize=None)
def _measured_burn_in(
    tree: SuccinctTree, lazy: bool, eps: Fraction, enum_cap: int, matrix_cap: int
) -> int:
    explicit = enumerate_tree(tree, enum_cap)
    chain = transition_matrix(explicit, lazy=lazy, cap=matrix_cap)
    profile = stationary_exact(explicit)
    return mixing_time_exact(chain, profile, eps)


def resolve_burn_in(
    tree: SuccinctTree,
    tv_epsilon: float,
    mode: str = "bound",
    params: ChainParams = ChainParams(),
    enum_cap: int = DEFAULT_ENUM_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> int:
    """Burn-in steps for a TV budget: the conductance bound, or the exactly
    measured mixing time ("exact-measured", needs an enumerable instance)."""
    if mode == "bound":
        return burn_in_steps(tree.level_budget, tv_epsilon, params.burn_in_constant)
    if mode == "exact-measured":
        return _measured_burn_in(
            tree, params.lazy, Fraction(tv_epsilon), enum_cap, matrix_cap
        )
    raise OutOfRangeError(f"unknown burn-in mode {mode!r}")


def _root_hits_per_batch(
    tree: SuccinctTree,
    batches: int,
    m: int,
    steps: int,
    rng: RandomStream,
    lazy: bool,
    sampling: str,
    enum_cap: int,
) -> np.ndarray:
    """Root-hit counts of `batches` independent batches of m walkers each."""
    explicit = None
    if sampling in ("auto", "counts", "walkers"):
        try:
            explicit = enumerate_tree(tree, enum_cap)
        except BudgetExceededError:
            if sampling in ("counts", "walkers"):
                raise
            explicit = None
    if explicit is not None and sampling in ("auto", "counts"):
        itree = engine.index_tree(explicit)
        gen = rng.numpy_generator()
        total = batches * m
        counts = engine.run_counts(itree, lazy, steps, total, gen)
        return engine.split_batch_hits(gen, int(counts[0]), total, m, batches)
    itree = engine.index_tree(explicit) if explicit is not None else None
    hits = np.zeros(batches, np.int64)
    for b in range(batches):
        brng = rng.child(b)
        if itree is not None:
            keys = engine.walker_keys(brng.key, m)
            finals = engine.run_walkers(itree, lazy, steps, keys)
            hits[b] = int(np.count_nonzero(finals == 0))
        else:
            hits[b] = sum(
                run_chain(tree, steps, brng.child(w), lazy=lazy) == ROOT
                for w in range(m)
            )
    return hits


def estimate_alpha(
    tree: SuccinctTree,
    zeta: float,
    delta: float,
    rng: RandomStream,
    *,
    burn_in_mode: str = "bound",
    params: ChainParams = ChainParams(),
    c_m: float = DEFAULT_CM,
    sampling: str = "auto",
    enum_cap: int = DEFAULT_ENUM_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> AlphaEstimate:
    """Estimate the normalizing factor within (1 +- zeta), w.p. >= 1 - delta.

    Each of t = 2 ceil(4 ln(1/delta)) + 1 batches draws m = ceil(c_m (n+1) /
    zeta^2) near-stationary samples (burn-in at TV budget zeta / (2(n+1)), so
    the sampling bias costs at most zeta/2 of the relative-error budget),
    estimates alpha as 2^-n times the batch's root fraction, and the median
    of the batches is returned.

    `sampling` picks the ensemble mechanics: "counts" advances the batches
    jointly as an occupancy vector with exact multinomial splits (fastest,
    same law), "walkers" steps every sample on its own substream, "auto"
    uses counts when the tree fits the enumeration cap.
    """
    if not 0 < zeta <= 1:
        raise OutOfRangeError("zeta must lie in (0, 1]")
    if not 0 < delta < 1:
        raise OutOfRangeError("delta must lie in (0, 1)")
    n = tree.level_budget
    t = batch_count(delta)
    m = samples_per_batch(n, zeta, c_m)
    tv = zeta / (2 * (n + 1))
    steps = resolve_burn_in(tree, tv, burn_in_mode, params, enum_cap, matrix_cap)
    hits = _root_hits_per_batch(
        tree, t, m, steps, rng, params.lazy, sampling, enum_cap
    )
    scale = 2.0**-n
    batch_values = tuple(float(h) / m * scale for h in hits)
    value = median_of_batches(list(batch_values))
    return AlphaEstimate(
        value=value,
        zeta=zeta,
        delta=delta,
        batches=t,
        samples_per_batch=m,
        burn_in=steps,
        chain_steps_total=t * m * steps,
        batch_values=batch_values,
    )


def estimate_size_additive(
    tree: SuccinctTree,
    xi: float,
    delta: float,
    rng: RandomStream,
    *,
    burn_in_mode: str = "bound",
    params: ChainParams = ChainParams(),
    c_m: float = DEFAULT_CM,
    sampling: str = "auto",
    enum_cap: int = DEFAULT_ENUM_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> SizeEstimate:
    """Estimate |S| within +- xi 2^n, w.p. >= 1 - delta.

    Sets zeta = xi / (2(n+1)) and epsilon = zeta / (1+zeta), estimates alpha
    of every depth-pruning within (1 +- epsilon) with failure budget
    delta/(n+1) each (level i on substream i of `rng`), and telescopes:
    size = 1/alpha_n - sum_{k<n} 1/alpha_k.
    """
    if not 0 < xi <= 1:
        raise OutOfRangeError("xi must lie in (0, 1]")
    if not 0 < delta < 1:
        raise OutOfRangeError("delta must lie in (0, 1)")
    n = tree.level_budget
    zeta = xi / (2 * (n + 1))
    eps = zeta / (1 + zeta)
    level_delta = delta / (n + 1)
    per_level: list[AlphaEstimate] = []
    for i in range(n + 1):
        est = estimate_alpha(
            prune(tree, i),
            eps,
            level_delta,
            rng.child(i),
            burn_in_mode=burn_in_mode,
            params=params,
            c_m=c_m,
            sampling=sampling,
            enum_cap=enum_cap,
            matrix_cap=matrix_cap,
        )
        if est.value <= 0:
            raise EstimationError(
                f"level {i} produced a zero alpha estimate; "
                "increase samples or relax parameters"
            )
        per_level.append(est)
    inverses = [1.0 / est.value for est in per_level]
    a_hat = inverses[-1]
    b_hat = float(sum(inverses[:-1]))
    return SizeEstimate(
        value=a_hat - b_hat,
        xi=xi,
        delta=delta,
        a_hat=a_hat,
        b_hat=b_hat,
        per_level_alphas=tuple(per_level),
        chain_steps_total=sum(e.chain_steps_total for e in per_level),
        samples_total=sum(e.batches * e.samples_per_batch for e in per_level),
    )


def estimate_probability(
    tree: SuccinctTree,
    xi: float,
    delta: float,
    rng: RandomStream,
    **kwargs,
) -> ProbabilityEstimate:
    """Estimate p = |S| / 2^n within +- xi, w.p. >= 1 - delta.

    p can reach 2 - 2^-n (the perfect tree has 2^(n+1) - 1 nodes), so the
    value is clamped into [0, 2].
    """
    size = estimate_size_additive(tree, xi, delta, rng, **kwargs)
    p = size.value / 2.0 ** tree.level_budget
    return ProbabilityEstimate(
        value=min(2.0, max(0.0, p)),
        xi=xi,
        delta=delta,
        size_estimate=size,
    )


def estimate_size_uniform(
    tree: SuccinctTree, xi: float, delta: float, rng: RandomStream
) -> SizeEstimate:
    """Baseline: sample the ambient perfect tree uniformly and scale the
    member fraction by 2^(n+1) - 1.

    The per-sample error budget is rescaled by 2^n / (2^(n+1) - 1) so the
    result honors the same +- xi 2^n contract as the walk-based estimator;
    the sample count then follows from the Hoeffding bound.
    """
    if not 0 < xi <= 1:
        raise OutOfRangeError("xi must lie in (0, 1]")
    if not 0 < delta < 1:
        raise OutOfRangeError("delta must lie in (0, 1)")
    n = tree.level_budget
    ambient = 2 ** (n + 1) - 1
    xi_prime = xi * 2**n / ambient
    m = math.ceil(2 * math.log(2 / delta) / xi_prime**2)
    hits = 0
    for _ in range(m):
        k = uniform_heap_index(rng, n)
        if contains(tree, addr_from_heap_index(k)):
            hits += 1
    value = hits / m * ambient
    return SizeEstimate(
        value=value,
        xi=xi,
        delta=delta,
        a_hat=value,
        b_hat=0.0,
        per_level_alphas=(),
        chain_steps_total=0,
        samples_total=m,
    )


def knuth_estimate(tree: SuccinctTree, rng: RandomStream) -> float:
    """One random root-to-dead-end descent; the product of branching factors
    along the way, summed over visited nodes: 1 + d_0 (1 + d_1 (1 + ...)).

    Unbiased for the exact node count, but the variance can be exponential
    on lopsided instances.
    """
    total = 1.0
    weight = 1.0
    node = ROOT
    while True:
        kids = children_in_tree(tree, node)
        if not kids:
            return total
        weight *= len(kids)
        total += weight
        if len(kids) == 1:
            node = kids[0]
        else:
            node = kids[int(rng.uniform() * 2)]
