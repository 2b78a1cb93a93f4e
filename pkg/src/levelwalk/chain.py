"""The level-weighted walk: move to the parent with probability 1/2 and to
each in-tree child with probability 1/4, staying put with the remainder.

Up- and down-moves then carry equal probability at every full interior node,
which is what makes the stationary weight of a node 2^(n-depth) up to
normalization and the walk mix in time polynomial in the height. The lazy
variant halves every move and adds 1/2 to the self-loop; it is the version
with the conductance-based burn-in guarantee, so sampling defaults to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from . import engine
from .errors import BudgetExceededError, OutOfRangeError
from .rng import RandomStream, stream_draw
from .trees import (
    DEFAULT_ENUM_CAP,
    NodeAddr,
    ROOT,
    SuccinctTree,
    children_in_tree,
    contains,
    enumerate_tree,
)

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


@dataclass(frozen=True)
class LocalKernel:
    """Transition row at one node: (target, probability) with exact rationals."""

    source: NodeAddr
    moves: tuple[tuple[NodeAddr, Fraction], ...]

    def probability(self, target: NodeAddr) -> Fraction:
        for a, p in self.moves:
            if a == target:
                return p
        return Fraction(0)

    def total(self) -> Fraction:
        return sum((p for _, p in self.moves), Fraction(0))


@dataclass(frozen=True)
class ChainParams:
    """Knobs shared by the sampling operations."""

    lazy: bool = True
    burn_in_constant: float = 2.0
    tv_epsilon: float = 0.01

    def __post_init__(self):
        if self.burn_in_constant <= 0:
            raise OutOfRangeError("burn-in constant must be positive")
        if not 0 < self.tv_epsilon < 1:
            raise OutOfRangeError("tv_epsilon must lie in (0, 1)")


def local_kernel(tree: SuccinctTree, addr: NodeAddr, lazy: bool = True) -> LocalKernel:
    """Exact transition row of the walk at `addr`.

    Non-lazy: parent 1/2, each in-tree child 1/4, remainder to self.
    Lazy: all of those halved, plus 1/2 to self.
    """
    kids = children_in_tree(tree, addr)  # also validates membership
    moves: list[tuple[NodeAddr, Fraction]] = []
    total = Fraction(0)
    scale = _HALF if lazy else Fraction(1)
    if addr != ROOT:
        p = _HALF * scale
        moves.append((addr[:-1], p))
        total += p
    for c in kids:
        p = _QUARTER * scale
        moves.append((c, p))
        total += p
    moves.append((addr, 1 - total))
    return LocalKernel(addr, tuple(moves))


def step(
    tree: SuccinctTree, state: NodeAddr, rng: RandomStream, lazy: bool = True
) -> NodeAddr:
    """One transition from `state`, consuming one uniform from `rng`.

    The draw's top 53 bits are compared against the cumulative dyadic move
    thresholds (parent, child0, child1), so the move law is exact.
    """
    if not contains(tree, state):
        raise OutOfRangeError(f"state {state!r} is not in the tree")
    y = rng.bits() >> 11
    return _apply_move(tree, state, y, lazy)


def _apply_move(tree: SuccinctTree, state: NodeAddr, y: int, lazy: bool) -> NodeAddr:
    """Resolve a 53-bit draw into a move, same thresholds as the engines."""
    unit = engine.TWO53 >> (4 if lazy else 3)  # 1/16 or 1/8 of the scale
    acc = 0
    if state != ROOT:
        acc += 4 * unit  # parent: 1/2, halved when lazy
        if y < acc:
            return state[:-1]
    if len(state) < tree.level_budget:
        for c in (state + "0", state + "1"):
            if tree.member(c):
                acc += 2 * unit  # child: 1/4, halved when lazy
                if y < acc:
                    return c
    return state


def burn_in_steps(n: int, tv_epsilon: float, C: float = 2.0) -> int:
    """Steps sufficient for the lazy walk from the root to come within
    `tv_epsilon` total variation of stationarity on any height-n instance.

    ceil(C * (4(n+1))^2 * (ln(n+1) + ln(1/tv_epsilon))): the conductance of
    the walk is at least 1/(4(n+1)) and the root's stationary mass at least
    1/(n+1), so the standard conductance bound gives this burn-in up to the
    constant C.
    """
    if n < 0:
        raise OutOfRangeError("n must be nonnegative")
    if not 0 < tv_epsilon < 1:
        raise OutOfRangeError("tv_epsilon must lie in (0, 1)")
    if C <= 0:
        raise OutOfRangeError("C must be positive")
    return math.ceil(C * (4 * (n + 1)) ** 2 * (math.log(n + 1) + math.log(1 / tv_epsilon)))


def run_chain(
    tree: SuccinctTree,
    steps: int,
    rng: RandomStream,
    lazy: bool = True,
    record: Optional[Callable[[NodeAddr], None]] = None,
) -> NodeAddr:
    """Walk `steps` transitions from the root; returns the final node.

    The lazy walk is simulated by drawing the per-step hold/move coins as bit
    blocks first (positions 0..ceil(steps/64)-1 of the stream) and then one
    uniform per active move; identical in law to stepping one uniform at a
    time, and identical bit-for-bit to the vectorized engine's walkers.
    `record`, if given, is called with the state after every step.
    """
    if steps < 0:
        raise OutOfRangeError("steps must be nonnegative")
    key = rng.key
    state = ROOT
    if not lazy:
        for t in range(steps):
            y = stream_draw(key, t) >> 11
            state = _apply_move(tree, state, y, lazy=False)
            if record is not None:
                record(state)
        return state
    nblk = (steps + 63) // 64
    active = 0
    for t in range(steps):
        j, b = divmod(t, 64)
        if b == 0:
            block = stream_draw(key, j)
        if (block >> b) & 1:
            y = stream_draw(key, nblk + active) >> 11
            active += 1
            state = _apply_move(tree, state, y, lazy=False)
        if record is not None:
            record(state)
    return state


def sample_final_states(
    tree: SuccinctTree,
    m: int,
    steps: int,
    rng: RandomStream,
    lazy: bool = True,
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> list[NodeAddr]:
    """Endpoints of m independent root-started walks of `steps` steps.

    Walker w runs on substream w of `rng`. Uses the lockstep array engine
    when the tree fits the enumeration cap, else falls back to one scalar
    walk per sample; both produce the same endpoints.
    """
    if m < 1:
        raise OutOfRangeError("m must be >= 1")
    base = rng.key
    try:
        explicit = enumerate_tree(tree, enum_cap)
    except BudgetExceededError:
        return [
            run_chain(tree, steps, rng.child(w), lazy=lazy) for w in range(m)
        ]
    itree = engine.index_tree(explicit)
    keys = engine.walker_keys(base, m)
    finals = engine.run_walkers(itree, lazy, steps, keys)
    return [itree.addresses[i] for i in finals]


def sample_stationary(
    tree: SuccinctTree,
    m: int,
    tv_epsilon: float,
    rng: RandomStream,
    params: ChainParams = ChainParams(),
    enum_cap: int = DEFAULT_ENUM_CAP,
) -> list[NodeAddr]:
    """m draws, each within `tv_epsilon` total variation of the stationary law.

    Independent restarts from the root, each run for the conductance-bound
    burn-in; restart w consumes substream w of `rng`, so `sample_stationary`
    with m=1 equals `run_chain` on `rng.child(0)`.
    """
    steps = burn_in_steps(tree.level_budget, tv_epsilon, params.burn_in_constant)
    return sample_final_states(
        tree, m, steps, rng, lazy=params.lazy, enum_cap=enum_cap
    )
