"""Succinct binary-tree instances and exact enumeration.

A node address is a string over '0'/'1': the root-to-node path ('0' = left).
The empty string is the root; depth equals the string length. An instance is
a level budget ``n`` plus a membership predicate defined for all addresses of
depth <= n; the predicate must contain the root and be prefix-closed (every
member's parent is a member).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .errors import BudgetExceededError, NotInTreeError, OutOfRangeError
from .rng import RandomStream, tree_prf_child, tree_prf_root

NodeAddr = str

ROOT: NodeAddr = ""

DEFAULT_ENUM_CAP = 10**6


def depth_of(addr: NodeAddr) -> int:
    return len(addr)

def parent_of(addr: NodeAddr) -> Optional[NodeAddr]:
    """Drop the last path bit; None for the root."""
    if addr == ROOT:
        return None
    return addr[:-1]


def child_of(addr: NodeAddr, bit: int) -> NodeAddr:
    if bit not in (0, 1):
        raise ValueError(f"branch bit must be 0 or 1, got {bit}")
    return addr + ("1" if bit else "0")


def heap_index(addr: NodeAddr) -> int:
    """1-based heap index: root is 1, child b of v is 2v+b."""
    return int("1" + addr, 2)


def addr_from_heap_index(k: int) -> NodeAddr:
    if k < 1:
        raise OutOfRangeError(f"heap index must be >= 1, got {k}")
    return bin(k)[3:]


@dataclass(frozen=True)
class SuccinctTree:
    """A problem instance: level budget plus a membership predicate.

    ``member`` may only be queried at depth <= level_budget; ``contains``
    enforces this. Instances are immutable and safe to query concurrently.
    """

    level_budget: int
    member: Callable[[NodeAddr], bool]
    label: str = ""

    def __post_init__(self):
        if self.level_budget < 0:
            raise OutOfRangeError("level budget must be nonnegative")


@dataclass(frozen=True)
class ExplicitTree:
    """A materialized instance: every node address, in breadth-first order."""

    level_budget: int
    nodes: tuple[NodeAddr, ...]
    index: dict[NodeAddr, int] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("an explicit tree contains at least the root")
        if not self.index:
            object.__setattr__(
                self, "index", {a: i for i, a in enumerate(self.nodes)}
            )

    @property
    def size(self) -> int:
        return len(self.nodes)

    def level_counts(self) -> list[int]:
        counts = [0] * (self.level_budget + 1)
        for a in self.nodes:
            counts[len(a)] += 1
        return counts


def contains(tree: SuccinctTree, addr: NodeAddr) -> bool:
    if len(addr) > tree.level_budget:
        raise OutOfRangeError(
            f"address depth {len(addr)} exceeds level budget {tree.level_budget}"
        )
    return bool(tree.member(addr))


def children_in_tree(tree: SuccinctTree, addr: NodeAddr) -> list[NodeAddr]:
    """In-tree children of an in-tree node (0, 1 or 2 addresses)."""
    if not contains(tree, addr):
        raise NotInTreeError(f"address {addr!r} is not in the tree")
    if len(addr) == tree.level_budget:
        return []
    return [c for c in (addr + "0", addr + "1") if tree.member(c)]


def prune(tree: SuccinctTree, i: int) -> SuccinctTree:
    """Restrict the instance to depth <= i, keeping the same predicate."""
    if not 0 <= i <= tree.level_budget:
        raise OutOfRangeError(
            f"prune depth {i} outside [0, {tree.level_budget}]"
        )
    return SuccinctTree(i, tree.member, f"{tree.label}|prune:{i}")


def iter_nodes(tree: SuccinctTree, cap: int) -> Iterator[NodeAddr]:
    """Breadth-first traversal of the instance; raises past `cap` nodes."""
    if cap < 1:
        raise OutOfRangeError("cap must be >= 1")
    queue: deque[NodeAddr] = deque([ROOT])
    seen = 0
    while queue:
        a = queue.popleft()
        seen += 1
        if seen > cap:
            raise BudgetExceededError(
                f"tree has more than {cap} nodes", partial_count=cap
            )
        yield a
        if len(a) < tree.level_budget:
            for c in (a + "0", a + "1"):
                if tree.member(c):
                    queue.append(c)


def exact_count(tree: SuccinctTree, cap: int = DEFAULT_ENUM_CAP) -> int:
    """|V(S)| by exhaustive traversal, visiting each node exactly once."""
    n = 0
    for _ in iter_nodes(tree, cap):
        n += 1
    return n


def enumerate_tree(tree: SuccinctTree, cap: int = DEFAULT_ENUM_CAP) -> ExplicitTree:
    nodes = tuple(iter_nodes(tree, cap))
    return ExplicitTree(tree.level_budget, nodes)


def validate_prefix_closed(
    tree: SuccinctTree, budget: int, seed: int = 0
) -> Optional[NodeAddr]:
    """Check the prefix-closure invariant.

    Exhaustive when the full address space (2^(n+1)-1 addresses) fits in
    `budget`; otherwise probes `budget` pseudo-random addresses. Returns the
    first member whose parent is not a member, or None if no violation is
    found. The sampled mode draws from a stream keyed by `seed`, so the check
    is deterministic.
    """
    if budget < 1:
        raise OutOfRangeError("budget must be >= 1")
    n = tree.level_budget
    if 2 ** (n + 1) - 1 <= budget:
        for k in range(2, 2 ** (n + 1)):  # skip the root at k=1
            a = addr_from_heap_index(k)
            if tree.member(a) and not tree.member(a[:-1]):
                return a
        return None
    rng = RandomStream(seed, stream_id=(0xC10,))
    checked = 0
    while checked < budget:
        a = addr_from_heap_index(uniform_heap_index(rng, n))
        if a and tree.member(a) and not tree.member(a[:-1]):
            return a
        checked += 1
    return None


def uniform_heap_index(rng: RandomStream, n: int) -> int:
    """Uniform heap index in [1, 2^(n+1) - 1]: n+1 random bits, rejecting 0."""
    nbits = n + 1
    nwords = (nbits + 63) // 64
    while True:
        k = 0
        for _ in range(nwords):
            k = (k << 64) | rng.bits()
        k >>= 64 * nwords - nbits
        if k:
            return k


def _memoized(pred: Callable[[NodeAddr], bool]) -> Callable[[NodeAddr], bool]:
    cache: dict[NodeAddr, bool] = {}

    def member(a: NodeAddr) -> bool:
        v = cache.get(a)
        if v is None:
            v = pred(a)
            cache[a] = v
        return v

    return member


def full_tree(n: int) -> SuccinctTree:
    """Every address up to depth n."""
    return SuccinctTree(n, lambda a: True, f"full:{n}")


def path_tree(n: int) -> SuccinctTree:
    """The leftmost root-to-leaf path (all-zero prefixes)."""
    return SuccinctTree(n, lambda a: "1" not in a, f"path:{n}")


def comb_tree(n: int) -> SuccinctTree:
    """Leftmost path plus the right sibling hanging off each internal path node."""

    def member(a: NodeAddr) -> bool:
        if "1" not in a:
            return True
        return a[-1] == "1" and "1" not in a[:-1]

    return SuccinctTree(n, member, f"comb:{n}")


def root_only_tree(n: int) -> SuccinctTree:
    """Just the root, declared at budget n."""
    return SuccinctTree(n, lambda a: a == ROOT, f"root-only:{n}")


def hash_random_tree(seed: int, n: int, q: float) -> SuccinctTree:
    """Reproducible random instance keyed by (seed, n, q).

    Each non-root address gets a pseudo-random value in [0,1) from a chained
    splitmix64 PRF; an address is a member iff every non-root prefix scores
    below q. Membership is deterministic in (seed, n, q) and portable: the
    PRF is pinned by test vectors.
    """
    if not 0.0 <= q <= 1.0:
        raise OutOfRangeError(f"survival probability q={q} outside [0, 1]")
    threshold = int(q * 2.0**64)  # q=1 -> 2^64: every key passes
    keys: dict[NodeAddr, int] = {ROOT: tree_prf_root(seed)}

    def node_key(a: NodeAddr) -> int:
        k = keys.get(a)
        if k is None:
            k = tree_prf_child(node_key(a[:-1]), int(a[-1]))
            keys[a] = k
        return k

    def survives(a: NodeAddr) -> bool:
        return node_key(a) < threshold

    def member(a: NodeAddr) -> bool:
        if a == ROOT:
            return True
        return member(a[:-1]) and survives(a)

    return SuccinctTree(n, _memoized(member), f"hash:{n}:{q:g}:{seed}")
