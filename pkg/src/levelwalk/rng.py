"""Deterministic, splittable random streams built on the splitmix64 mixer.

Every random decision in the package flows from a ``RandomStream``: a 64-bit
key plus a draw counter. Draw ``i`` of a stream is ``mix64(key + (i+1)*GOLDEN)``
(the splitmix64 sequence), so draws are random-access: a vectorized consumer
and a one-at-a-time consumer of the same stream see identical values.

Substreams are derived from (key, index) only, never from the parent's draw
position, so results cannot depend on scheduling or evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15  # splitmix64 increment
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TREE_SALT = 0x8BADF00D5EEDC0DE  # separates tree PRF keys from walker streams

U64 = np.uint64
_INV53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def mix64_array(z: np.ndarray) -> np.ndarray:
    """Vectorized mix64 over a uint64 array."""
    z = (z ^ (z >> U64(30))) * U64(_M1)
    z = (z ^ (z >> U64(27))) * U64(_M2)
    return z ^ (z >> U64(31))


def derive_key(key: int, index: int) -> int:
    """Child key for substream `index`; pure in (key, index)."""
    if index < 0:
        raise ValueError("substream index must be nonnegative")
    return mix64(key ^ mix64((GOLDEN + index) & MASK64))


def stream_draw(key: int, position: int) -> int:
    """Draw `position` (0-based) of the counter stream under `key`."""
    return mix64((key + GOLDEN * (position + 1)) & MASK64)


def stream_uniform(key: int, position: int) -> float:
    """Draw `position` as a float in [0, 1) with 53 random bits."""
    return (stream_draw(key, position) >> 11) * _INV53


def stream_block(key: int, start: int, count: int) -> np.ndarray:
    """uint64 draws at positions start..start+count-1, vectorized."""
    pos = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    return mix64_array(U64(key & MASK64) + U64(GOLDEN) * pos)


@dataclass
class RandomStream:
    """A named, reproducible stream of uniforms.

    ``master_seed`` and the ``stream_id`` path fully determine every draw.
    ``child(i)`` derives an independent substream; drawing from the parent
    never affects any child.
    """

    master_seed: int
    stream_id: tuple[int, ...] = ()
    _pos: int = field(default=0, repr=False, compare=False)

    @property
    def key(self) -> int:
        k = mix64(self.master_seed & MASK64)
        for i in self.stream_id:
            k = derive_key(k, i)
        return k

    def child(self, index: int) -> "RandomStream":
        return RandomStream(self.master_seed, self.stream_id + (index,))

    def uniform(self) -> float:
        u = stream_uniform(self.key, self._pos)
        self._pos += 1
        return u

    def bits(self) -> int:
        z = stream_draw(self.key, self._pos)
        self._pos += 1
        return z

    def uniform_block(self, count: int) -> np.ndarray:
        blk = stream_block(self.key, self._pos, count)
        self._pos += count
        return (blk >> U64(11)).astype(np.float64) * _INV53

    def numpy_generator(self) -> np.random.Generator:
        """numpy Generator keyed by this stream (for bulk discrete sampling)."""
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence(self.key)))


def tree_prf_root(seed: int) -> int:
    """Root key of the per-tree PRF used by hash-random instances."""
    return mix64((seed ^ _TREE_SALT) & MASK64)


def tree_prf_child(parent_key: int, bit: int) -> int:
    """Key of a child node given its parent's key and the branch bit."""
    return mix64(parent_key ^ mix64((GOLDEN * (bit + 1)) & MASK64))
