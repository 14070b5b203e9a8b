"""Seeded randomness with reproducible, label-derived child streams."""

from __future__ import annotations

import hashlib
import random
from typing import Hashable, Sequence, TypeVar

T = TypeVar("T")

_MASK64 = (1 << 64) - 1


def derive_seed(seed: int, label: Hashable) -> int:
    """Mix a 64-bit seed with a label into a new 64-bit seed.

    Uses blake2b over ``repr(label)`` so the result does not depend on
    ``PYTHONHASHSEED``. Labels should have a stable ``repr`` (ints, strings,
    tuples of those).
    """
    h = hashlib.blake2b(repr(label).encode(), digest_size=8,
                        key=(seed & _MASK64).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


class RandomSource:
    """A 64-bit seeded random stream.

    Thin wrapper over :class:`random.Random` (Mersenne Twister); identical
    seeds give identical draw sequences. ``child(label)`` derives an
    independent stream whose seed depends only on ``(seed, label)``, never
    on how much of the parent has been consumed.
    """

    __slots__ = ("seed", "_r")

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._r = random.Random(self.seed)

    def child(self, label: Hashable) -> "RandomSource":
        return RandomSource(derive_seed(self.seed, label))

    def random(self) -> float:
        return self._r.random()

    def randbelow(self, n: int) -> int:
        return self._r.randrange(n)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self._r.randrange(len(seq))]

    def bits64(self) -> int:
        return self._r.getrandbits(64)

    def getstate(self):
        return self._r.getstate()

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed:#x})"
