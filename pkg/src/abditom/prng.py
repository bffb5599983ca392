"""Deterministic pseudo-randomness for reproducible experiments.

The generator is splitmix64: a 64-bit counter advanced by the golden-ratio
increment, with a two-round xor-multiply finalizer on each output.  It is
tiny, passes standard statistical batteries, and its outputs are identical
on every platform and Python version, which random.Random does not promise
across implementations.  Shuffling is an end-to-front Fisher-Yates driven
by rejection-sampled bounded draws, so there is no modulo bias and a given
seed always yields the same permutation.

Seeds for individual games are derived, not sequential: mixing the base
seed with the player count and then the game index means game k of a sweep
gets the same cards no matter how many games follow it, and sweeps with
different player counts never share decks.
"""

from __future__ import annotations

from typing import List, MutableSequence, Sequence, TypeVar

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

T = TypeVar("T")


def _finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def scramble(x: int) -> int:
    """One splitmix64 output for counter value x."""
    return _finalize((x + _GOLDEN) & _MASK)


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK
        return _finalize(self.state)

    def randrange(self, n: int) -> int:
        """Uniform draw from [0, n) by rejection, so no modulo bias."""
        if n <= 0:
            raise ValueError("randrange needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def shuffle(self, items: MutableSequence[T]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def choice(self, items: Sequence[T]) -> T:
        return items[self.randrange(len(items))]


def derive_game_seed(base_seed: int, n_players: int, game_index: int) -> int:
    """Stable per-game seed: prefix-stable in game_index, disjoint by table size."""
    s1 = scramble((base_seed + _GOLDEN * n_players) & _MASK)
    return scramble((s1 + game_index) & _MASK)
