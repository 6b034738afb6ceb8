"""Circular words: minimal periods and direction-free canonical rotations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, TypeVar

T = TypeVar("T")


def least_rotation(word: Sequence[T]) -> int:
    """Start index of the lexicographically least rotation (two-pointer, linear time)."""
    n = len(word)
    i, j, k = 0, 1, 0
    while i < n and j < n and k < n:
        a = word[(i + k) % n]
        b = word[(j + k) % n]
        if a == b:
            k += 1
            continue
        if a > b:
            i += k + 1
        else:
            j += k + 1
        if i == j:
            j += 1
        k = 0
    return min(i, j)


def rotate(word: Sequence[T], start: int) -> tuple[T, ...]:
    return tuple(word[start:]) + tuple(word[:start])


def canonical_rotation(word: Sequence[T]) -> tuple[tuple[T, ...], int, bool]:
    """Least rotation over both reading directions.

    Returns ``(representative, start, reversed)``; with ``reversed`` the
    representative reads ``word`` backwards starting at index ``start``.
    """
    if not word:
        return (), 0, False
    fwd = rotate(word, least_rotation(word))
    back = list(reversed(word))
    rb = least_rotation(back)
    bwd = rotate(back, rb)
    if bwd < fwd:
        return bwd, len(word) - 1 - rb, True
    return fwd, least_rotation(word), False


def minimal_period(word: Sequence[T]) -> int:
    """Length of the shortest u with word = u^k, via the prefix function."""
    n = len(word)
    if n == 0:
        raise ValueError("empty word")
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k and word[i] != word[k]:
            k = fail[k - 1]
        if word[i] == word[k]:
            k += 1
        fail[i] = k
    p = n - fail[-1]
    return p if n % p == 0 else n


@dataclass(frozen=True)
class CircularWord:
    letters: tuple

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def period(self) -> int:
        return minimal_period(self.letters)

    def canonical(self) -> tuple:
        return canonical_rotation(self.letters)[0]

    def period_word(self) -> tuple:
        """Canonical representative of the minimal period."""
        return canonical_rotation(self.letters[:self.period])[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CircularWord):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())
