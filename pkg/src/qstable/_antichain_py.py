"""Pure-Python twin of the compiled antichain counter (same search, same result)."""

from __future__ import annotations

import sys
from typing import Iterable, Sequence

MAX_ELEMENTS = None


def _count(avail: int, after: Sequence[int]) -> int:
    total = 1
    while avail:
        low = avail & -avail
        avail ^= low
        total += _count(avail & after[low.bit_length() - 1], after)
    return total


def count_from(incomparable_after: Sequence[int], firsts: Iterable[int]) -> int:
    """Number of antichains whose least-index element lies in ``firsts``."""
    after = list(incomparable_after)
    limit = sys.getrecursionlimit()
    if len(after) + 50 > limit:
        sys.setrecursionlimit(len(after) + 100)
    total = 0
    for i in firsts:
        if not 0 <= i < len(after):
            raise IndexError(i)
        total += _count(after[i], after)
    return total
