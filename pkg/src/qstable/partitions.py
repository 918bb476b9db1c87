"""Set partitions of {1..n} ordered by refinement.

Convention: ``P1 <= P2`` (``refines(P1, P2)``) when P2 refines P1, so the
one-block partition is the minimum and the discrete partition the maximum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_ENUMERATION_N = 10


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class SetPartition:
    """A partition of {1..n} in canonical form.

    Blocks are sorted internally and ordered by their minimum element, so
    dataclass equality and hashing coincide with equality of partitions.
    """

    n: int
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise PartitionError(f"ground set size must be positive, got {self.n}")
        seen: set[int] = set()
        for block in self.blocks:
            if not block:
                raise PartitionError("empty block")
            for a in block:
                if a in seen:
                    raise PartitionError(f"element {a} appears twice")
                seen.add(a)
        if seen != set(range(1, self.n + 1)):
            raise PartitionError(f"blocks do not cover {{1..{self.n}}}: {sorted(seen)}")
        canon = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        if canon != self.blocks:
            object.__setattr__(self, "blocks", canon)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> SetPartition:
        bl = tuple(tuple(b) for b in blocks)
        if n is None:
            n = sum(len(b) for b in bl)
        return cls(n, bl)

    @classmethod
    def from_rgs(cls, rgs: Sequence[int]) -> SetPartition:
        groups: dict[int, list[int]] = {}
        for i, label in enumerate(rgs, start=1):
            groups.setdefault(label, []).append(i)
        return cls(len(rgs), tuple(tuple(g) for g in groups.values()))

    @classmethod
    def one_block(cls, n: int) -> SetPartition:
        return cls(n, (tuple(range(1, n + 1)),))

    @classmethod
    def discrete(cls, n: int) -> SetPartition:
        return cls(n, tuple((i,) for i in range(1, n + 1)))

    @cached_property
    def rgs(self) -> tuple[int, ...]:
        """Restricted growth string: block index of each element (dense form)."""
        out = [0] * self.n
        for idx, block in enumerate(self.blocks):
            for a in block:
                out[a - 1] = idx
        return tuple(out)

    def block_of(self, a: int) -> tuple[int, ...]:
        return self.blocks[self.rgs[a - 1]]

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def is_discrete(self) -> bool:
        return len(self.blocks) == self.n

    def sort_key(self) -> tuple[int, ...]:
        return self.rgs

    def __str__(self) -> str:
        return "".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)

    def compact(self) -> str:
        """Bar-separated form used in chains, e.g. ``12|3``."""
        sep = "" if self.n < 10 else ","
        return "|".join(sep.join(map(str, b)) for b in self.blocks)

    def to_json(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]], n: int | None = None) -> SetPartition:
        return cls.of(data, n)


_BRACE_RE = re.compile(r"\s*\{([^{}]*)\}\s*")


def parse_partition(text: str, n: int | None = None) -> SetPartition:
    """Parse ``{1,2}{3}`` or the compact ``12|3`` / ``1,2|3`` forms."""
    s = text.strip()
    if not s:
        raise PartitionError("empty partition text")
    if s.startswith("{"):
        blocks = []
        pos = 0
        while pos < len(s):
            m = _BRACE_RE.match(s, pos)
            if not m:
                raise PartitionError(f"unexpected character at column {pos + 1}: {s[pos:]!r}")
            inner = m.group(1).strip()
            blocks.append([_int(tok, text) for tok in inner.split(",")] if inner else [])
            pos = m.end()
    else:
        blocks = []
        for raw in s.split("|"):
            raw = raw.strip()
            if not raw:
                raise PartitionError(f"empty block in {text!r}")
            if "," in raw:
                blocks.append([_int(tok, text) for tok in raw.split(",")])
            else:
                blocks.append([_int(ch, text) for ch in raw])
    return SetPartition.of(blocks, n)


def _int(tok: str, text: str) -> int:
    tok = tok.strip()
    if not tok.isdigit():
        raise PartitionError(f"bad element {tok!r} in {text!r}")
    return int(tok)


def _rgs_iter(n: int) -> Iterator[tuple[int, ...]]:
    rgs = [0] * n

    def rec(i: int, top: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(rgs)
            return
        for label in range(top + 2):
            rgs[i] = label
            yield from rec(i + 1, max(top, label))

    if n == 0:
        return
    yield from rec(1, 0)


@lru_cache(maxsize=None)
def enumerate_partitions(n: int) -> tuple[SetPartition, ...]:
    """All partitions of {1..n} in lexicographic restricted-growth-string order."""
    if not 1 <= n <= MAX_ENUMERATION_N:
        raise PartitionError(f"n must lie in [1, {MAX_ENUMERATION_N}], got {n}")
    return tuple(SetPartition.from_rgs(r) for r in _rgs_iter(n))


def _check_same_n(p1: SetPartition, p2: SetPartition) -> None:
    if p1.n != p2.n:
        raise PartitionError(f"partitions of different ground sets ({p1.n} vs {p2.n})")


def refines(p1: SetPartition, p2: SetPartition) -> bool:
    """True iff ``p1 <= p2``: every block of p2 lies inside a block of p1."""
    _check_same_n(p1, p2)
    r1 = p1.rgs
    return all(len({r1[a - 1] for a in block}) == 1 for block in p2.blocks)


def strictly_refines(p1: SetPartition, p2: SetPartition) -> bool:
    return p1 != p2 and refines(p1, p2)


def comparable(p1: SetPartition, p2: SetPartition) -> bool:
    return refines(p1, p2) or refines(p2, p1)


def covers_below(p: SetPartition) -> list[SetPartition]:
    """Partitions obtained from p by merging exactly two blocks."""
    out = []
    for i, j in combinations(range(len(p.blocks)), 2):
        merged = p.blocks[i] + p.blocks[j]
        rest = [b for k, b in enumerate(p.blocks) if k not in (i, j)]
        out.append(SetPartition(p.n, tuple(rest) + (merged,)))
    return out


def covers_above(p: SetPartition) -> list[SetPartition]:
    """Partitions obtained from p by splitting one block in two."""
    out = []
    for i, block in enumerate(p.blocks):
        if len(block) < 2:
            continue
        head, tail = block[0], block[1:]
        rest = [b for k, b in enumerate(p.blocks) if k != i]
        # the part containing the block minimum is `head` plus a proper subset of `tail`
        for r in range(len(tail)):
            for sub in combinations(tail, r):
                left = (head,) + sub
                right = tuple(x for x in tail if x not in sub)
                out.append(SetPartition(p.n, tuple(rest) + (left, right)))
    return out


def join_blocks(p1: SetPartition, p2: SetPartition) -> SetPartition:
    """Coarsest common coarsening (the meet in the refinement order used here)."""
    _check_same_n(p1, p2)
    parent = list(range(p1.n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in (p1, p2):
        for b in p.blocks:
            for a in b[1:]:
                parent[find(a)] = find(b[0])
    groups: dict[int, list[int]] = {}
    for a in range(1, p1.n + 1):
        groups.setdefault(find(a), []).append(a)
    return SetPartition(p1.n, tuple(tuple(g) for g in groups.values()))


@dataclass(frozen=True, order=True)
class IntegerPartition:
    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(p <= 0 for p in self.parts):
            raise PartitionError(f"parts must be positive: {self.parts}")
        if list(self.parts) != sorted(self.parts, reverse=True):
            raise PartitionError(f"parts must be nonincreasing: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def shape(p: SetPartition) -> IntegerPartition:
    return IntegerPartition(tuple(sorted((len(b) for b in p.blocks), reverse=True)))


def orbit_representative(p: SetPartition) -> SetPartition:
    """Canonical member of the S_n-orbit of p: consecutive runs of sizes shape(p)."""
    blocks = []
    start = 1
    for size in shape(p).parts:
        blocks.append(tuple(range(start, start + size)))
        start += size
    return SetPartition(p.n, tuple(blocks))


def apply_permutation(p: SetPartition, perm: Sequence[int]) -> SetPartition:
    """Image of p under the permutation ``a -> perm[a-1]``."""
    return SetPartition(p.n, tuple(tuple(perm[a - 1] for a in b) for b in p.blocks))


@lru_cache(maxsize=None)
def integer_partitions(n: int) -> tuple[IntegerPartition, ...]:
    """Integer partitions of n, in reverse-lexicographic order (n first)."""
    out: list[tuple[int, ...]] = []

    def rec(remaining: int, cap: int, acc: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        for part in range(min(cap, remaining), 0, -1):
            acc.append(part)
            rec(remaining - part, part, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(IntegerPartition(p) for p in out)
