"""Q-stability conditions: proper downward-closed subsets of Part(n).

A condition never contains the discrete partition; since that partition is the
maximum of Part(n), the conditions are exactly the proper order ideals, and
they correspond to the nonempty antichains of Part(n) via minimal excluded
elements.
"""

from __future__ import annotations

import itertools
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from . import kernels
from .partitions import (
    IntegerPartition,
    SetPartition,
    enumerate_partitions,
    integer_partitions,
    parse_partition,
    refines,
    shape,
)

log = logging.getLogger(__name__)

MAX_COUNT_N = 5


class QConditionError(ValueError):
    """A candidate set violates one of the two axioms.

    ``clause`` is ``"contains-discrete"`` or ``"not-downward-closed"``; for the
    latter ``witness`` is ``(P, P_lower)`` with P a member, P_lower <= P and
    P_lower missing.
    """

    def __init__(self, clause: str, message: str, witness: tuple = ()):
        super().__init__(message)
        self.clause = clause
        self.witness = witness


class PartitionPoset:
    """Part(n) with precomputed comparability bitmasks, indexed in enumeration order."""

    def __init__(self, n: int):
        self.n = n
        self.elements = enumerate_partitions(n)
        self.index = {p: i for i, p in enumerate(self.elements)}
        size = len(self.elements)
        up = [0] * size
        down = [0] * size
        for i, p in enumerate(self.elements):
            for j, q in enumerate(self.elements):
                if refines(p, q):
                    up[i] |= 1 << j
                    down[j] |= 1 << i
        self.up = up  # up[i]: all j with P_i <= P_j
        self.down = down  # down[i]: all j with P_j <= P_i
        self.full = (1 << size) - 1
        self.discrete_index = self.index[SetPartition.discrete(n)]
        self.incomparable_after = [
            ~(up[i] | down[i]) & self.full & ~((1 << (i + 1)) - 1) for i in range(size)
        ]

    def __len__(self) -> int:
        return len(self.elements)

    def mask_of(self, members: Iterable[SetPartition]) -> int:
        m = 0
        for p in members:
            m |= 1 << self.index[p]
        return m

    def members_of(self, mask: int) -> frozenset[SetPartition]:
        return frozenset(self.elements[i] for i in _bits(mask))

    def down_closure(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= self.down[i]
        return out

    def up_closure(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= self.up[i]
        return out

    def minimal(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            if self.down[i] & mask == 1 << i:
                out |= 1 << i
        return out


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@lru_cache(maxsize=None)
def poset(n: int) -> PartitionPoset:
    return PartitionPoset(n)


@dataclass(frozen=True)
class QCondition:
    n: int
    members: frozenset[SetPartition]

    def __post_init__(self) -> None:
        object.__setattr__(self, "members", frozenset(self.members))
        for p in self.members:
            if p.n != self.n:
                raise QConditionError("wrong-n", f"{p} is not a partition of {{1..{self.n}}}")
        ps = poset(self.n)
        mask = self.mask
        if mask >> ps.discrete_index & 1:
            raise QConditionError(
                "contains-discrete",
                "the discrete partition may not belong to a condition",
                (SetPartition.discrete(self.n),),
            )
        for i in _bits(mask):
            missing = ps.down[i] & ~mask
            if missing:
                j = next(_bits(missing))
                p, lower = ps.elements[i], ps.elements[j]
                raise QConditionError(
                    "not-downward-closed",
                    f"{p} is in the set but {lower} <= {p} is not",
                    (p, lower),
                )

    @cached_property
    def mask(self) -> int:
        return poset(self.n).mask_of(self.members)

    @classmethod
    def empty(cls, n: int) -> QCondition:
        return cls(n, frozenset())

    @classmethod
    def from_mask(cls, n: int, mask: int) -> QCondition:
        return cls(n, poset(n).members_of(mask))

    def __contains__(self, p: object) -> bool:
        return p in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[SetPartition]:
        return sorted(self.members, key=SetPartition.sort_key)

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.sorted_members()) + "}"

    def to_json(self) -> dict:
        return {"n": self.n, "partitions": [p.to_json() for p in self.sorted_members()]}

    @classmethod
    def from_json(cls, data: dict) -> QCondition:
        n = int(data["n"])
        return cls(n, frozenset(SetPartition.from_json(p, n) for p in data["partitions"]))


def validate(n: int, members: Iterable[SetPartition]) -> QCondition:
    """Return the condition or raise :class:`QConditionError` naming the failed axiom."""
    return QCondition(n, frozenset(members))


@dataclass(frozen=True)
class Antichain:
    n: int
    elements: frozenset[SetPartition]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", frozenset(self.elements))
        if not self.elements:
            raise ValueError("antichain must be nonempty")
        for a, b in itertools.combinations(self.elements, 2):
            if refines(a, b) or refines(b, a):
                raise ValueError(f"{a} and {b} are comparable")

    def sorted_elements(self) -> list[SetPartition]:
        return sorted(self.elements, key=SetPartition.sort_key)

    def __str__(self) -> str:
        return ";".join(str(p) for p in self.sorted_elements())


def parse_antichain(text: str, n: int | None = None) -> Antichain:
    parts = [parse_partition(tok, n) for tok in text.split(";") if tok.strip()]
    if not parts:
        raise ValueError("empty antichain text")
    return Antichain(parts[0].n, frozenset(parts))


def to_antichain(q: QCondition) -> Antichain:
    """Minimal elements of Part(n) - Q."""
    ps = poset(q.n)
    return Antichain(q.n, ps.members_of(ps.minimal(ps.full & ~q.mask)))


def from_antichain(a: Antichain) -> QCondition:
    """Complement of the upward closure of A."""
    ps = poset(a.n)
    return QCondition.from_mask(a.n, ps.full & ~ps.up_closure(ps.mask_of(a.elements)))


def _check_pair(q1: QCondition, q2: QCondition) -> None:
    if q1.n != q2.n:
        raise ValueError(f"conditions on different n ({q1.n} vs {q2.n})")


def lattice_meet(q1: QCondition, q2: QCondition) -> QCondition:
    _check_pair(q1, q2)
    return QCondition(q1.n, q1.members & q2.members)


def lattice_join(q1: QCondition, q2: QCondition) -> QCondition:
    _check_pair(q1, q2)
    return QCondition(q1.n, q1.members | q2.members)


def m_stable(n: int, m: int) -> QCondition:
    """Partitions with at most m blocks."""
    if not 0 <= m < n:
        raise ValueError(f"m must satisfy 0 <= m < n, got m={m}, n={n}")
    return QCondition(n, frozenset(p for p in enumerate_partitions(n) if len(p) <= m))


def down_closure(n: int, members: Iterable[SetPartition]) -> QCondition:
    ps = poset(n)
    return QCondition.from_mask(n, ps.down_closure(ps.mask_of(members)))


def enumerate_conditions(n: int) -> list[QCondition]:
    """All of the conditions for n, materialized (n <= 4)."""
    if n > 4:
        raise ValueError("materializing conditions is limited to n <= 4")
    ps = poset(n)
    out: list[QCondition] = []
    size = len(ps)

    def rec(avail: int, chosen: int) -> None:
        while avail:
            low = avail & -avail
            avail ^= low
            i = low.bit_length() - 1
            nxt = chosen | low
            out.append(QCondition.from_mask(n, ps.full & ~ps.up_closure(nxt)))
            rec(avail & ps.incomparable_after[i], nxt)

    rec((1 << size) - 1, 0)
    return out


def _count_shard(args: tuple[int, list[int], str | None]) -> int:
    n, firsts, backend = args
    return kernels.count_from(poset(n).incomparable_after, firsts, backend)


def count_conditions(
    n: int,
    *,
    allow_large: bool = False,
    workers: int | None = 1,
    backend: str | None = None,
    progress: Callable[[int, int, int], None] | None = None,
) -> int:
    """Number of conditions for n, i.e. of nonempty antichains of Part(n).

    The search is sharded by the least-index element of the antichain.  With
    ``workers > 1`` shards run in a process pool and are summed.
    ``progress(done, total, running_count)`` is called after each shard.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > MAX_COUNT_N and not allow_large:
        raise ValueError(f"counting for n > {MAX_COUNT_N} is refused without allow_large")
    ps = poset(n)
    size = len(ps)
    # large shards first so the pool stays busy
    shards = sorted(range(size), key=lambda i: -ps.incomparable_after[i].bit_count())
    total = 0
    if workers is None:
        workers = os.cpu_count() or 1
    if workers <= 1:
        for done, i in enumerate(shards, start=1):
            total += kernels.count_from(ps.incomparable_after, [i], backend)
            if progress:
                progress(done, size, total)
        return total
    with ProcessPoolExecutor(max_workers=workers) as pool:
        jobs = [(n, [i], backend) for i in shards]
        for done, part in enumerate(pool.map(_count_shard, jobs), start=1):
            total += part
            if progress:
                progress(done, size, total)
    return total


def count_ideals_by_splitting(n: int) -> int:
    """Independent count of proper order ideals of Part(n).

    Recursion on an element x: ideals avoiding x are ideals of S - up(x); ideals
    containing x contain down(x) and are ideals of S - down(x).  Memoized on
    the remaining element set.
    """
    ps = poset(n)
    up, down = ps.up, ps.down
    memo: dict[int, int] = {0: 1}

    def ideals(rest: int) -> int:
        hit = memo.get(rest)
        if hit is not None:
            return hit
        # split on the element that removes the most when excluded or included
        best, best_score = -1, -1
        for i in _bits(rest):
            score = min((up[i] & rest).bit_count(), (down[i] & rest).bit_count())
            if score > best_score:
                best, best_score = i, score
        val = ideals(rest & ~up[best]) + ideals(rest & ~down[best])
        memo[rest] = val
        return val

    return ideals(ps.full) - 1


# -- symmetric conditions -------------------------------------------------


@lru_cache(maxsize=None)
def integer_partition_order(n: int) -> dict[tuple[IntegerPartition, IntegerPartition], bool]:
    """``s <= t`` iff some set partition of shape s is <= some set partition of shape t."""
    shapes = integer_partitions(n)
    rel = {(s, t): False for s in shapes for t in shapes}
    parts = enumerate_partitions(n)
    for p in parts:
        for q in parts:
            if refines(p, q):
                rel[(shape(p), shape(q))] = True
    return rel


def symmetric_conditions(n: int) -> list[QCondition]:
    """Conditions fixed by the S_n action, via ideals of the integer-partition order."""
    if not 1 <= n <= 6:
        raise ValueError("symmetric conditions are supported for 1 <= n <= 6")
    shapes = integer_partitions(n)
    order = integer_partition_order(n)
    top = IntegerPartition((1,) * n)
    candidates = [s for s in shapes if s != top]
    out: list[QCondition] = []
    by_shape: dict[IntegerPartition, list[SetPartition]] = {}
    for p in enumerate_partitions(n):
        by_shape.setdefault(shape(p), []).append(p)
    for r in range(len(candidates) + 1):
        for subset in itertools.combinations(candidates, r):
            chosen = set(subset)
            if all(s in chosen for t in chosen for s in shapes if order[(s, t)]):
                members = frozenset(p for s in chosen for p in by_shape[s])
                out.append(QCondition(n, members))
    out.sort(key=lambda q: (len(q), sorted(p.sort_key() for p in q.members)))
    return out


def is_symmetric(q: QCondition) -> bool:
    from .partitions import apply_permutation

    for perm in itertools.permutations(range(1, q.n + 1)):
        if any(apply_permutation(p, perm) not in q.members for p in q.members):
            return False
    return True


def shape_image(q: QCondition) -> frozenset[IntegerPartition]:
    return frozenset(shape(p) for p in q.members)


def chains(n: int, include_empty: bool = False) -> Iterator[tuple[SetPartition, ...]]:
    """Strictly increasing chains of non-discrete partitions, in a deterministic order."""
    ps = poset(n)
    nondiscrete = [i for i in range(len(ps)) if i != ps.discrete_index]
    if include_empty:
        yield ()

    def rec(chain: list[int]) -> Iterator[tuple[SetPartition, ...]]:
        yield tuple(ps.elements[i] for i in chain)
        last = chain[-1]
        for j in nondiscrete:
            if j != last and ps.up[last] >> j & 1:
                chain.append(j)
                yield from rec(chain)
                chain.pop()

    for i in nondiscrete:
        yield from rec([i])


def is_strict_chain(chain: Sequence[SetPartition]) -> bool:
    return all(a != b and refines(a, b) for a, b in zip(chain, chain[1:])) and not any(
        p.is_discrete for p in chain
    )
