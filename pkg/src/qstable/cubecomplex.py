"""The cube complex of interpolating stability conditions.

A point assigns a rational c_P in [0, 1] to every partition P, with
c = 0 at the discrete partition and c_{P1} = 1 whenever P1 < P2 and
c_{P2} > 0.  Vertices (all coordinates 0 or 1) are exactly the conditions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Iterator, Mapping

from .partitions import SetPartition, enumerate_partitions, refines
from .qcond import QCondition, enumerate_conditions, to_antichain

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class CubePointError(ValueError):
    """``clause`` is ``"range"``, ``"discrete"`` or ``"lower-not-one"``.

    For ``"lower-not-one"`` the witness is ``(P1, P2)`` with P1 < P2,
    c_{P2} > 0 and c_{P1} != 1.
    """

    def __init__(self, clause: str, message: str, witness: tuple = ()):
        super().__init__(message)
        self.clause = clause
        self.witness = witness


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("coordinates must be exact; pass a Fraction, int or 'p/q' string")
    return Fraction(value)  # type: ignore[arg-type]


@dataclass(frozen=True)
class CubePoint:
    n: int
    coords: tuple[tuple[SetPartition, Fraction], ...]

    def __post_init__(self) -> None:
        full = {p: ZERO for p in enumerate_partitions(self.n)}
        for p, v in self.coords:
            if p not in full:
                raise CubePointError("range", f"{p} is not a partition of {{1..{self.n}}}")
            full[p] = _as_fraction(v)
        object.__setattr__(self, "coords", tuple(full.items()))
        for p, v in self.coords:
            if not ZERO <= v <= ONE:
                raise CubePointError("range", f"coordinate at {p} is {v}, outside [0, 1]", (p,))
        disc = SetPartition.discrete(self.n)
        if self[disc] != 0:
            raise CubePointError("discrete", "the discrete partition must have coordinate 0", (disc,))
        parts = enumerate_partitions(self.n)
        for p2 in parts:
            if self[p2] == 0:
                continue
            for p1 in parts:
                if p1 != p2 and refines(p1, p2) and self[p1] != 1:
                    raise CubePointError(
                        "lower-not-one",
                        f"{p1} < {p2} and c at {p2} is {self[p2]}, so c at {p1} must be 1 (it is {self[p1]})",
                        (p1, p2),
                    )

    @cached_property
    def _values(self) -> dict[SetPartition, Fraction]:
        return dict(self.coords)

    def __getitem__(self, p: SetPartition) -> Fraction:
        return self._values[p]

    def as_dict(self) -> dict[SetPartition, Fraction]:
        return dict(self._values)

    def is_vertex(self) -> bool:
        return all(v in (ZERO, ONE) for _, v in self.coords)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "coords": [
                {"partition": p.to_json(), "value": str(v)}
                for p, v in sorted(self.coords, key=lambda pv: pv[0].sort_key())
                if v != 0
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> CubePoint:
        n = int(data["n"])
        coords = []
        for entry in data.get("coords", []):
            coords.append((SetPartition.from_json(entry["partition"], n), Fraction(str(entry["value"]))))
        return validate_point(n, dict(coords))


def validate_point(n: int, coords: Mapping[SetPartition, object]) -> CubePoint:
    """A valid point, or :class:`CubePointError` naming the first violated clause."""
    return CubePoint(n, tuple((p, _as_fraction(v)) for p, v in coords.items()))


def q_sing(c: CubePoint) -> frozenset[SetPartition]:
    return frozenset(p for p, v in c.coords if v > 0)


def q_curve(c: CubePoint) -> frozenset[SetPartition]:
    return frozenset(p for p, v in c.coords if v < 1)


def vertex_to_Q(c: CubePoint) -> QCondition:
    if not c.is_vertex():
        raise ValueError("point is not a vertex of the cube complex")
    return QCondition(c.n, frozenset(p for p, v in c.coords if v == 1))


def Q_to_vertex(q: QCondition) -> CubePoint:
    return CubePoint(q.n, tuple((p, ONE) for p in q.members))


@dataclass(frozen=True)
class Cell:
    """Open cell: coordinates in ``ones`` equal 1, those in ``free`` lie in (0, 1), the rest are 0."""

    n: int
    ones: frozenset[SetPartition]
    free: frozenset[SetPartition]

    @property
    def dimension(self) -> int:
        return len(self.free)

    def fixed(self) -> dict[SetPartition, int]:
        return {p: (1 if p in self.ones else 0) for p in enumerate_partitions(self.n) if p not in self.free}

    def contains(self, c: CubePoint) -> bool:
        return c.n == self.n and cell_of(c) == self

    def vertices(self) -> list[CubePoint]:
        out = []
        free = sorted(self.free, key=SetPartition.sort_key)
        for bits in itertools.product((0, 1), repeat=len(free)):
            ones = set(self.ones) | {p for p, b in zip(free, bits) if b}
            out.append(CubePoint(self.n, tuple((p, ONE) for p in ones)))
        return out

    def __str__(self) -> str:
        ones = ",".join(str(p) for p in sorted(self.ones, key=SetPartition.sort_key))
        free = ",".join(str(p) for p in sorted(self.free, key=SetPartition.sort_key))
        return f"dim {self.dimension}: ones=[{ones}] free=[{free}]"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "dimension": self.dimension,
            "ones": [p.to_json() for p in sorted(self.ones, key=SetPartition.sort_key)],
            "free": [p.to_json() for p in sorted(self.free, key=SetPartition.sort_key)],
        }


def cell_of(c: CubePoint) -> Cell:
    return Cell(
        c.n,
        frozenset(p for p, v in c.coords if v == 1),
        frozenset(p for p, v in c.coords if 0 < v < 1),
    )


def enumerate_cells(n: int) -> list[Cell]:
    """All open cells, by vertex condition Q and a subset of its minimal excluded partitions.

    A cell's ones-set is downward closed and each free partition has all its
    strictly lower partitions in the ones-set, so the free set is a subset of
    the antichain of Q without the discrete partition.
    """
    out = []
    for q in enumerate_conditions(n):
        candidates = sorted(
            (p for p in to_antichain(q).elements if not p.is_discrete), key=SetPartition.sort_key
        )
        for r in range(len(candidates) + 1):
            for free in itertools.combinations(candidates, r):
                out.append(Cell(n, q.members, frozenset(free)))
    out.sort(key=lambda c: (c.dimension, len(c.ones), sorted(p.sort_key() for p in c.ones),
                            sorted(p.sort_key() for p in c.free)))
    return out


def face_relation(a: Cell, b: Cell) -> bool:
    """True iff ``a`` lies in the closure of ``b``."""
    if a.n != b.n or not a.free <= b.free:
        return False
    # coordinates fixed in b keep their value in a
    fixed_b = b.fixed()
    fixed_a_ones = a.ones
    return all((p in fixed_a_ones) == (v == 1) for p, v in fixed_b.items())


def face_contains(c: CubePoint, d: CubePoint) -> bool:
    """True iff d agrees with c wherever c is 0 or 1, so d lies in the closed cell of c."""
    if c.n != d.n:
        return False
    dd = d.as_dict()
    return all(dd[p] == v for p, v in c.coords if v in (ZERO, ONE))


def sample_point(cell: Cell, value: Fraction = HALF) -> CubePoint:
    if not 0 < value < 1:
        raise ValueError("sample value must lie strictly between 0 and 1")
    coords = [(p, ONE) for p in cell.ones] + [(p, value) for p in cell.free]
    return CubePoint(cell.n, tuple(coords))


def iter_vertices(n: int) -> Iterator[CubePoint]:
    for q in enumerate_conditions(n):
        yield Q_to_vertex(q)
