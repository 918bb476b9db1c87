"""Universal radii: choosing a radius on every basic radially aligned curve.

A universal radius is determined by its values on the one-layer trees
Gamma(P), each of which is either 0 or the unique radius.  The nonzero
locus is a condition exactly when it is downward closed; otherwise a
two-layer curve witnesses that no compatible choice exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .monoid import ZERO, MonoidElement
from .partitions import SetPartition, covers_below
from .qcond import QCondition, QConditionError
from .tropical import (
    CoreKind,
    CurveError,
    TropicalCurve,
    build_test_curve,
    face_contraction,
    is_basic_radially_aligned,
    partition_type,
    project_to_generator,
    radial_structure,
)


class NotUniversalError(ValueError):
    """The assignment's nonzero locus is not downward closed.

    ``witness`` is ``(P, P_lower, curve)``: P is assigned a nonzero radius,
    P_lower is covered by P and assigned zero, and ``curve`` is the two-layer
    curve of the chain P_lower < P, on which no radius is compatible.
    """

    def __init__(self, p: SetPartition, lower: SetPartition, curve: TropicalCurve):
        super().__init__(f"{p} has a nonzero radius but {lower} below it does not")
        self.witness = (p, lower, curve)


def one_layer_tree(p: SetPartition) -> TropicalCurve:
    """The curve Gamma(P): a genus-one vertex with one edge e1 per non-singleton block."""
    if p.is_discrete:
        raise CurveError("the discrete partition has no one-layer tree")
    return build_test_curve((p,), CoreKind.smooth())


def unit_radius(p: SetPartition) -> MonoidElement:
    return radial_structure(one_layer_tree(p)).radii[0]


def alpha(assignment: Mapping[SetPartition, MonoidElement], n: int) -> QCondition:
    """Condition induced by radii on the one-layer trees.

    ``assignment`` maps each non-discrete partition P (missing ones count as
    zero) to 0 or the radius of Gamma(P).
    """
    nonzero: set[SetPartition] = set()
    for p, val in assignment.items():
        if p.n != n:
            raise ValueError(f"{p} is not a partition of {{1..{n}}}")
        if p.is_discrete:
            raise ValueError("the discrete partition has no one-layer tree")
        if val.is_zero():
            continue
        if val != unit_radius(p):
            raise ValueError(f"value {val} for {p} is neither 0 nor the radius of its one-layer tree")
        nonzero.add(p)
    try:
        return QCondition(n, frozenset(nonzero))
    except QConditionError as err:
        if err.clause != "not-downward-closed":
            raise
    # find a covering pair to report
    for p in sorted(nonzero, key=SetPartition.sort_key):
        for lower in covers_below(p):
            if lower not in nonzero:
                raise NotUniversalError(p, lower, build_test_curve((lower, p)))
    raise AssertionError("downward-closure failure without a covering witness")


def assignment_of(q: QCondition) -> dict[SetPartition, MonoidElement]:
    """Inverse of :func:`alpha`: the radius on every one-layer tree."""
    from .partitions import enumerate_partitions

    return {
        p: (unit_radius(p) if p in q else ZERO)
        for p in enumerate_partitions(q.n)
        if not p.is_discrete
    }


def beta_eval(q: QCondition, curve: TropicalCurve) -> MonoidElement:
    """Radius rho_r for the largest r with P_r in Q, or 0 if none."""
    if not is_basic_radially_aligned(curve):
        raise CurveError("radius evaluation needs a stable basic radially aligned curve")
    if curve.n != q.n:
        raise ValueError(f"curve has {curve.n} markings, condition is on {q.n}")
    radii = radial_structure(curve).radii
    chain = partition_type(curve)
    flags = [p in q for p in chain]
    r = sum(flags)
    if flags != [True] * r + [False] * (len(flags) - r):
        raise AssertionError("members of a condition along a chain must form a prefix")
    return radii[r - 1] if r else ZERO


@dataclass(frozen=True)
class CompatibilityRecord:
    generator: str
    pushed_forward: MonoidElement
    on_face: MonoidElement

    @property
    def ok(self) -> bool:
        return self.pushed_forward == self.on_face


def check_compatibility(q: QCondition, curve: TropicalCurve) -> list[CompatibilityRecord]:
    """Compare the radius on each codimension-one face with the pushforward of the radius."""
    rho = beta_eval(q, curve)
    out = []
    for g in curve.generators:
        face = face_contraction(curve, [g])
        pushed = rho.apply({g: ZERO})
        out.append(CompatibilityRecord(g, pushed, beta_eval(q, face)))
    return out


def compatible_radii(
    assignment: Mapping[SetPartition, MonoidElement], curve: TropicalCurve
) -> list[MonoidElement]:
    """Radii of ``curve`` (including 0) whose image on each one-layer projection matches ``assignment``.

    Projecting to e_i gives a curve isomorphic to Gamma(P_i) and sends rho_r
    to e_i when r >= i and to 0 otherwise.
    """
    rd = radial_structure(curve)
    if not rd.basic:
        raise CurveError("curve is not basic")
    chain = partition_type(curve)
    wanted = [not assignment.get(p, ZERO).is_zero() for p in chain]
    out = []
    for r, rho in enumerate((ZERO,) + rd.radii):
        ok = True
        for i, g in enumerate(rd.radius_generators):
            image = project_to_generator(curve, g)
            img_rho = rho.apply({h: ZERO for h in curve.generators if h != g})
            # the projected curve has radius g; rho maps to it iff r > i
            if img_rho.is_zero() == wanted[i] or radial_structure(image).radii != (MonoidElement.gen(g),):
                ok = False
                break
        if ok:
            out.append(rho)
    return out


@dataclass(frozen=True)
class UniversalRadius:
    """A universal radius, stored as the condition it induces."""

    condition: QCondition

    @property
    def n(self) -> int:
        return self.condition.n

    def __call__(self, curve: TropicalCurve) -> MonoidElement:
        return beta_eval(self.condition, curve)

    def on_one_layer_trees(self) -> dict[SetPartition, MonoidElement]:
        return assignment_of(self.condition)

    @classmethod
    def from_assignment(cls, assignment: Mapping[SetPartition, MonoidElement], n: int) -> UniversalRadius:
        return cls(alpha(assignment, n))
