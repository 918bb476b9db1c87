"""Contracting a radially aligned tropical curve at a radius.

Everything at radial distance below rho collapses to one elliptic point
whose branches are the components of the locus at distance >= rho.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .curvetype import (
    ELLIPTIC,
    NODE,
    SINGLETONS,
    CombinatorialType,
    Component,
    Singularity,
    is_Q_stable,
)
from .monoid import ZERO, MonoidElement
from .partitions import SetPartition
from .qcond import QCondition
from .tropical import (
    CoreKind,
    CurveError,
    TropicalCurve,
    build_test_curve,
    radial_distance,
    radial_structure,
)
from .uradius import beta_eval


class TheoremViolation(AssertionError):
    """A combinatorial statement that must always hold failed on concrete data."""

    def __init__(self, message: str, data: object = None):
        super().__init__(message)
        self.data = data


@dataclass(frozen=True)
class Contraction:
    curve_type: CombinatorialType
    node_lengths: dict[int, MonoidElement]  # node id -> length of the surviving segment
    component_of_vertex: dict[int, int]


def _contract(curve: TropicalCurve, rho: MonoidElement) -> Contraction:
    rd = radial_structure(curve)
    if not rho.is_zero() and rho not in rd.radii:
        raise CurveError(f"{rho} is not a radius of the curve (radii: {', '.join(map(str, rd.radii))})")
    lam = radial_distance(curve)
    markings: dict[int, set[int]] = {v: set() for v in lam}
    comps: dict[int, int] = {}  # id -> genus
    sings: list[Singularity] = []
    incidence: list[tuple[int, int, int]] = []
    lengths: dict[int, MonoidElement] = {}

    if rho.is_zero():
        for v in curve.vertices:
            comps[v.id] = v.genus
        for leg in curve.legs:
            markings[leg.root].add(leg.marking)
        for i, e in enumerate(curve.edges):
            sid = len(sings)
            sings.append(Singularity(sid, NODE))
            incidence.append((e.ends[0], sid, 1))
            incidence.append((e.ends[1], sid, 1))
            lengths[sid] = e.length
        vmap = {v.id: v.id for v in curve.vertices}
    else:
        kept = {v for v, x in lam.items() if rho <= x}
        for v in curve.vertices:
            if v.id in kept:
                comps[v.id] = v.genus
        next_id = max(lam) + 1
        q_branches: list[int] = []
        synthetic_nodes: list[tuple[int, int, MonoidElement]] = []
        for e in curve.edges:
            a, b = e.ends
            if a in kept and b in kept:
                sid = len(sings)
                sings.append(Singularity(sid, NODE))
                incidence.append((a, sid, 1))
                incidence.append((b, sid, 1))
                lengths[sid] = e.length
            elif a in kept or b in kept:
                top = a if a in kept else b
                if lam[top] == rho:
                    q_branches.append(top)
                else:
                    # subdivide the edge at distance rho
                    s = next_id
                    next_id += 1
                    comps[s] = 0
                    markings[s] = set()
                    q_branches.append(s)
                    synthetic_nodes.append((s, top, lam[top] - rho))
        for leg in curve.legs:
            if leg.root in kept:
                markings[leg.root].add(leg.marking)
            else:
                s = next_id
                next_id += 1
                comps[s] = 0
                markings[s] = {leg.marking}
                q_branches.append(s)
        for s, top, length in synthetic_nodes:
            sid = len(sings)
            sings.append(Singularity(sid, NODE))
            incidence.append((s, sid, 1))
            incidence.append((top, sid, 1))
            lengths[sid] = length
        qid = len(sings)
        sings.append(Singularity(qid, ELLIPTIC))
        for c in q_branches:
            incidence.append((c, qid, 1))
        vmap = {v: (v if v in kept else -1) for v in lam}
    t = CombinatorialType(
        curve.n,
        tuple(Component(c, g, frozenset(markings.get(c, ()))) for c, g in sorted(comps.items())),
        tuple(sings),
        tuple(incidence),
    )
    return Contraction(t, lengths, vmap)


def contract_at_radius(curve: TropicalCurve, rho: MonoidElement) -> CombinatorialType:
    """Combinatorial type of the curve obtained by contracting the locus at distance below rho.

    rho = 0 gives the nodal type of the curve itself.
    """
    return _contract(curve, rho).curve_type


def contract_at_radius_with_lengths(curve: TropicalCurve, rho: MonoidElement) -> Contraction:
    """As :func:`contract_at_radius`, also returning the length of each node's edge segment."""
    return _contract(curve, rho)


def contract_for_Q(curve: TropicalCurve, q: QCondition, z_markings: str = SINGLETONS) -> CombinatorialType:
    """Contract at the radius the condition selects; the result is checked to be Q-stable."""
    rho = beta_eval(q, curve)
    t = contract_at_radius(curve, rho)
    verdict = is_Q_stable(t, q, z_markings)
    if not verdict:
        raise TheoremViolation(
            f"contraction at radius {rho} is not stable for {q}: {verdict.reason}", (curve, q, t)
        )
    return t


def contraction_family(chain: Sequence[SetPartition], core_kind: CoreKind = CoreKind(), n: int | None = None) -> list[CombinatorialType]:
    """Types of the test curve of ``chain`` contracted at 0 and at each radius in turn."""
    curve = build_test_curve(chain, core_kind, n)
    radii = (ZERO,) + radial_structure(curve).radii
    return [contract_at_radius(curve, r) for r in radii]


def stable_indices(
    chain: Sequence[SetPartition],
    q: QCondition,
    core_kind: CoreKind = CoreKind(),
    z_markings: str = SINGLETONS,
) -> list[int]:
    family = contraction_family(chain, core_kind, q.n)
    return [i for i, t in enumerate(family) if is_Q_stable(t, q, z_markings)]


def verify_exactly_one(
    chain: Sequence[SetPartition],
    q: QCondition,
    core_kind: CoreKind = CoreKind(),
    z_markings: str = SINGLETONS,
) -> int:
    """Index of the unique Q-stable member of the contraction family; raises if not unique."""
    hits = stable_indices(chain, q, core_kind, z_markings)
    if len(hits) != 1:
        chain_text = " < ".join(p.compact() for p in chain) or "(empty chain)"
        raise TheoremViolation(
            f"expected exactly one stable contraction for {chain_text} and {q}, found indices {hits}",
            (tuple(chain), q, hits),
        )
    return hits[0]
