"""Exhaustive invariant sweeps for small n, shared by the CLI and the test suite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .contraction import TheoremViolation, contract_at_radius, contract_for_Q, verify_exactly_one
from .cubecomplex import (
    Q_to_vertex,
    enumerate_cells,
    face_contains,
    face_relation,
    sample_point,
    vertex_to_Q,
)
from .curvetype import (
    arithmetic_genus,
    enumerate_types,
    is_cP_stable,
    is_Q_stable,
    level_of_singularity,
)
from .monoid import ZERO
from .partitions import refines
from .qcond import chains, count_conditions, enumerate_conditions, from_antichain, to_antichain
from .tropical import (
    CoreKind,
    build_test_curve,
    cycle_attachments,
    partition_at_radius,
    partition_type,
    radial_structure,
)
from .uradius import alpha, assignment_of, check_compatibility


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    seconds: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.name}: {self.cases} cases in {self.seconds:.2f}s{extra}"


def test_curves(n: int, include_empty: bool = True):
    """Every test curve on n markings: all chains, the smooth core and every ring core."""
    for chain in chains(n, include_empty=include_empty):
        items = len(chain[0]) if chain else n
        cores = [CoreKind.smooth()]
        for j in range(1, items + 1):
            cores.extend(CoreKind.cycle(j, att) for att in cycle_attachments(items, j))
        for core_kind in cores:
            yield chain, core_kind, build_test_curve(chain, core_kind, n)


def _run(name: str, fn: Callable[[], tuple[int, str]]) -> CheckResult:
    start = time.perf_counter()
    try:
        cases, detail = fn()
        ok = True
    except (AssertionError, TheoremViolation) as err:
        cases, detail, ok = 0, str(err) or type(err).__name__, False
    return CheckResult(name, ok, cases, time.perf_counter() - start, detail)


@dataclass
class Report:
    n: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def run_selftest(n: int = 3) -> Report:
    if not 1 <= n <= 4:
        raise ValueError("selftest supports 1 <= n <= 4")
    report = Report(n)
    conditions = enumerate_conditions(n)

    def duality():
        for q in conditions:
            assert from_antichain(to_antichain(q)) == q, f"antichain round trip failed for {q}"
        return len(conditions), ""

    def counting():
        total = count_conditions(n)
        assert total == len(conditions), f"count {total} != enumerated {len(conditions)}"
        return 1, f"{total} conditions"

    def round_trip():
        k = 0
        for chain, _, curve in test_curves(n):
            assert partition_type(curve) == chain, f"partition type mismatch for {chain}"
            assert radial_structure(curve).basic
            k += 1
        return k, ""

    def radii():
        k = 0
        for q in conditions:
            assert alpha(assignment_of(q), n) == q
            for _, _, curve in test_curves(n):
                bad = [r for r in check_compatibility(q, curve) if not r.ok]
                assert not bad, f"incompatible radius on face {bad[0].generator} for {q}"
                k += 1
        return k, ""

    def contraction_levels():
        k = 0
        for _, _, curve in test_curves(n):
            for rho in radial_structure(curve).radii:
                t = contract_at_radius(curve, rho)
                assert arithmetic_genus(t) == 1
                lev = level_of_singularity(t)
                assert lev == partition_at_radius(curve, rho)
                assert t.branch_count(t.elliptic) == len(lev)
                k += 1
            assert arithmetic_genus(contract_at_radius(curve, ZERO)) == 1
        return k, ""

    def exactly_one():
        curves = list(test_curves(n))
        k = 0
        for q in conditions:
            picks: dict[tuple, set[int]] = {}
            for chain, core_kind, _ in curves:
                picks.setdefault(chain, set()).add(verify_exactly_one(chain, q, core_kind))
                k += 1
            for chain, idx in picks.items():
                assert len(idx) == 1, f"index depends on the core for {chain} and {q}: {idx}"
        return k, ""

    def pipeline():
        k = 0
        for _, _, curve in test_curves(n):
            for q in conditions:
                contract_for_Q(curve, q)
                k += 1
        return k, ""

    def cube():
        cells = enumerate_cells(n)
        verts = [c for c in cells if c.dimension == 0]
        assert len(verts) == len(conditions)
        for q in conditions:
            assert vertex_to_Q(Q_to_vertex(q)) == q
        types = enumerate_types(n)
        k = 0
        for t in types:
            for q in conditions:
                assert bool(is_Q_stable(t, q)) == bool(is_cP_stable(t, Q_to_vertex(q))), "vertex equivalence failed"
                k += 1
        detail = f"{len(cells)} cells, {len(types)} types"
        if n > 3:
            # the pairwise face sweep is quadratic in the number of cells
            return k, detail + ", face monotonicity skipped above n=3"
        points = [sample_point(c) for c in cells]
        stable = {i: [bool(is_cP_stable(t, p)) for t in types] for i, p in enumerate(points)}
        for i, c in enumerate(points):
            for j, d in enumerate(points):
                if face_contains(c, d):
                    for a, b in zip(stable[j], stable[i]):
                        assert not a or b, "face monotonicity failed"
                        k += 1
        for a in cells:
            for b in cells:
                if face_relation(a, b):
                    assert face_contains(sample_point(b), sample_point(a))
        return k, detail

    def monotone_levels():
        from .curvetype import genus_one_subcurves, level_of_subcurve

        k = 0
        for t in enumerate_types(n):
            subs = genus_one_subcurves(t)
            for z1 in subs:
                for z2 in subs:
                    if z1 <= z2:
                        assert refines(level_of_subcurve(t, z1), level_of_subcurve(t, z2))
                        k += 1
        return k, ""

    for name, fn in [
        ("antichain duality", duality),
        ("condition count", counting),
        ("partition type round trip", round_trip),
        ("universal radius bijection", radii),
        ("contraction levels", contraction_levels),
        ("exactly one stable contraction", exactly_one),
        ("pipeline stability", pipeline),
        ("level monotonicity", monotone_levels),
        ("cube complex", cube),
    ]:
        report.results.append(_run(name, fn))
    return report
