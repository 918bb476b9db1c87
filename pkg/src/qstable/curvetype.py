"""Combinatorial types of marked genus-one Gorenstein curves.

A type lists irreducible components (genus, markings), singular points
(nodes, or at most one elliptic m-fold point) and the number of branches
of each singular point lying on each component.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .partitions import SetPartition, refines
from .qcond import QCondition

NODE = 0
ELLIPTIC = 1

SINGLETONS = "singletons"
MERGED = "merged"


class CurveTypeError(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    id: int
    genus: int = 0
    markings: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "markings", frozenset(self.markings))


@dataclass(frozen=True)
class Singularity:
    id: int
    sgenus: int = NODE


@dataclass(frozen=True)
class CombinatorialType:
    n: int
    components: tuple[Component, ...]
    singularities: tuple[Singularity, ...] = ()
    incidence: tuple[tuple[int, int, int], ...] = ()  # (component, singularity, branches)

    def __post_init__(self) -> None:
        comps = tuple(sorted(self.components, key=lambda c: c.id))
        sings = tuple(sorted(self.singularities, key=lambda s: s.id))
        merged: Counter[tuple[int, int]] = Counter()
        for c, s, m in self.incidence:
            if m < 0:
                raise CurveTypeError(f"negative branch multiplicity at ({c}, {s})")
            merged[(c, s)] += m
        inc = tuple(sorted((c, s, m) for (c, s), m in merged.items() if m))
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "singularities", sings)
        object.__setattr__(self, "incidence", inc)
        cids = [c.id for c in comps]
        sids = [s.id for s in sings]
        if not comps:
            raise CurveTypeError("a type needs at least one component")
        if len(set(cids)) != len(cids) or len(set(sids)) != len(sids):
            raise CurveTypeError("duplicate component or singularity id")
        for c in comps:
            if c.genus < 0:
                raise CurveTypeError(f"component {c.id} has negative genus")
        marks = sorted(m for c in comps for m in c.markings)
        if marks != list(range(1, self.n + 1)):
            raise CurveTypeError(f"markings must partition 1..{self.n}, got {marks}")
        for c, s, _ in inc:
            if c not in cids or s not in sids:
                raise CurveTypeError(f"incidence ({c}, {s}) names an unknown component or singularity")
        totals = Counter()
        for _, s, m in inc:
            totals[s] += m
        for s in sings:
            if s.sgenus not in (NODE, ELLIPTIC):
                raise CurveTypeError(f"singularity {s.id} has unsupported genus {s.sgenus}")
            if s.sgenus == NODE and totals[s.id] != 2:
                raise CurveTypeError(f"node {s.id} has {totals[s.id]} branches, expected 2")
            if s.sgenus == ELLIPTIC and totals[s.id] < 1:
                raise CurveTypeError(f"elliptic point {s.id} has no branches")
        if sum(1 for s in sings if s.sgenus == ELLIPTIC) > 1:
            raise CurveTypeError("at most one elliptic singularity is allowed")

    # -- lookups

    @cached_property
    def component(self) -> dict[int, Component]:
        return {c.id: c for c in self.components}

    @cached_property
    def sgenus(self) -> dict[int, int]:
        return {s.id: s.sgenus for s in self.singularities}

    @cached_property
    def branches(self) -> dict[int, dict[int, int]]:
        """singularity -> {component: multiplicity}"""
        out: dict[int, dict[int, int]] = {s.id: {} for s in self.singularities}
        for c, s, m in self.incidence:
            out[s][c] = m
        return out

    @cached_property
    def on_component(self) -> dict[int, dict[int, int]]:
        """component -> {singularity: multiplicity}"""
        out: dict[int, dict[int, int]] = {c.id: {} for c in self.components}
        for c, s, m in self.incidence:
            out[c][s] = m
        return out

    @property
    def elliptic(self) -> int | None:
        for s in self.singularities:
            if s.sgenus == ELLIPTIC:
                return s.id
        return None

    @property
    def nodes(self) -> list[int]:
        return [s.id for s in self.singularities if s.sgenus == NODE]

    def marking_home(self) -> dict[int, int]:
        return {m: c.id for c in self.components for m in c.markings}

    def special_points(self, c: int) -> int:
        return len(self.component[c].markings) + sum(self.on_component[c].values())

    def branch_count(self, s: int) -> int:
        return sum(self.branches[s].values())

    # -- serialization

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "components": [
                {"id": c.id, "genus": c.genus, "markings": sorted(c.markings)} for c in self.components
            ],
            "singularities": [{"id": s.id, "sgenus": s.sgenus} for s in self.singularities],
            "incidence": [
                {"component": c, "singularity": s, "multiplicity": m} for c, s, m in self.incidence
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> CombinatorialType:
        return cls(
            int(data["n"]),
            tuple(
                Component(int(c["id"]), int(c.get("genus", 0)), frozenset(int(m) for m in c.get("markings", [])))
                for c in data["components"]
            ),
            tuple(Singularity(int(s["id"]), int(s["sgenus"])) for s in data.get("singularities", [])),
            tuple(
                (int(i["component"]), int(i["singularity"]), int(i["multiplicity"]))
                for i in data.get("incidence", [])
            ),
        )


class _UnionFind:
    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def groups(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def arithmetic_genus(t: CombinatorialType) -> int:
    """b1 of the component/singularity incidence graph plus component and singularity genera."""
    uf = _UnionFind([("c", c.id) for c in t.components] + [("s", s.id) for s in t.singularities])
    edges = 0
    for c, s, m in t.incidence:
        uf.union(("c", c), ("s", s))
        edges += m
    verts = len(t.components) + len(t.singularities)
    b1 = edges - verts + len(uf.groups())
    return b1 + sum(c.genus for c in t.components) + sum(s.sgenus for s in t.singularities)


def is_connected(t: CombinatorialType) -> bool:
    return subcurve_is_connected(t, frozenset(c.id for c in t.components))


def check_type(t: CombinatorialType) -> None:
    """Raise unless t is connected of arithmetic genus one."""
    if not is_connected(t):
        raise CurveTypeError("type is not connected")
    g = arithmetic_genus(t)
    if g != 1:
        raise CurveTypeError(f"arithmetic genus is {g}, expected 1")


# -- subcurves --------------------------------------------------------------


def _subcurve_graph(t: CombinatorialType, z: frozenset[int]) -> tuple[_UnionFind, int, int]:
    """Union-find, edge count and extra genus of the subcurve on components z.

    A node with one branch in z is a smooth point of z and is dropped.  An
    elliptic point with only some branches in z is a rational point joining them.
    """
    items: list = [("c", c) for c in z]
    edges = 0
    extra = 0
    pairs = []
    for s, br in t.branches.items():
        inside = {c: m for c, m in br.items() if c in z}
        total_in = sum(inside.values())
        if t.sgenus[s] == NODE and total_in < 2:
            continue
        if not inside:
            continue
        items.append(("s", s))
        for c, m in inside.items():
            pairs.append((("c", c), ("s", s)))
            edges += m
        if t.sgenus[s] == ELLIPTIC and total_in == t.branch_count(s):
            extra += 1
    uf = _UnionFind(items)
    for a, b in pairs:
        uf.union(a, b)
    b1 = edges - len(items) + len(uf.groups())
    return uf, b1, extra


def subcurve_is_connected(t: CombinatorialType, z: Iterable[int]) -> bool:
    z = frozenset(z)
    if not z:
        return False
    uf, _, _ = _subcurve_graph(t, z)
    return len(uf.groups()) == 1


def subcurve_genus(t: CombinatorialType, z: Iterable[int]) -> int:
    z = frozenset(z)
    _, b1, extra = _subcurve_graph(t, z)
    return b1 + extra + sum(t.component[c].genus for c in z)


def genus_one_subcurves(t: CombinatorialType) -> list[frozenset[int]]:
    """All connected subcurves of genus one, by brute force over component subsets."""
    ids = [c.id for c in t.components]
    out = []
    for r in range(1, len(ids) + 1):
        for z in itertools.combinations(ids, r):
            fz = frozenset(z)
            if subcurve_is_connected(t, fz) and subcurve_genus(t, fz) == 1:
                out.append(fz)
    return out


@dataclass(frozen=True)
class MinimalSubcurve:
    components: frozenset[int]
    kind: str  # "smooth", "cycle" or "elliptic"
    singularity: int | None = None


def minimal_genus_one_subcurve(t: CombinatorialType) -> MinimalSubcurve:
    """The branch components of the elliptic point, or else the core of the dual graph."""
    check_type(t)
    q = t.elliptic
    if q is not None:
        return MinimalSubcurve(frozenset(t.branches[q]), "elliptic", q)
    alive = {c.id for c in t.components}
    degree = {c: sum(t.on_component[c].values()) for c in alive}
    todo = [c for c in alive if t.component[c].genus == 0 and degree[c] <= 1]
    while todo:
        c = todo.pop()
        if c not in alive:
            continue
        alive.discard(c)
        for s in t.on_component[c]:
            for d in t.branches[s]:
                if d in alive and d != c:
                    degree[d] -= 1
                    if t.component[d].genus == 0 and degree[d] <= 1:
                        todo.append(d)
    z = frozenset(alive)
    if len(z) == 1 and t.component[next(iter(z))].genus == 1:
        return MinimalSubcurve(z, "smooth")
    return MinimalSubcurve(z, "cycle")


# -- levels -----------------------------------------------------------------


def _partition_from_homes(t: CombinatorialType, key: Mapping[int, object]) -> SetPartition:
    groups: dict[object, list[int]] = {}
    for m in range(1, t.n + 1):
        groups.setdefault(key[m], []).append(m)
    return SetPartition(t.n, tuple(tuple(g) for g in groups.values()))


def level_of_subcurve(t: CombinatorialType, z: Iterable[int], z_markings: str = SINGLETONS) -> SetPartition:
    """Partition of the markings by connected components of the closure of C - Z together with the markings.

    Markings on Z are singleton blocks; with ``z_markings="merged"`` they
    form a single block instead.
    """
    z = frozenset(z)
    if z_markings not in (SINGLETONS, MERGED):
        raise ValueError(f"z_markings must be {SINGLETONS!r} or {MERGED!r}")
    if not z <= set(t.component):
        raise CurveTypeError("subcurve names unknown components")
    if not subcurve_is_connected(t, z):
        raise CurveTypeError("subcurve is not connected")
    if subcurve_genus(t, z) != 1:
        raise CurveTypeError("subcurve does not have genus one")
    outside = [c.id for c in t.components if c.id not in z]
    uf = _UnionFind(outside)
    for s, br in t.branches.items():
        if any(c in z for c in br):
            continue  # the point lies on Z, so it separates
        members = list(br)
        for c in members[1:]:
            uf.union(members[0], c)
    key: dict[int, object] = {}
    home = t.marking_home()
    for m, c in home.items():
        if c in z:
            key[m] = ("z",) if z_markings == MERGED else ("pt", m)
        else:
            key[m] = ("c", uf.find(c))
    return _partition_from_homes(t, key)


def level_of_singularity(t: CombinatorialType, q: int | None = None) -> SetPartition:
    """Partition of the markings by components of the curve with every branch at q detached."""
    if q is None:
        q = t.elliptic
        if q is None:
            raise CurveTypeError("type has no elliptic singularity")
    if q not in t.sgenus:
        raise CurveTypeError(f"unknown singularity {q}")
    if t.sgenus[q] != ELLIPTIC:
        raise CurveTypeError(f"singularity {q} is a node; levels are defined for elliptic points")
    uf = _UnionFind([c.id for c in t.components])
    for s, br in t.branches.items():
        if s == q:
            continue
        members = list(br)
        for c in members[1:]:
            uf.union(members[0], c)
    home = t.marking_home()
    return _partition_from_homes(t, {m: uf.find(c) for m, c in home.items()})


def has_infinitesimal_automorphisms(t: CombinatorialType) -> bool:
    """Special-point criterion for vector fields vanishing at the markings.

    Special points of a component are its markings plus singular branches on
    it.  Rational components away from the elliptic point need three, every
    branch of the elliptic point needs one besides the point and some branch
    needs two, and a genus-one component needs one.
    """
    q = t.elliptic
    for c in t.components:
        sp = t.special_points(c.id)
        meets_q = q is not None and c.id in t.branches[q]
        if c.genus == 0 and not meets_q and sp < 3:
            return True
        if c.genus >= 1 and sp < 1:
            return True
    if q is not None:
        others = []
        for c, m in t.branches[q].items():
            others.extend([t.special_points(c) - m] * m)
        if min(others) < 1 or max(others) < 2:
            return True
    return False


# -- stability --------------------------------------------------------------


@dataclass(frozen=True)
class StabilityVerdict:
    stable: bool
    clause: str | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.stable

    def to_json(self) -> dict:
        return {"stable": self.stable, "clause": self.clause, "reason": self.reason}


def _validity(t: CombinatorialType, n: int) -> StabilityVerdict | None:
    if t.n != n:
        return StabilityVerdict(False, "invalid", f"type has {t.n} markings, condition is on {n}")
    try:
        check_type(t)
    except CurveTypeError as err:
        return StabilityVerdict(False, "invalid", str(err))
    return None


def is_Q_stable(t: CombinatorialType, q: QCondition, z_markings: str = SINGLETONS) -> StabilityVerdict:
    """Level conditions on the minimal genus-one subcurve and the elliptic point, plus no vector fields."""
    bad = _validity(t, q.n)
    if bad is not None:
        return bad
    zmin = minimal_genus_one_subcurve(t)
    lz = level_of_subcurve(t, zmin.components, z_markings)
    if lz in q:
        return StabilityVerdict(False, "subcurve-level", f"level {lz} of the minimal genus-one subcurve lies in Q")
    if t.elliptic is not None:
        lq = level_of_singularity(t)
        if lq not in q:
            return StabilityVerdict(False, "singularity-level", f"level {lq} of the elliptic point is not in Q")
    if has_infinitesimal_automorphisms(t):
        return StabilityVerdict(False, "automorphisms", "the curve has infinitesimal automorphisms")
    return StabilityVerdict(True, None, "stable")


def is_cP_stable(t: CombinatorialType, point, z_markings: str = SINGLETONS) -> StabilityVerdict:
    """Stability for a point of the cube complex (``point`` is a CubePoint)."""
    from .cubecomplex import q_curve, q_sing

    bad = _validity(t, point.n)
    if bad is not None:
        return bad
    sing, curve = q_sing(point), q_curve(point)
    if t.elliptic is not None:
        lq = level_of_singularity(t)
        if lq not in sing:
            return StabilityVerdict(False, "singularity-level", f"level {lq} of the elliptic point is not in Q_sing")
    subs = genus_one_subcurves(t)
    levels = {z: level_of_subcurve(t, z, z_markings) for z in subs}
    for z in subs:
        if levels[z] not in curve:
            return StabilityVerdict(
                False, "subcurve-level", f"subcurve {sorted(z)} has level {levels[z]} outside Q_curve"
            )
    for z1, z2 in itertools.permutations(subs, 2):
        if z1 < z2 and not (levels[z1] != levels[z2] and refines(levels[z1], levels[z2])):
            return StabilityVerdict(
                False,
                "level-increase",
                f"subcurves {sorted(z1)} < {sorted(z2)} have levels {levels[z1]}, {levels[z2]} not strictly increasing",
            )
    zmin = minimal_genus_one_subcurve(t).components
    for c in sorted(zmin):
        touches_outside = any(
            any(d not in zmin for d in t.branches[s]) for s in t.on_component[c]
        )
        if not touches_outside and not t.component[c].markings:
            return StabilityVerdict(
                False, "minimal-subcurve-support", f"component {c} of the minimal subcurve meets nothing outside it"
            )
    return StabilityVerdict(True, None, "stable")


# -- surgery ----------------------------------------------------------------


def smooth_nodes(t: CombinatorialType, nodes: Iterable[int]) -> CombinatorialType:
    """Smooth the given nodes, merging their branch components (smallest id survives)."""
    nodes = set(nodes)
    for s in nodes:
        if t.sgenus.get(s) != NODE:
            raise CurveTypeError(f"{s} is not a node")
    uf = _UnionFind([c.id for c in t.components])
    for s in sorted(nodes):
        cs = list(t.branches[s])
        for c in cs[1:]:
            a, b = uf.find(cs[0]), uf.find(c)
            if a != b:
                lo, hi = min(a, b), max(a, b)
                uf.parent[hi] = lo
    groups = uf.groups()
    smoothed_in: Counter[int] = Counter(uf.find(next(iter(t.branches[s]))) for s in nodes)
    comps = []
    for root, members in groups.items():
        g = sum(t.component[c].genus for c in members) + smoothed_in[root] - len(members) + 1
        marks = frozenset(m for c in members for m in t.component[c].markings)
        comps.append(Component(root, g, marks))
    sings = tuple(s for s in t.singularities if s.id not in nodes)
    inc = tuple((uf.find(c), s, m) for c, s, m in t.incidence if s not in nodes)
    return CombinatorialType(t.n, tuple(comps), sings, inc)


def relabel(t: CombinatorialType) -> CombinatorialType:
    """Renumber components and singularities consecutively from 0 in their current order."""
    cmap = {c.id: i for i, c in enumerate(t.components)}
    smap = {s.id: i for i, s in enumerate(t.singularities)}
    return CombinatorialType(
        t.n,
        tuple(Component(cmap[c.id], c.genus, c.markings) for c in t.components),
        tuple(Singularity(smap[s.id], s.sgenus) for s in t.singularities),
        tuple((cmap[c], smap[s], m) for c, s, m in t.incidence),
    )


# -- isomorphism ------------------------------------------------------------


def _colour_classes(t: CombinatorialType) -> dict[int, int]:
    """Iterated colour refinement of components; colours are isomorphism invariant."""

    def rank(sig: dict[int, tuple]) -> dict[int, int]:
        order = {v: i for i, v in enumerate(sorted(set(sig.values())))}
        return {c: order[v] for c, v in sig.items()}

    colour = rank({c.id: (c.genus, tuple(sorted(c.markings))) for c in t.components})
    while True:
        sig = {}
        for c in t.components:
            around = []
            for s, m in t.on_component[c.id].items():
                others = tuple(sorted((colour[d], k) for d, k in t.branches[s].items()))
                around.append((t.sgenus[s], m, others))
            sig[c.id] = (colour[c.id], tuple(sorted(around)))
        new = rank(sig)
        if len(set(new.values())) == len(set(colour.values())):
            return new
        colour = new


def _encode(t: CombinatorialType, order: Sequence[int]) -> tuple:
    pos = {c: i for i, c in enumerate(order)}
    comps = tuple((t.component[c].genus, tuple(sorted(t.component[c].markings))) for c in order)
    sings = tuple(sorted(
        (t.sgenus[s], tuple(sorted((pos[c], m) for c, m in br.items())))
        for s, br in t.branches.items()
    ))
    return (t.n, comps, sings)


def canonical_key(t: CombinatorialType) -> tuple:
    """Isomorphism invariant that is complete: equal keys iff isomorphic types.

    Components are first split by iterated colour refinement; the minimum
    encoding over orderings within colour classes is returned.
    """
    colour = _colour_classes(t)
    classes: dict[int, list[int]] = {}
    for c in t.components:
        classes.setdefault(colour[c.id], []).append(c.id)
    keys = sorted(classes)
    best = None
    for perms in itertools.product(*(itertools.permutations(classes[k]) for k in keys)):
        order = [c for p in perms for c in p]
        enc = _encode(t, order)
        if best is None or enc < best:
            best = enc
    return best


def canonical_form(t: CombinatorialType) -> CombinatorialType:
    """The isomorphic type rebuilt from the canonical key, with ids 0, 1, ..."""
    n, comps, sings = canonical_key(t)
    components = tuple(Component(i, g, frozenset(ms)) for i, (g, ms) in enumerate(comps))
    singularities = tuple(Singularity(j, sg) for j, (sg, _) in enumerate(sings))
    incidence = tuple((c, j, m) for j, (_, br) in enumerate(sings) for c, m in br)
    return CombinatorialType(n, components, singularities, incidence)


def is_isomorphic(a: CombinatorialType, b: CombinatorialType) -> bool:
    return canonical_key(a) == canonical_key(b)


def enumerate_types(n: int, max_cycle: int | None = None) -> list[CombinatorialType]:
    """Canonical representatives of all contractions of all test curves on n markings.

    Covers every strict chain including the empty one, the smooth core and
    ring cores of every length up to ``max_cycle`` (default n + 1) with every
    attachment up to rotation and reflection, and every radius including 0.
    """
    from .contraction import contract_at_radius
    from .qcond import chains
    from .monoid import ZERO
    from .tropical import CoreKind, build_test_curve, cycle_attachments, radial_structure

    if not 1 <= n <= 4:
        raise ValueError("type enumeration is limited to 1 <= n <= 4")
    limit = n + 1 if max_cycle is None else max_cycle
    seen: dict[tuple, CombinatorialType] = {}
    for chain in chains(n, include_empty=True):
        items = len(chain[0]) if chain else n
        cores = [CoreKind.smooth()]
        for j in range(1, min(limit, items) + 1):
            cores.extend(CoreKind.cycle(j, att) for att in cycle_attachments(items, j))
        for core_kind in cores:
            curve = build_test_curve(chain, core_kind, n)
            for rho in (ZERO,) + radial_structure(curve).radii:
                t = contract_at_radius(curve, rho)
                key = canonical_key(t)
                if key not in seen:
                    seen[key] = canonical_form(t)
    return [seen[k] for k in sorted(seen)]
