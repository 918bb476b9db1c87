"""Marked tropical curves of genus one with edge lengths in free monoids.

Flags, root map and involution are encoded as edges with an endpoint pair
(equal endpoints for a loop) plus legs rooted at vertices.  Vertex ids are
arbitrary integers; edges are identified by their position in ``edges``.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .monoid import ZERO, MonoidElement, natural_key
from .partitions import SetPartition, refines


class CurveError(ValueError):
    pass


class NotRadiallyAligned(CurveError):
    """Two vertices have incomparable distances from the core."""

    def __init__(self, witness: tuple[int, int], values: tuple[MonoidElement, MonoidElement]):
        super().__init__(
            f"vertices {witness[0]} and {witness[1]} have incomparable radial distances "
            f"{values[0]} and {values[1]}"
        )
        self.witness = witness
        self.values = values


class Unstabilizable(CurveError):
    pass


@dataclass(frozen=True)
class Vertex:
    id: int
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    ends: tuple[int, int]
    length: MonoidElement

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    def other(self, v: int) -> int:
        a, b = self.ends
        return b if a == v else a


@dataclass(frozen=True)
class Leg:
    marking: int
    root: int


@dataclass(frozen=True)
class TropicalCurve:
    generators: tuple[str, ...]
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()

    def __post_init__(self) -> None:
        for name in ("generators", "vertices", "edges", "legs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        ids = [v.id for v in self.vertices]
        if len(set(ids)) != len(ids):
            raise CurveError("duplicate vertex ids")
        if len(set(self.generators)) != len(self.generators):
            raise CurveError("duplicate generator names")
        idset = set(ids)
        gens = set(self.generators)
        for v in self.vertices:
            if v.genus < 0:
                raise CurveError(f"vertex {v.id} has negative genus")
        for i, e in enumerate(self.edges):
            if e.ends[0] not in idset or e.ends[1] not in idset:
                raise CurveError(f"edge {i} has an unknown endpoint {e.ends}")
            if e.length.is_zero():
                raise CurveError(f"edge {i} has length zero")
            if not e.length.support <= gens:
                raise CurveError(f"edge {i} length {e.length} uses undeclared generators")
        marks = sorted(leg.marking for leg in self.legs)
        if marks != list(range(1, len(marks) + 1)):
            raise CurveError(f"markings must be exactly 1..n, got {marks}")
        for leg in self.legs:
            if leg.root not in idset:
                raise CurveError(f"leg {leg.marking} rooted at unknown vertex {leg.root}")
        object.__setattr__(self, "legs", tuple(sorted(self.legs, key=lambda l: l.marking)))

    @property
    def n(self) -> int:
        return len(self.legs)

    @cached_property
    def genus_of(self) -> dict[int, int]:
        return {v.id: v.genus for v in self.vertices}

    @cached_property
    def incident(self) -> dict[int, list[int]]:
        """Edge indices at each vertex; a loop is listed twice."""
        out: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for i, e in enumerate(self.edges):
            out[e.ends[0]].append(i)
            out[e.ends[1]].append(i)
        return out

    @cached_property
    def legs_at(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {v.id: [] for v in self.vertices}
        for leg in self.legs:
            out[leg.root].append(leg.marking)
        return out

    def valence(self, v: int) -> int:
        return len(self.incident[v]) + len(self.legs_at[v])

    def vertex_ids(self) -> list[int]:
        return [v.id for v in self.vertices]

    def to_json(self) -> dict:
        index = {v.id: v.id for v in self.vertices}
        return {
            "generators": list(self.generators),
            "vertices": [{"id": v.id, "genus": v.genus} for v in self.vertices],
            "edges": [
                {"ends": [index[e.ends[0]], index[e.ends[1]]], "length": e.length.to_json()}
                for e in self.edges
            ],
            "legs": [{"marking": l.marking, "root": l.root} for l in self.legs],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> TropicalCurve:
        return cls(
            generators=tuple(data["generators"]),
            vertices=tuple(Vertex(int(v["id"]), int(v.get("genus", 0))) for v in data["vertices"]),
            edges=tuple(
                Edge((int(e["ends"][0]), int(e["ends"][1])), MonoidElement.from_json(e["length"]))
                for e in data.get("edges", [])
            ),
            legs=tuple(Leg(int(l["marking"]), int(l["root"])) for l in data.get("legs", [])),
        )


def relabel(curve: TropicalCurve) -> TropicalCurve:
    """Renumber vertices 0..V-1 preserving their order."""
    new = {v.id: i for i, v in enumerate(curve.vertices)}
    return TropicalCurve(
        curve.generators,
        tuple(Vertex(new[v.id], v.genus) for v in curve.vertices),
        tuple(Edge((new[e.ends[0]], new[e.ends[1]]), e.length) for e in curve.edges),
        tuple(Leg(l.marking, new[l.root]) for l in curve.legs),
    )


def components(curve: TropicalCurve) -> list[set[int]]:
    seen: set[int] = set()
    out = []
    for v in curve.vertex_ids():
        if v in seen:
            continue
        comp = {v}
        todo = [v]
        while todo:
            u = todo.pop()
            for i in curve.incident[u]:
                w = curve.edges[i].other(u)
                if w not in comp:
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        out.append(comp)
    return out


def is_connected(curve: TropicalCurve) -> bool:
    return len(components(curve)) == 1


def first_betti(curve: TropicalCurve) -> int:
    return len(curve.edges) - len(curve.vertices) + len(components(curve))


def genus(curve: TropicalCurve) -> int:
    return first_betti(curve) + sum(v.genus for v in curve.vertices)


def is_stable(curve: TropicalCurve) -> bool:
    if not curve.vertices or not is_connected(curve):
        return False
    if len(curve.vertices) == 1 and not curve.edges and not curve.legs and curve.vertices[0].genus == 1:
        return False
    return all(v.genus > 0 or curve.valence(v.id) >= 3 for v in curve.vertices)


def _require_genus_one(curve: TropicalCurve) -> None:
    if not is_connected(curve):
        raise CurveError("curve is not connected")
    g = genus(curve)
    if g != 1:
        raise CurveError(f"only genus-one curves are supported (genus is {g})")


def core(curve: TropicalCurve) -> frozenset[int]:
    """Vertices of the minimal connected subgraph of genus one.

    Found by repeatedly pruning genus-0 vertices meeting at most one edge end.
    """
    _require_genus_one(curve)
    alive = set(curve.vertex_ids())
    degree = {v: len(curve.incident[v]) for v in alive}
    todo = [v for v in alive if curve.genus_of[v] == 0 and degree[v] <= 1]
    while todo:
        v = todo.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for i in curve.incident[v]:
            w = curve.edges[i].other(v)
            if w in alive:
                degree[w] -= 1
                if curve.genus_of[w] == 0 and degree[w] <= 1:
                    todo.append(w)
    return frozenset(alive)


def core_edges(curve: TropicalCurve) -> list[int]:
    c = core(curve)
    return [i for i, e in enumerate(curve.edges) if e.ends[0] in c and e.ends[1] in c]


def radial_distance(curve: TropicalCurve) -> dict[int, MonoidElement]:
    """Sum of edge lengths along the unique path from the core, per vertex."""
    c = core(curve)
    lam = {v: ZERO for v in c}
    queue = deque(c)
    while queue:
        u = queue.popleft()
        for i in curve.incident[u]:
            e = curve.edges[i]
            w = e.other(u)
            if w not in lam:
                lam[w] = lam[u] + e.length
                queue.append(w)
    return lam


@dataclass(frozen=True)
class PLFunction:
    """Values in the length monoid at vertices plus natural-number slopes on legs."""

    values: Mapping[int, MonoidElement]
    slopes: Mapping[int, int] = field(default_factory=dict)

    def is_valid_on(self, curve: TropicalCurve) -> bool:
        # f(v) - f(w) must be an integer multiple of the edge length
        for e in curve.edges:
            a, b = self.values[e.ends[0]], self.values[e.ends[1]]
            lo, hi = (a, b) if a <= b else (b, a)
            if not lo <= hi:
                return False
            diff = hi - lo
            if diff.is_zero():
                continue
            ratios = {diff.coefficient(g) / e.length.coefficient(g) if e.length.coefficient(g) else None
                      for g in diff.support | e.length.support}
            if len(ratios) != 1 or None in ratios or not float(next(iter(ratios))).is_integer():
                return False
        return True

    def pullback(self, phi: Mapping[str, MonoidElement], vertex_map: Mapping[int, int]) -> PLFunction:
        """Pull back along a contraction with monoid map phi and vertex map old -> new."""
        vals: dict[int, MonoidElement] = {}
        for old, val in self.values.items():
            vals[vertex_map[old]] = val.apply(phi)
        return PLFunction(vals, dict(self.slopes))


def radial_function(curve: TropicalCurve) -> PLFunction:
    return PLFunction(radial_distance(curve), {l.marking: 1 for l in curve.legs})


@dataclass(frozen=True)
class RadialData:
    radii: tuple[MonoidElement, ...]
    core_edge_lengths: tuple[MonoidElement, ...]
    basic: bool
    radius_generators: tuple[str, ...] = ()
    core_generators: tuple[str, ...] = ()


def radial_structure(curve: TropicalCurve) -> RadialData:
    """Sorted distinct nonzero radial distances; raises :class:`NotRadiallyAligned`.

    ``basic`` records whether the length monoid is freely generated by the
    consecutive radius differences together with the core edge lengths.
    """
    lam = radial_distance(curve)
    items = sorted(lam.items())
    for (v, a), (w, b) in itertools.combinations(items, 2):
        if not a.comparable(b):
            raise NotRadiallyAligned((v, w), (a, b))
    radii = sorted({x for x in lam.values() if x}, key=lambda m: sum(c for _, c in m.terms))
    c_edges = tuple(curve.edges[i].length for i in core_edges(curve))
    diffs = [b - a for a, b in zip([ZERO] + radii, radii)]
    names: list[str] = []
    basic = True
    for d in list(diffs) + list(c_edges):
        if len(d.terms) == 1 and d.terms[0][1] == 1:
            names.append(d.terms[0][0])
        else:
            basic = False
    if basic:
        basic = len(set(names)) == len(names) == len(curve.generators) and set(names) == set(curve.generators)
    k = len(radii)
    return RadialData(
        tuple(radii),
        c_edges,
        basic,
        tuple(names[:k]) if basic else (),
        tuple(names[k:]) if basic else (),
    )


def is_radially_aligned(curve: TropicalCurve) -> bool:
    try:
        radial_structure(curve)
    except NotRadiallyAligned:
        return False
    return True


def is_basic_radially_aligned(curve: TropicalCurve) -> bool:
    try:
        return is_stable(curve) and radial_structure(curve).basic
    except (NotRadiallyAligned, CurveError):
        return False


def _above(lam: MonoidElement, rho: MonoidElement, where: object) -> bool:
    if rho <= lam:
        return True
    if lam <= rho:
        return False
    raise CurveError(f"radius {rho} is incomparable to radial distance {lam} at {where}")


def partition_at_radius(curve: TropicalCurve, rho: MonoidElement) -> SetPartition:
    """Partition of markings by components of the part of the curve at distance >= rho.

    Legs rooted below rho survive as rays carrying only their own marking.
    """
    lam = radial_distance(curve)
    kept = {v for v in lam if _above(lam[v], rho, f"vertex {v}")}
    parent = {v: v for v in kept}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in curve.edges:
        a, b = e.ends
        if a in kept and b in kept:
            parent[find(a)] = find(b)
    groups: dict[object, list[int]] = {}
    for leg in curve.legs:
        key = ("v", find(leg.root)) if leg.root in kept else ("ray", leg.marking)
        groups.setdefault(key, []).append(leg.marking)
    return SetPartition(curve.n, tuple(tuple(g) for g in groups.values()))


def partition_type(curve: TropicalCurve) -> tuple[SetPartition, ...]:
    return tuple(partition_at_radius(curve, r) for r in radial_structure(curve).radii)


# -- contraction and stabilization ----------------------------------------


def contract(
    curve: TropicalCurve,
    phi: Mapping[str, MonoidElement],
    generators: Sequence[str] | None = None,
) -> TropicalCurve:
    """Weighted edge contraction along the monoid homomorphism phi.

    Edges whose image length is zero are contracted; each merged vertex takes
    the smallest id of its preimage and genus = sum of genera + first Betti
    number of the contracted subgraph.  Generators absent from phi are fixed.
    """
    new_len = [e.length.apply(phi) for e in curve.edges]
    if generators is None:
        seen: dict[str, None] = {}
        for g in curve.generators:
            img = phi.get(g, MonoidElement.gen(g))
            for name, _ in img.terms:
                seen.setdefault(name, None)
        generators = tuple(seen)
    parent = {v: v for v in curve.vertex_ids()}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    contracted = [i for i, ln in enumerate(new_len) if ln.is_zero()]
    for i in contracted:
        a, b = curve.edges[i].ends
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = min(ra, rb), max(ra, rb)
            parent[hi] = lo
    cls_size: Counter[int] = Counter(find(v) for v in curve.vertex_ids())
    cls_edges: Counter[int] = Counter(find(curve.edges[i].ends[0]) for i in contracted)
    cls_genus: Counter[int] = Counter()
    for v in curve.vertices:
        cls_genus[find(v.id)] += v.genus
    vertices = tuple(
        Vertex(r, cls_genus[r] + cls_edges[r] - cls_size[r] + 1)
        for r in sorted(cls_size)
    )
    edges = tuple(
        Edge((find(e.ends[0]), find(e.ends[1])), new_len[i])
        for i, e in enumerate(curve.edges)
        if not new_len[i].is_zero()
    )
    legs = tuple(Leg(l.marking, find(l.root)) for l in curve.legs)
    return TropicalCurve(tuple(generators), vertices, edges, legs)


def face_contraction(curve: TropicalCurve, killed: Iterable[str]) -> TropicalCurve:
    """Send the named generators to zero and keep the others."""
    killed = set(killed)
    phi = {g: ZERO for g in killed}
    return contract(curve, phi, tuple(g for g in curve.generators if g not in killed))


def project_to_generator(curve: TropicalCurve, g: str) -> TropicalCurve:
    """Face contraction killing every generator except g."""
    return face_contraction(curve, [h for h in curve.generators if h != g])


def stabilize(curve: TropicalCurve, order: Sequence[int] | None = None) -> TropicalCurve:
    """Remove unstable genus-0 vertices until the curve is stable.

    A legless vertex on one edge is deleted; a legless vertex on two edges is
    smoothed away and the edge lengths added; a vertex with one leg and one
    edge is deleted and its leg moved across the edge.  Vertices are scanned
    in ``order`` (default: increasing id), restarting after each change.
    """
    _require_genus_one(curve)
    genus_of = {v.id: v.genus for v in curve.vertices}
    edges: dict[int, Edge] = dict(enumerate(curve.edges))
    legs = {l.marking: l.root for l in curve.legs}
    scan = list(order) if order is not None else sorted(genus_of)
    if sorted(scan) != sorted(genus_of):
        raise ValueError("order must be a permutation of the vertex ids")

    def ends_at(v: int) -> list[int]:
        out = []
        for i, e in edges.items():
            out.extend(i for x in e.ends if x == v)
        return out

    changed = True
    while changed:
        changed = False
        for v in scan:
            if v not in genus_of or genus_of[v] != 0:
                continue
            inc = ends_at(v)
            vlegs = [m for m, r in legs.items() if r == v]
            if len(inc) + len(vlegs) >= 3:
                continue
            distinct = sorted(set(inc))
            if not inc or (len(distinct) == 1 and edges[distinct[0]].is_loop):
                raise Unstabilizable(f"genus-0 vertex {v} cannot be stabilized away")
            if len(inc) == 1:
                i = inc[0]
                u = edges[i].other(v)
                for m in vlegs:
                    legs[m] = u
                del edges[i]
            else:  # two distinct edges, no legs
                i, j = distinct
                u, w = edges[i].other(v), edges[j].other(v)
                edges[i] = Edge((u, w), edges[i].length + edges[j].length)
                del edges[j]
            del genus_of[v]
            changed = True
            break
    if len(genus_of) == 1 and not edges and not legs:
        raise Unstabilizable("an isolated genus-one vertex without markings is not stable")
    out = TropicalCurve(
        curve.generators,
        tuple(Vertex(v, g) for v, g in sorted(genus_of.items())),
        tuple(edges[i] for i in sorted(edges)),
        tuple(Leg(m, r) for m, r in sorted(legs.items())),
    )
    return out


# -- automorphisms and isomorphisms ---------------------------------------


@dataclass(frozen=True)
class AutomorphismInfo:
    order: int
    description: str


def automorphisms(curve: TropicalCurve) -> AutomorphismInfo:
    """Automorphism group of a basic radially aligned curve.

    Markings pin every vertex, so the only freedom is in the core: reversing
    a self-loop, or exchanging the two edges of a two-vertex core.
    """
    if not is_basic_radially_aligned(curve):
        raise CurveError("automorphisms are only computed for basic radially aligned curves")
    c = core(curve)
    ce = core_edges(curve)
    if len(c) == 1 and len(ce) == 1:
        return AutomorphismInfo(2, "reversal of the core loop")
    if len(c) == 2 and len(ce) == 2:
        return AutomorphismInfo(2, "exchange of the two core edges")
    return AutomorphismInfo(1, "identity only")


def _edge_signature(curve: TropicalCurve, vmap: Mapping[int, int], gmap: Mapping[str, str] | None) -> Counter:
    sig: Counter = Counter()
    for e in curve.edges:
        a, b = vmap[e.ends[0]], vmap[e.ends[1]]
        length = e.length if gmap is None else MonoidElement(tuple((gmap[k], v) for k, v in e.length.terms))
        sig[(min(a, b), max(a, b), length)] += 1
    return sig


def find_isomorphism(
    a: TropicalCurve,
    b: TropicalCurve,
    relabel_generators: bool = True,
) -> tuple[dict[int, int], dict[str, str]] | None:
    """A marking-preserving isomorphism a -> b as (vertex map, generator map), or None.

    Backtracking search: vertices carrying legs are forced by their leg sets,
    legless vertices and generators are permuted.  Meant for small curves.
    """
    if (a.n, len(a.vertices), len(a.edges), len(a.generators)) != (
        b.n, len(b.vertices), len(b.edges), len(b.generators)
    ):
        return None
    b_by_legs = {frozenset(ms): v for v, ms in b.legs_at.items() if ms}
    forced: dict[int, int] = {}
    for v, ms in a.legs_at.items():
        if ms:
            w = b_by_legs.get(frozenset(ms))
            if w is None:
                return None
            forced[v] = w
    free_a = [v for v in a.vertex_ids() if v not in forced]
    free_b = [v for v in b.vertex_ids() if v not in set(forced.values())]
    if len(free_a) != len(free_b):
        return None
    target_b = _edge_signature(b, {v: v for v in b.vertex_ids()}, None)
    if relabel_generators:
        gmaps = [dict(zip(a.generators, p)) for p in itertools.permutations(b.generators)]
    else:
        if set(a.generators) != set(b.generators):
            return None
        gmaps = [{g: g for g in a.generators}]
    for perm in itertools.permutations(free_b):
        vmap = dict(forced)
        vmap.update(zip(free_a, perm))
        if any(a.genus_of[v] != b.genus_of[vmap[v]] for v in vmap):
            continue
        if any(a.valence(v) != b.valence(vmap[v]) for v in vmap):
            continue
        for gmap in gmaps:
            if _edge_signature(a, vmap, gmap) == target_b:
                return vmap, gmap
    return None


def is_isomorphic(a: TropicalCurve, b: TropicalCurve, relabel_generators: bool = True) -> bool:
    return find_isomorphism(a, b, relabel_generators) is not None


# -- test curves ------------------------------------------------------------


@dataclass(frozen=True)
class CoreKind:
    """Shape of the core of a test curve.

    ``smooth``: one genus-1 vertex.  ``cycle``: a ring of ``length`` genus-0
    vertices; ``attach[t]`` is the ring position receiving the t-th first-layer
    item (block of the first partition, or marking when the chain is empty).
    """

    kind: str = "smooth"
    length: int = 0
    attach: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("smooth", "cycle"):
            raise ValueError(f"unknown core kind {self.kind!r}")
        if self.kind == "cycle" and self.length < 1:
            raise ValueError("a cycle core needs length >= 1")
        if self.kind == "smooth" and self.length not in (0, 1):
            raise ValueError("a smooth core has no length")

    @classmethod
    def smooth(cls) -> CoreKind:
        return cls("smooth")

    @classmethod
    def cycle(cls, length: int, attach: Sequence[int] | None = None) -> CoreKind:
        return cls("cycle", length, tuple(attach) if attach is not None else None)

    @classmethod
    def parse(cls, text: str) -> CoreKind:
        s = text.strip().lower()
        if s == "smooth":
            return cls.smooth()
        if s.startswith("cycle:"):
            return cls.cycle(int(s.split(":", 1)[1]))
        raise ValueError(f"core kind must be 'smooth' or 'cycle:j', got {text!r}")

    def __str__(self) -> str:
        if self.kind == "smooth":
            return "smooth"
        return f"cycle:{self.length}" + (f"@{','.join(map(str, self.attach))}" if self.attach else "")


def _check_chain(chain: Sequence[SetPartition], n: int | None) -> int:
    if not chain:
        if n is None:
            raise CurveError("an empty chain needs an explicit n")
        if n < 1:
            raise CurveError(f"n must be positive, got {n}")
        return n
    n0 = chain[0].n
    if n is not None and n != n0:
        raise CurveError(f"chain is on {n0} points, not {n}")
    for p in chain:
        if p.n != n0:
            raise CurveError("chain mixes ground sets")
        if p.is_discrete:
            raise CurveError("chain may not contain the discrete partition")
    for a, b in zip(chain, chain[1:]):
        if a == b or not refines(a, b):
            raise CurveError(f"chain is not strictly increasing at {a} < {b}")
    return n0


def raw_test_curve(
    chain: Sequence[SetPartition],
    core_kind: CoreKind = CoreKind(),
    n: int | None = None,
) -> TropicalCurve:
    """Unstabilized test curve: one vertex per block per layer, layer i edges of length e_i."""
    n = _check_chain(chain, n)
    k = len(chain)
    gens = [f"e{i}" for i in range(1, k + 1)]
    vertices: list[Vertex] = []
    edges: list[Edge] = []
    legs: list[Leg] = []
    if core_kind.kind == "smooth":
        vertices.append(Vertex(0, 1))
        ring = [0]
    else:
        j = core_kind.length
        ring = list(range(j))
        vertices.extend(Vertex(i, 0) for i in ring)
        gens += [f"d{i}" for i in range(1, j + 1)]
        for i in ring:
            edges.append(Edge((i, (i + 1) % j), MonoidElement.gen(f"d{i + 1}")))
    items = list(chain[0].blocks) if k else [(m,) for m in range(1, n + 1)]
    if core_kind.attach is not None:
        attach = list(core_kind.attach)
        if len(attach) != len(items) or any(not 0 <= p < len(ring) for p in attach):
            raise CurveError(f"attachment {attach} does not fit {len(items)} items on {len(ring)} ring vertices")
    else:
        if len(ring) > len(items):
            raise CurveError(f"a ring of {len(ring)} vertices needs at least that many first-layer items")
        attach = [t % len(ring) for t in range(len(items))]
    next_id = len(vertices)
    if k == 0:
        for t, (m,) in enumerate(items):
            legs.append(Leg(m, ring[attach[t]]))
    else:
        prev: dict[tuple[int, ...], int] = {}
        for layer, part in enumerate(chain, start=1):
            length = MonoidElement.gen(f"e{layer}")
            cur: dict[tuple[int, ...], int] = {}
            for block in part.blocks:
                if layer == 1:
                    parent = ring[attach[items.index(block)]]
                else:
                    parent = next(v for blk, v in prev.items() if set(block) <= set(blk))
                vertices.append(Vertex(next_id, 0))
                edges.append(Edge((parent, next_id), length))
                cur[block] = next_id
                next_id += 1
            prev = cur
        for block, v in prev.items():
            legs.extend(Leg(m, v) for m in block)
    return TropicalCurve(tuple(gens), tuple(vertices), tuple(edges), tuple(legs))


def build_test_curve(
    chain: Sequence[SetPartition],
    core_kind: CoreKind = CoreKind(),
    n: int | None = None,
) -> TropicalCurve:
    """Stabilized test curve of a strict chain; its partition type is the chain."""
    return relabel(stabilize(raw_test_curve(chain, core_kind, n)))


def cycle_attachments(items: int, length: int) -> list[tuple[int, ...]]:
    """Assignments of items to ring positions hitting every position, up to rotation and reflection."""
    seen: set[tuple[int, ...]] = set()
    out = []
    for att in itertools.product(range(length), repeat=items):
        if len(set(att)) != length:
            continue
        variants = []
        for shift in range(length):
            for sign in (1, -1):
                variants.append(tuple((sign * a + shift) % length for a in att))
        key = min(variants)
        if key not in seen:
            seen.add(key)
            out.append(key)
    return out


def generators_sorted(names: Iterable[str]) -> list[str]:
    return sorted(names, key=natural_key)
