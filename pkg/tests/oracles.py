"""Independent reference implementations used only by the tests.

These deliberately avoid the library's internals: subcurve genus comes from
delta invariants instead of incidence-graph Betti numbers, stability follows
the block-count formulation, and isomorphism is plain brute force.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache

from qstable.curvetype import CombinatorialType
from qstable.monoid import MonoidElement
from qstable.partitions import SetPartition, enumerate_partitions, refines
from qstable.tropical import TropicalCurve


# -- combinatorial types ----------------------------------------------------


def _points(t: CombinatorialType):
    """(kind, {component: branches}) per singular point."""
    out = []
    for s in t.singularities:
        br = {c: m for c, ss, m in t.incidence if ss == s.id}
        out.append((s.sgenus, br))
    return out


def delta_genus(t: CombinatorialType, z) -> int:
    """Arithmetic genus of the subcurve on components z: 1 - sum(1 - g) + sum(delta)."""
    z = set(z)
    genus = {c.id: c.genus for c in t.components}
    total = 1 - sum(1 - genus[c] for c in z)
    for kind, br in _points(t):
        r_in = sum(m for c, m in br.items() if c in z)
        r_all = sum(br.values())
        if kind == 0:
            total += 1 if r_in == 2 else 0
        elif r_in == r_all:
            total += r_all  # elliptic m-fold point: delta = m
        elif r_in >= 1:
            total += r_in - 1  # rational r-fold point
    return total


def oracle_connected(t: CombinatorialType, z) -> bool:
    z = set(z)
    if not z:
        return False
    start = next(iter(z))
    seen = {start}
    stack = [start]
    pts = _points(t)
    while stack:
        c = stack.pop()
        for kind, br in pts:
            if c not in br:
                continue
            inside = [d for d in br if d in z]
            if kind == 0 and sum(br[d] for d in inside) < 2:
                continue
            for d in inside:
                if d not in seen:
                    seen.add(d)
                    stack.append(d)
    return seen == z


def oracle_genus_one_subcurves(t: CombinatorialType) -> list[frozenset[int]]:
    ids = [c.id for c in t.components]
    out = []
    for r in range(1, len(ids) + 1):
        for z in itertools.combinations(ids, r):
            if oracle_connected(t, z) and delta_genus(t, z) == 1:
                out.append(frozenset(z))
    return out


def oracle_minimal_subcurve(t: CombinatorialType) -> frozenset[int]:
    subs = oracle_genus_one_subcurves(t)
    minimal = [z for z in subs if not any(w < z for w in subs)]
    assert len(minimal) == 1, minimal
    return minimal[0]


def _specials(t: CombinatorialType, c: int) -> int:
    comp = next(x for x in t.components if x.id == c)
    return len(comp.markings) + sum(m for cc, _, m in t.incidence if cc == c)


def oracle_vector_fields(t: CombinatorialType) -> bool:
    """True when the curve has infinitesimal automorphisms fixing the markings."""
    ell = [br for kind, br in _points(t) if kind == 1]
    q_comps = set(ell[0]) if ell else set()
    for comp in t.components:
        sp = _specials(t, comp.id)
        if comp.genus == 0 and comp.id not in q_comps and sp < 3:
            return True
        if comp.genus == 1 and sp == 0:
            return True
    if ell:
        br = ell[0]
        per_branch = [(_specials(t, c) - m) for c, m in br.items() for _ in range(m)]
        if any(x < 1 for x in per_branch) or all(x < 2 for x in per_branch):
            return True
    return False


def oracle_m_stable(t: CombinatorialType, m: int) -> bool:
    """m-stability: small elliptic points, enough attaching points plus markings, no vector fields."""
    for kind, br in _points(t):
        if kind == 1 and sum(br.values()) > m:
            return False
    marks = {c.id: len(c.markings) for c in t.components}
    pts = _points(t)
    for e in oracle_genus_one_subcurves(t):
        meet = 0
        for _, br in pts:
            if any(c in e for c in br) and any(c not in e for c in br):
                meet += 1
        if meet + sum(marks[c] for c in e) <= m:
            return False
    return not oracle_vector_fields(t)


def oracle_level(t: CombinatorialType, z) -> SetPartition:
    """Flood fill over components off z, passing only through points that avoid z."""
    z = set(z)
    home = {mk: c.id for c in t.components for mk in c.markings}
    pts = _points(t)
    label: dict[int, int] = {}
    for c in t.components:
        if c.id in z or c.id in label:
            continue
        label[c.id] = c.id
        stack = [c.id]
        while stack:
            x = stack.pop()
            for _, br in pts:
                if x in br and not any(d in z for d in br):
                    for d in br:
                        if d not in label:
                            label[d] = c.id
                            stack.append(d)
    groups: dict[object, list[int]] = {}
    for mk in range(1, t.n + 1):
        key = ("pt", mk) if home[mk] in z else label[home[mk]]
        groups.setdefault(key, []).append(mk)
    return SetPartition(t.n, tuple(tuple(g) for g in groups.values()))


def brute_force_type_isomorphic(a: CombinatorialType, b: CombinatorialType) -> bool:
    if a.n != b.n or len(a.components) != len(b.components) or len(a.singularities) != len(b.singularities):
        return False
    bc = {c.id: (c.genus, c.markings) for c in b.components}
    b_sigs = Counter()
    b_sg = {s.id: s.sgenus for s in b.singularities}
    for s in b.singularities:
        b_sigs[(b_sg[s.id], frozenset((c, m) for c, ss, m in b.incidence if ss == s.id))] += 1
    a_sg = {s.id: s.sgenus for s in a.singularities}
    bids = [c.id for c in b.components]
    for perm in itertools.permutations(bids):
        cmap = dict(zip((c.id for c in a.components), perm))
        if any((c.genus, c.markings) != bc[cmap[c.id]] for c in a.components):
            continue
        sigs = Counter()
        for s in a.singularities:
            sigs[(a_sg[s.id], frozenset((cmap[c], m) for c, ss, m in a.incidence if ss == s.id))] += 1
        if sigs == b_sigs:
            return True
    return False


# -- tropical curves ---------------------------------------------------------


def brute_force_automorphism_count(curve: TropicalCurve) -> int:
    """Automorphisms as maps of flags, allowing a permutation of the length generators.

    Vertices carrying legs must be fixed; every edge bijection compatible with
    the vertex map and the permuted lengths counts, times 2 for each loop.
    """
    vids = curve.vertex_ids()
    legs_at = {v: sorted(l.marking for l in curve.legs if l.root == v) for v in vids}
    genus = {v.id: v.genus for v in curve.vertices}
    edges = curve.edges
    count = 0
    for gperm in itertools.permutations(curve.generators):
        sigma = dict(zip(curve.generators, gperm))
        images = [MonoidElement(tuple((sigma[k], c) for k, c in e.length.terms)) for e in edges]
        for perm in itertools.permutations(vids):
            vmap = dict(zip(vids, perm))
            if any(legs_at[v] != legs_at[vmap[v]] or genus[v] != genus[vmap[v]] for v in vids):
                continue
            for eperm in itertools.permutations(range(len(edges))):
                flips = 1
                for i, j in enumerate(eperm):
                    a, b = edges[i].ends
                    if images[i] != edges[j].length or sorted((vmap[a], vmap[b])) != sorted(edges[j].ends):
                        break
                    if a == b:
                        flips *= 2
                else:
                    count += flips
    return count


def subdivided_partition(curve: TropicalCurve, rho: MonoidElement) -> SetPartition:
    """Materialize subdivision points on edges and legs crossing rho, delete what lies below, flood fill."""
    # distances by plain relaxation from the core computed by leaf pruning
    adj: dict[int, list[tuple[int, MonoidElement]]] = {v: [] for v in curve.vertex_ids()}
    for e in curve.edges:
        adj[e.ends[0]].append((e.ends[1], e.length))
        adj[e.ends[1]].append((e.ends[0], e.length))
    alive = set(adj)
    changed = True
    genus = {v.id: v.genus for v in curve.vertices}
    while changed:
        changed = False
        for v in list(alive):
            deg = sum(1 for w, _ in adj[v] if w in alive) + sum(1 for w, _ in adj[v] if w == v)
            if genus[v] == 0 and deg <= 1:
                alive.discard(v)
                changed = True
    dist = {v: MonoidElement() for v in alive}
    frontier = list(alive)
    while frontier:
        v = frontier.pop()
        for w, ln in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + ln
                frontier.append(w)
    nodes = {("v", v) for v in adj if rho <= dist[v]}
    links = []
    for i, e in enumerate(curve.edges):
        a, b = e.ends
        ina, inb = ("v", a) in nodes, ("v", b) in nodes
        if ina and inb:
            links.append((("v", a), ("v", b)))
        elif ina or inb:
            top = a if ina else b
            sub = ("s", i)
            nodes.add(sub)
            links.append((sub, ("v", top)))
    home = {}
    for leg in curve.legs:
        if ("v", leg.root) in nodes:
            home[leg.marking] = ("v", leg.root)
        else:
            home[leg.marking] = ("leg", leg.marking)
            nodes.add(("leg", leg.marking))
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for a, b in links:
        parent[find(a)] = find(b)
    groups: dict[object, list[int]] = {}
    for mk in range(1, curve.n + 1):
        groups.setdefault(find(home[mk]), []).append(mk)
    return SetPartition(curve.n, tuple(tuple(g) for g in groups.values()))


@lru_cache(maxsize=None)
def bell(n: int) -> int:
    return len(enumerate_partitions(n))


def is_strictly_increasing(chain) -> bool:
    return all(a != b and refines(a, b) for a, b in zip(chain, chain[1:]))


def expected_test_curve_shape(chain, n: int):
    """Edges of the stabilized smooth-core test curve predicted straight from the chain.

    A block vertex survives iff it splits into at least two pieces one layer
    down (markings, for the last layer).  Each survivor hangs below its
    nearest surviving ancestor, or the core, by the sum of the skipped e's.
    Vertices are labelled ("core",) or (depth, markings beneath); the result
    is a sorted list of (upper, lower, length) plus the leg placement.
    """
    k = len(chain)

    def pieces(i, block):
        if i == k - 1:
            return [(m,) for m in block]
        return [b for b in chain[i + 1].blocks if set(b) <= set(block)]

    survivors = {(i, tuple(sorted(b))) for i in range(k) for b in chain[i].blocks if len(pieces(i, b)) >= 2}
    edges = []
    legs = {}
    for i, b in sorted(survivors):
        up = ("core",)
        for j in range(i - 1, -1, -1):
            anc = next(tuple(sorted(x)) for x in chain[j].blocks if set(b) <= set(x))
            if (j, anc) in survivors:
                up = (j + 1, frozenset(anc))
                break
        start = 0 if up == ("core",) else up[0]
        length = MonoidElement.sum_of(f"e{t}" for t in range(start + 1, i + 2))
        edges.append((up, (i + 1, frozenset(b)), length))
    for m in range(1, n + 1):
        home = ("core",)
        for i in range(k - 1, -1, -1):
            b = next(tuple(sorted(x)) for x in chain[i].blocks if m in x)
            if (i, b) in survivors:
                home = (i + 1, frozenset(b))
                break
        legs[m] = home
    return sorted(edges, key=repr), legs


def observed_curve_shape(curve: TropicalCurve):
    """The same description read off an actual curve, using depth = number of radii up to lambda."""
    adj: dict[int, list[tuple[int, MonoidElement]]] = {v: [] for v in curve.vertex_ids()}
    for e in curve.edges:
        adj[e.ends[0]].append((e.ends[1], e.length))
        adj[e.ends[1]].append((e.ends[0], e.length))
    root = next(v.id for v in curve.vertices if v.genus == 1)
    depth = {root: ZERO_}
    parent = {root: None}
    order = [root]
    for v in order:
        for w, ln in adj[v]:
            if w not in depth:
                depth[w] = depth[v] + ln
                parent[w] = (v, ln)
                order.append(w)
    radii = sorted({d for d in depth.values() if d}, key=lambda m: sum(c for _, c in m.terms))
    below = {v: set() for v in depth}
    for l in curve.legs:
        below[l.root].add(l.marking)
    for v in reversed(order):
        if parent[v]:
            below[parent[v][0]] |= below[v]

    def label(v):
        return ("core",) if v == root else (radii.index(depth[v]) + 1, frozenset(below[v]))

    edges = [(label(parent[v][0]), label(v), parent[v][1]) for v in order if parent[v]]
    legs = {l.marking: label(l.root) for l in curve.legs}
    return sorted(edges, key=repr), legs


ZERO_ = MonoidElement()


def oracle_singularity_level(t: CombinatorialType) -> SetPartition:
    """Flood fill over components through every singular point except the elliptic one."""
    pts = _points(t)
    q = next(i for i, (kind, _) in enumerate(pts) if kind == 1)
    label: dict[int, int] = {}
    for c in t.components:
        if c.id in label:
            continue
        label[c.id] = c.id
        stack = [c.id]
        while stack:
            x = stack.pop()
            for i, (_, br) in enumerate(pts):
                if i != q and x in br:
                    for d in br:
                        if d not in label:
                            label[d] = c.id
                            stack.append(d)
    home = {mk: c.id for c in t.components for mk in c.markings}
    groups: dict[int, list[int]] = {}
    for mk in range(1, t.n + 1):
        groups.setdefault(label[home[mk]], []).append(mk)
    return SetPartition(t.n, tuple(tuple(g) for g in groups.values()))


def oracle_cell_patterns(n: int) -> set[tuple[frozenset, frozenset]]:
    """(ones, free) for every sign pattern in {0, 1/2, 1} obeying the point constraints, by backtracking."""
    from qstable.partitions import enumerate_partitions, refines

    parts = sorted(
        (p for p in enumerate_partitions(n) if not p.is_discrete), key=len
    )  # coarser first, so every strictly lower partition is decided earlier
    out = set()

    def walk(i, ones, free):
        if i == len(parts):
            out.add((frozenset(ones), frozenset(free)))
            return
        p = parts[i]
        walk(i + 1, ones, free)
        below = [r for r in parts[:i] if r != p and refines(r, p)]
        if all(r in ones for r in below):
            walk(i + 1, ones | {p}, free)
            walk(i + 1, ones, free | {p})

    walk(0, frozenset(), frozenset())
    return out
