import functools
import random
from fractions import Fraction

import pytest

from oracles import oracle_cell_patterns
from qstable.cubecomplex import (
    Cell,
    CubePoint,
    CubePointError,
    Q_to_vertex,
    cell_of,
    enumerate_cells,
    face_contains,
    face_relation,
    iter_vertices,
    q_curve,
    q_sing,
    sample_point,
    validate_point,
    vertex_to_Q,
)
from qstable.partitions import SetPartition, enumerate_partitions, parse_partition, refines
from qstable.qcond import QCondition, count_conditions, enumerate_conditions

P = parse_partition
H = Fraction(1, 2)


def test_valid_interior_point():
    c = validate_point(3, {P("123"): 1, P("1|23"): H})
    assert c[P("1|23")] == H and c[P("12|3")] == 0
    assert not c.is_vertex()


@pytest.mark.parametrize(
    "coords, clause",
    [
        ({P("1|2|3"): H}, "discrete"),
        ({P("123"): 2}, "range"),
        ({P("123"): -1}, "range"),
        ({P("1|23"): H}, "lower-not-one"),
        ({P("123"): H, P("1|23"): H}, "lower-not-one"),
    ],
)
def test_invalid_points(coords, clause):
    with pytest.raises(CubePointError) as info:
        validate_point(3, coords)
    assert info.value.clause == clause


def test_lower_not_one_witness():
    with pytest.raises(CubePointError) as info:
        validate_point(4, {P("1234"): 1, P("12|34"): 1, P("12|3|4"): H})
    p1, p2 = info.value.witness
    assert p2 == P("12|3|4") and refines(p1, p2) and p1 != p2


def test_floats_are_rejected():
    with pytest.raises(TypeError):
        validate_point(3, {P("123"): 0.5})


def test_q_sets_at_interior_edge_point():
    c = validate_point(3, {P("123"): 1, P("1|23"): H})
    assert q_sing(c) == {P("123"), P("1|23")}
    assert q_curve(c) == {P("1|23"), P("12|3"), P("13|2"), P("1|2|3")}
    assert q_sing(c) & q_curve(c) == {P("1|23")}


@functools.lru_cache(maxsize=None)
def _cells(n: int) -> list[Cell]:
    return enumerate_cells(n)


def _random_point(rng: random.Random, n: int) -> CubePoint:
    cell = rng.choice(_cells(n))
    coords = {p: Fraction(1) for p in cell.ones}
    coords.update({p: Fraction(rng.randint(1, 99), 100) for p in cell.free})
    return validate_point(n, coords)


def test_random_points_have_downward_closed_q_sing():
    rng = random.Random(4)
    parts = enumerate_partitions(4)
    for _ in range(10_000):
        c = _random_point(rng, 4)
        sing, curve = q_sing(c), q_curve(c)
        assert sing | curve == set(parts)
        QCondition(4, sing)  # raises unless downward closed and avoiding the discrete partition
        for p in sing - curve:
            assert c[p] == 1


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vertices_are_conditions(n):
    vs = list(iter_vertices(n))
    assert len(vs) == count_conditions(n)
    for q in enumerate_conditions(n):
        v = Q_to_vertex(q)
        assert v.is_vertex() and vertex_to_Q(v) == q
        assert q_sing(v) == q.members
    with pytest.raises(ValueError):
        vertex_to_Q(validate_point(3, {P("123"): H}))


@pytest.mark.parametrize("n, total", [(2, 3), (3, 29), (4, 4709)])
def test_cells_match_backtracking(n, total):
    cells = _cells(n)
    assert len(cells) == total
    assert {(c.ones, c.free) for c in cells} == oracle_cell_patterns(n)


def test_cells_n3():
    cells = enumerate_cells(3)
    by_dim = {}
    for c in cells:
        by_dim.setdefault(c.dimension, []).append(c)
    assert {d: len(v) for d, v in by_dim.items()} == {0: 9, 1: 13, 2: 6, 3: 1}
    (top,) = by_dim[3]
    assert top.free == {P("12|3"), P("13|2"), P("1|23")} and top.ones == {P("123")}
    # edges lying in no square
    whiskers = [e for e in by_dim[1] if not any(face_relation(e, s) for s in by_dim[2])]
    assert len(whiskers) == 1
    assert whiskers[0].free == {P("123")} and not whiskers[0].ones


def test_cell_vertices_and_sample_points():
    for cell in enumerate_cells(3):
        vs = cell.vertices()
        assert len(vs) == 2 ** cell.dimension
        s = sample_point(cell)
        assert cell.contains(s) and cell_of(s) == cell
        for v in vs:
            assert face_contains(s, v)
    with pytest.raises(ValueError):
        sample_point(enumerate_cells(3)[0], Fraction(1))


def test_face_relation_matches_points():
    cells = enumerate_cells(3)
    for a in cells:
        assert face_relation(a, a)
        for b in cells:
            assert face_relation(a, b) == face_contains(sample_point(b), sample_point(a))


def test_face_contains_edge_and_endpoints():
    mid = validate_point(3, {P("123"): 1, P("1|23"): H})
    lo = validate_point(3, {P("123"): 1})
    hi = validate_point(3, {P("123"): 1, P("1|23"): 1})
    assert face_contains(mid, lo) and face_contains(mid, hi)
    assert not face_contains(lo, mid)
    assert face_contains(mid, mid)


def test_point_json_round_trip():
    rng = random.Random(8)
    for _ in range(200):
        c = _random_point(rng, 4)
        assert CubePoint.from_json(c.to_json()) == c
    assert Cell(3, frozenset(), frozenset({P("123")})).to_json()["dimension"] == 1


# -- stability at points of the complex -------------------------------------

from qstable.cli.parsing import parse_type  # noqa: E402
from qstable.curvetype import enumerate_types, has_infinitesimal_automorphisms, is_cP_stable, is_Q_stable  # noqa: E402

INTERPOLATING = parse_type("0:g0[1] 1:g0[] 2:g0[2,3] ; E2(0,1), N(1,2)")


def test_interpolating_type_lives_only_inside_an_edge():
    t = INTERPOLATING
    mid = validate_point(3, {P("123"): 1, P("1|23"): H})
    lo = validate_point(3, {P("123"): 1})
    hi = validate_point(3, {P("123"): 1, P("1|23"): 1})
    assert is_cP_stable(t, mid)
    assert not is_cP_stable(t, lo) and not is_cP_stable(t, hi)
    assert has_infinitesimal_automorphisms(t)
    for q in enumerate_conditions(3):
        assert not is_Q_stable(t, q)


def test_cp_verdict_clauses():
    lo = validate_point(3, {P("123"): 1})
    hi = validate_point(3, {P("123"): 1, P("1|23"): 1})
    assert is_cP_stable(INTERPOLATING, lo).clause == "singularity-level"
    assert is_cP_stable(INTERPOLATING, hi).clause == "subcurve-level"
    bad_n = is_cP_stable(parse_type("0:g1[1,2]"), lo)
    assert not bad_n and bad_n.clause == "invalid"


@pytest.fixture(scope="module")
def types3():
    return enumerate_types(3)


def test_vertex_equivalence_n3(types3):
    for t in types3:
        for q in enumerate_conditions(3):
            assert bool(is_Q_stable(t, q)) == bool(is_cP_stable(t, Q_to_vertex(q)))


@pytest.mark.slow
def test_vertex_equivalence_n4():
    conds = enumerate_conditions(4)
    for t in enumerate_types(4):
        for q in conds:
            assert bool(is_Q_stable(t, q)) == bool(is_cP_stable(t, Q_to_vertex(q)))


def test_stability_spreads_from_faces_n3(types3):
    points = [sample_point(c) for c in _cells(3)]
    stable = [[bool(is_cP_stable(t, p)) for t in types3] for p in points]
    for i, c in enumerate(points):
        for j, d in enumerate(points):
            if face_contains(c, d):
                assert all(b for a, b in zip(stable[j], stable[i]) if a)


def test_every_point_has_a_stable_type_n3(types3):
    for cell in _cells(3):
        for value in (Fraction(1, 3), H):
            if cell.dimension == 0 and value != H:
                continue
            p = sample_point(cell, value)
            assert any(is_cP_stable(t, p) for t in types3 + [INTERPOLATING])


def test_tacnode_with_marked_branches_and_a_tail():
    # the branch levels are 1|23 while every genus-one subcurve has the discrete level,
    # so the two nested subcurves never show a strict level increase
    t = parse_type("0:g0[1] 1:g0[2] 2:g0[3] ; E2(0,1), N(1,2)")
    from qstable.curvetype import level_of_singularity, level_of_subcurve, minimal_genus_one_subcurve

    lq = level_of_singularity(t)
    lz = level_of_subcurve(t, minimal_genus_one_subcurve(t).components)
    assert lq == P("1|23") and lz == SetPartition.discrete(3)
    verdicts = [is_cP_stable(t, sample_point(c)) for c in _cells(3)]
    assert not any(verdicts)
    assert {v.clause for v in verdicts} == {"singularity-level", "level-increase"}
