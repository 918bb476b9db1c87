import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from oracles import bell
from qstable.partitions import (
    IntegerPartition,
    PartitionError,
    SetPartition,
    apply_permutation,
    covers_above,
    covers_below,
    enumerate_partitions,
    integer_partitions,
    join_blocks,
    orbit_representative,
    parse_partition,
    refines,
    shape,
)


def P(text, n=None):
    return parse_partition(text, n)


def recursive_bell(n):
    # Bell numbers by the triangle recurrence, independent of the enumerator
    row = [1]
    for _ in range(n - 1):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[-1]


def test_n1_has_one_partition():
    assert enumerate_partitions(1) == (SetPartition.of([[1]]),)


@pytest.mark.parametrize("n, expected", [(3, 5), (5, 52)])
def test_partition_counts(n, expected):
    parts = enumerate_partitions(n)
    assert len(parts) == expected == recursive_bell(n)
    assert len(set(parts)) == len(parts)


def test_enumerate_rejects_nonpositive():
    with pytest.raises(ValueError):
        enumerate_partitions(0)


def test_refines_examples():
    assert refines(P("123"), P("12|3"))
    assert not refines(P("12|3"), P("13|2"))


def test_refines_reflexive_n4():
    assert all(refines(p, p) for p in enumerate_partitions(4))


def test_refines_is_a_partial_order_n4():
    parts = enumerate_partitions(4)
    for a, b in itertools.product(parts, repeat=2):
        if refines(a, b) and refines(b, a):
            assert a == b
    for a, b, c in itertools.product(parts, repeat=3):
        if refines(a, b) and refines(b, c):
            assert refines(a, c)


def test_refines_mismatched_n():
    with pytest.raises(PartitionError):
        refines(P("12"), P("123"))


def test_one_block_is_minimum_and_discrete_is_maximum():
    for p in enumerate_partitions(4):
        assert refines(SetPartition.one_block(4), p)
        assert refines(p, SetPartition.discrete(4))


def test_covers_below_examples():
    assert set(covers_below(P("1|2|3"))) == {P("12|3"), P("13|2"), P("23|1")}
    assert covers_below(P("123")) == []


def test_covers_below_count_n4():
    for p in enumerate_partitions(4):
        assert len(covers_below(p)) == comb(len(p), 2)


def test_covers_are_dual_n4():
    parts = enumerate_partitions(4)
    for p in parts:
        for q in covers_below(p):
            assert p in covers_above(q)
            assert refines(q, p) and q != p
            # nothing strictly between
            assert not any(r not in (p, q) and refines(q, r) and refines(r, p) for r in parts)


def test_shape_examples():
    assert shape(P("12|3")) == IntegerPartition((2, 1))
    assert len({shape(p) for p in enumerate_partitions(5)}) == 7 == len(integer_partitions(5))


def test_orbit_sizes_n3():
    sizes = {}
    for p in enumerate_partitions(3):
        sizes[shape(p)] = sizes.get(shape(p), 0) + 1
    assert sizes == {IntegerPartition((3,)): 1, IntegerPartition((2, 1)): 3, IntegerPartition((1, 1, 1)): 1}


def test_orbit_representative_constant_on_orbits():
    for p in enumerate_partitions(4):
        rep = orbit_representative(p)
        assert shape(rep) == shape(p)
        for perm in itertools.permutations(range(1, 5)):
            assert orbit_representative(apply_permutation(p, perm)) == rep


def test_parse_forms_agree():
    assert P("12|3") == P("1,2|3") == P("{1,2}{3}") == SetPartition.of([[3], [2, 1]])


@pytest.mark.parametrize("bad", ["", "12|2", "1|3", "{1,2}{", "1||2"])
def test_parse_errors(bad):
    with pytest.raises(PartitionError):
        parse_partition(bad, 3 if bad == "1|3" else None)


def test_join_blocks_is_coarsest_common_refinement_partner():
    parts = enumerate_partitions(4)
    for a, b in itertools.product(parts, repeat=2):
        j = join_blocks(a, b)
        assert refines(j, a) and refines(j, b)
        assert all(refines(c, j) for c in parts if refines(c, a) and refines(c, b))


@given(st.integers(1, 6).flatmap(lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n)))
def test_rgs_round_trip(labels):
    # any labelling of points by block ids defines a partition; rgs normalizes it
    n = len(labels)
    blocks = {}
    for i, lab in enumerate(labels, start=1):
        blocks.setdefault(lab, []).append(i)
    p = SetPartition.of(blocks.values(), n)
    assert SetPartition.from_rgs(p.rgs) == p
    assert SetPartition.from_json(p.to_json()) == p
    assert parse_partition(str(p)) == p


def test_bell_oracle_matches():
    assert [bell(n) for n in range(1, 7)] == [recursive_bell(n) for n in range(1, 7)]
