import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from qstable import _antichain_py, kernels


def brute_force(after, firsts):
    size = len(after)
    total = 0
    for first in firsts:
        rest = [j for j in range(first + 1, size)]
        for r in range(len(rest) + 1):
            for subset in itertools.combinations(rest, r):
                chosen = (first,) + subset
                if all(after[a] >> b & 1 for a, b in itertools.combinations(chosen, 2)):
                    total += 1
    return total


@st.composite
def random_graphs(draw):
    size = draw(st.integers(1, 10))
    after = []
    for i in range(size):
        bits = draw(st.lists(st.booleans(), min_size=size - i - 1, max_size=size - i - 1))
        after.append(sum(1 << (i + 1 + k) for k, b in enumerate(bits) if b))
    return after


@settings(max_examples=60, deadline=None)
@given(random_graphs())
def test_backends_match_brute_force(after):
    firsts = list(range(len(after)))
    expected = brute_force(after, firsts)
    for backend in kernels.available_backends():
        assert kernels.count_from(after, firsts, backend) == expected


def test_python_twin_is_always_available():
    assert "python" in kernels.available_backends()
    assert kernels.BACKEND in kernels.available_backends()


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.count_from([0], [0], "fortran")


def test_out_of_range_shard():
    for backend in kernels.available_backends():
        with pytest.raises(IndexError):
            kernels.count_from([0, 0], [5], backend)


def test_large_posets_fall_back_to_python():
    # 70 pairwise comparable elements: only the singletons are antichains
    after = [0] * 70
    assert kernels.count_from(after, range(70)) == 70
    assert _antichain_py.count_from(after, range(70)) == 70


@pytest.mark.skipif("cython" not in kernels.available_backends(), reason="compiled kernel not built")
def test_compiled_matches_python_on_random_dense_graphs():
    rng = random.Random(7)
    for _ in range(5):
        size = 24
        after = [sum(1 << j for j in range(i + 1, size) if rng.random() < 0.6) for i in range(size)]
        firsts = list(range(size))
        assert kernels.count_from(after, firsts, "cython") == kernels.count_from(after, firsts, "python")
