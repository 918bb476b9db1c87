# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled antichain counter for posets with at most 64 elements.

``incomparable_after[i]`` is the bitmask of elements j > i incomparable to i.
An antichain is grown by appending elements in increasing index order, so the
candidate set after choosing i is the current candidate set restricted to
``incomparable_after[i]``; each search node is exactly one antichain.
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport malloc, free

MAX_ELEMENTS = 64


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef uint64_t _count(uint64_t avail, const uint64_t* after) noexcept nogil:
    cdef uint64_t total = 1
    cdef int i
    while avail:
        i = __builtin_ctzll(avail)
        avail &= avail - 1
        total += _count(avail & after[i], after)
    return total


def count_from(incomparable_after, firsts):
    """Number of antichains whose least-index element lies in ``firsts``."""
    cdef Py_ssize_t size = len(incomparable_after)
    if size > MAX_ELEMENTS:
        raise ValueError(f"compiled kernel supports at most {MAX_ELEMENTS} elements")
    cdef uint64_t* after = <uint64_t*> malloc(max(size, 1) * sizeof(uint64_t))
    if after == NULL:
        raise MemoryError()
    cdef uint64_t total = 0
    cdef int i
    try:
        for i in range(size):
            after[i] = <uint64_t> incomparable_after[i]
        for first in firsts:
            i = first
            if i < 0 or i >= size:
                raise IndexError(first)
            with nogil:
                total += _count(after[i], after)
    finally:
        free(after)
    return int(total)
