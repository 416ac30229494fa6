# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled placement-scoring kernel.

Arithmetic is ordered exactly as in ``caccess.inequality`` (sequential
cumulative sums, sequential trapezoid accumulation) so scores are
bit-identical to the pure-Python pipeline. Build without -ffast-math and
with -ffp-contract=off.
"""

import numpy as np

from libc.math cimport NAN
from libc.stdlib cimport free, malloc

cdef enum:
    SMALL_N = 16


cdef inline void _insertion_sort(double* t, Py_ssize_t lo, Py_ssize_t hi) noexcept nogil:
    # sorts t[lo..hi] inclusive
    cdef Py_ssize_t i, j
    cdef double key
    for i in range(lo + 1, hi + 1):
        key = t[i]
        j = i - 1
        while j >= lo and t[j] > key:
            t[j + 1] = t[j]
            j -= 1
        t[j + 1] = key


cdef inline void _swap(double* t, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    cdef double tmp = t[a]
    t[a] = t[b]
    t[b] = tmp


cdef void _sort(double* t, Py_ssize_t n) noexcept nogil:
    """Quicksort (median of three, Hoare partition) down to small runs."""
    cdef Py_ssize_t stack[128]
    cdef Py_ssize_t top = 0, lo, hi, mid, i, j
    cdef double pivot
    stack[0] = 0
    stack[1] = n - 1
    top = 2
    while top:
        top -= 2
        lo = stack[top]
        hi = stack[top + 1]
        while hi - lo > SMALL_N:
            mid = lo + (hi - lo) // 2
            if t[mid] < t[lo]:
                _swap(t, mid, lo)
            if t[hi] < t[lo]:
                _swap(t, hi, lo)
            if t[hi] < t[mid]:
                _swap(t, hi, mid)
            pivot = t[mid]
            i = lo
            j = hi
            while i <= j:
                while t[i] < pivot:
                    i += 1
                while t[j] > pivot:
                    j -= 1
                if i <= j:
                    _swap(t, i, j)
                    i += 1
                    j -= 1
            # push the larger side, loop on the smaller: stack depth stays O(log n)
            if j - lo > hi - i:
                stack[top] = lo
                stack[top + 1] = j
                lo = i
            else:
                stack[top] = i
                stack[top + 1] = hi
                hi = j
            top += 2
        _insertion_sort(t, lo, hi)


cdef inline double _gini_sorted(double* t, double* cum, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0, total, area2 = 0.0
    cdef double f_prev = 0.0, phi_prev = 0.0, f, phi
    for i in range(n):
        acc = acc + t[i]
        cum[i] = acc
    total = acc
    if total <= 0.0:
        return NAN
    for i in range(n):
        f = <double>(i + 1) / <double>n
        phi = cum[i] / total
        area2 = area2 + (f - f_prev) * (phi + phi_prev)
        f_prev = f
        phi_prev = phi
    area2 = 1.0 - area2
    if area2 < 0.0:
        return 0.0
    if area2 > 1.0:
        return 1.0
    return area2


def combo_gini(const double[::1] base_g, const double[:, ::1] cand_g,
               const Py_ssize_t[:, ::1] combos, double c, double[::1] out):
    """Write the Gini of each placement row of ``combos`` into ``out``.

    The baseline factors are sorted once; per placement only the LGAs whose
    factor improves are sorted, then merged with the untouched baseline run.
    Sorting g before scaling by c > 0 yields the same ascending sequence as
    sorting c * g.
    """
    cdef Py_ssize_t n = base_g.shape[0]
    cdef Py_ssize_t rows = combos.shape[0], k = combos.shape[1]
    cdef Py_ssize_t r, i, j, cand, m, p, q, w, idx
    cdef double v, b
    if cand_g.shape[1] != n or out.shape[0] != rows:
        raise ValueError("shape mismatch")
    for r in range(rows):
        for j in range(k):
            cand = combos[r, j]
            if cand < 0 or cand >= cand_g.shape[0]:
                raise IndexError(f"candidate index {cand} out of range")
    cdef Py_ssize_t[::1] order = np.argsort(np.asarray(base_g), kind="stable").astype(np.intp)
    # g: per-LGA factor for the placement; changed: improved factors; t: sorted ratios; cum: scratch
    cdef double* buf = <double*>malloc(4 * n * sizeof(double) + 1)
    if buf == NULL:
        raise MemoryError()
    cdef double* g = buf
    cdef double* changed = buf + n
    cdef double* t = buf + 2 * n
    cdef double* cum = buf + 3 * n
    try:
        with nogil:
            for r in range(rows):
                for i in range(n):
                    g[i] = base_g[i]
                for j in range(k):
                    cand = combos[r, j]
                    for i in range(n):
                        v = cand_g[cand, i]
                        if v > g[i]:
                            g[i] = v
                m = 0
                for i in range(n):
                    if g[i] > base_g[i]:
                        changed[m] = g[i]
                        m += 1
                if m > 1:
                    _sort(changed, m)
                p = 0
                q = 0
                w = 0
                while w < n:
                    # next untouched baseline value, in baseline sorted order
                    while p < n and g[order[p]] > base_g[order[p]]:
                        p += 1
                    if p < n and (q >= m or base_g[order[p]] <= changed[q]):
                        b = base_g[order[p]]
                        p += 1
                    else:
                        b = changed[q]
                        q += 1
                    t[w] = c * b
                    w += 1
                out[r] = _gini_sorted(t, cum, n)
    finally:
        free(buf)
