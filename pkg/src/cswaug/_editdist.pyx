# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled edit-distance kernel.

Mirrors cswaug._editdist_py exactly, including the canonical traceback
order (diagonal, then deletion, then insertion), so the two backends are
interchangeable.
"""

from libc.stdlib cimport free, malloc

BACKEND = "cython"


def edit_counts(ref, hyp):
    """(substitutions, insertions, deletions) of a minimal-cost alignment
    of hyp against ref, with uniform costs."""
    cdef Py_ssize_t n = len(ref)
    cdef Py_ssize_t m = len(hyp)
    cdef Py_ssize_t width = m + 1
    cdef long *r = NULL
    cdef long *h = NULL
    cdef long *d = NULL
    cdef Py_ssize_t i, j, base, prev
    cdef long sub, dele, ins, best
    cdef long subs = 0, inss = 0, dels = 0

    r = <long *> malloc(n * sizeof(long)) if n else NULL
    h = <long *> malloc(m * sizeof(long)) if m else NULL
    d = <long *> malloc((n + 1) * width * sizeof(long))
    if d == NULL or (n and r == NULL) or (m and h == NULL):
        free(r); free(h); free(d)
        raise MemoryError()
    try:
        for i in range(n):
            r[i] = ref[i]
        for j in range(m):
            h[j] = hyp[j]

        for j in range(width):
            d[j] = j
        for i in range(1, n + 1):
            base = i * width
            prev = base - width
            d[base] = i
            for j in range(1, m + 1):
                sub = d[prev + j - 1] + (r[i - 1] != h[j - 1])
                dele = d[prev + j] + 1
                ins = d[base + j - 1] + 1
                best = sub
                if dele < best:
                    best = dele
                if ins < best:
                    best = ins
                d[base + j] = best

        i = n
        j = m
        while i > 0 and j > 0:
            if d[i * width + j] == d[(i - 1) * width + j - 1] + (r[i - 1] != h[j - 1]):
                if r[i - 1] != h[j - 1]:
                    subs += 1
                i -= 1
                j -= 1
            elif d[i * width + j] == d[(i - 1) * width + j] + 1:
                dels += 1
                i -= 1
            else:
                inss += 1
                j -= 1
        dels += i
        inss += j
    finally:
        free(r)
        free(h)
        free(d)
    return subs, inss, dels
