"""Pure-Python edit-distance kernel; reference for the compiled version.

Both kernels compute a minimum-cost Levenshtein alignment with uniform
costs and decompose it into (substitutions, insertions, deletions) using
the same canonical traceback: diagonal preferred over deletion preferred
over insertion. The compiled kernel must return identical triples.
"""

from __future__ import annotations

from typing import Sequence

BACKEND = "python"


def edit_counts(ref: Sequence[int], hyp: Sequence[int]) -> tuple[int, int, int]:
    """(substitutions, insertions, deletions) of a minimal-cost alignment
    of hyp against ref. Insertions are hyp tokens with no ref counterpart,
    deletions are ref tokens missing from hyp."""
    n, m = len(ref), len(hyp)
    width = m + 1
    # cost matrix, row-major (n+1) x (m+1)
    d = [0] * ((n + 1) * width)
    for j in range(1, m + 1):
        d[j] = j
    for i in range(1, n + 1):
        d[i * width] = i
        ri = ref[i - 1]
        base = i * width
        prev = base - width
        for j in range(1, m + 1):
            sub = d[prev + j - 1] + (ri != hyp[j - 1])
            dele = d[prev + j] + 1
            ins = d[base + j - 1] + 1
            best = sub
            if dele < best:
                best = dele
            if ins < best:
                best = ins
            d[base + j] = best
    subs = ins = dels = 0
    i, j = n, m
    while i > 0 and j > 0:
        here = d[i * width + j]
        diag = d[(i - 1) * width + j - 1]
        if here == diag + (ref[i - 1] != hyp[j - 1]):
            if ref[i - 1] != hyp[j - 1]:
                subs += 1
            i -= 1
            j -= 1
        elif here == d[(i - 1) * width + j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    dels += i
    ins += j
    return subs, ins, dels
