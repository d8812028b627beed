"""Word-alignment parsing and the span/monotonicity queries used by the
replacement and theory-based generators.

Alignments use the pharaoh convention: whitespace-separated ``i-j`` items,
``i`` indexing the source sentence and ``j`` the target sentence, 0-based.
Target spans are half-open ``(lo, hi)`` index ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from cswaug.corpus import SentencePair, SkipRecord
from cswaug.errors import (
    IndexOutOfRangeError,
    LineCountMismatchError,
    MalformedLinkError,
)

Span = tuple[int, int]


@dataclass(frozen=True)
class AlignmentSet:
    links: frozenset[tuple[int, int]]
    src_len: int
    tgt_len: int

    def __post_init__(self):
        for i, j in self.links:
            if not (0 <= i < self.src_len and 0 <= j < self.tgt_len):
                raise IndexOutOfRangeError(
                    f"link {i}-{j} outside {self.src_len}x{self.tgt_len}"
                )


def parse_pharaoh(line: str, src_len: int, tgt_len: int) -> AlignmentSet:
    """Parse one pharaoh line into an AlignmentSet, validating indices
    against the declared sentence lengths."""
    links = set()
    for item in line.split():
        left, dash, right = item.partition("-")
        if not dash or not left.isdigit() or not right.isdigit():
            raise MalformedLinkError(f"bad alignment item {item!r}")
        links.add((int(left), int(right)))
    return AlignmentSet(frozenset(links), src_len, tgt_len)


def serialize_pharaoh(a: AlignmentSet) -> str:
    return " ".join(f"{i}-{j}" for i, j in sorted(a.links))


def flip(a: AlignmentSet) -> AlignmentSet:
    """Swap source and target roles, for corpora aligned the other way."""
    return AlignmentSet(frozenset((j, i) for i, j in a.links), a.tgt_len, a.src_len)


def target_span_for(a: AlignmentSet, start: int, stop: int) -> Optional[Span]:
    """Minimal contiguous target span (half-open) covering every link of the
    source range [start, stop), or None if the range is unaligned."""
    js = [j for i, j in a.links if start <= i < stop]
    if not js:
        return None
    return (min(js), max(js) + 1)


def span_conflicts(a: AlignmentSet, start: int, stop: int) -> bool:
    """True when the range's target span covers a target token that is also
    linked to some source token outside [start, stop); replacing the range
    would then duplicate that target word."""
    span = target_span_for(a, start, stop)
    if span is None:
        return False
    lo, hi = span
    return any(lo <= j < hi and not (start <= i < stop) for i, j in a.links)


def span_map(a: AlignmentSet) -> list[Optional[Span]]:
    """Per-source-index minimal target span; None for unaligned indices."""
    return [target_span_for(a, i, i + 1) for i in range(a.src_len)]


def is_monotonic_boundary(a: AlignmentSet, b: int) -> bool:
    """True iff no alignment link crosses the boundary before source token b:
    every target index linked left of b precedes every target index linked at
    or right of b. Vacuously true when either side is unaligned."""
    if not 1 <= b <= a.src_len - 1:
        raise ValueError(f"boundary {b} outside [1, {a.src_len - 1}]")
    left = [j for i, j in a.links if i < b]
    right = [j for i, j in a.links if i >= b]
    if not left or not right:
        return True
    return max(left) < min(right)


def read_pharaoh_file(
    path,
    pairs: list[SentencePair],
    skips: Iterable[SkipRecord] = (),
    flip_links: bool = False,
) -> dict[str, AlignmentSet]:
    """Read one alignment line per corpus row (same order as the corpus
    file, including rows that were skipped at load) and attach each line to
    its surviving pair."""
    from cswaug.corpus import _content_lines

    lines = _content_lines(path)
    skipped_rows = {s.row for s in skips}
    total = len(pairs) + len(skipped_rows)
    if len(lines) != total:
        raise LineCountMismatchError(
            f"{path}: {len(lines)} alignment lines for {total} corpus rows"
        )
    out: dict[str, AlignmentSet] = {}
    pair_iter = iter(pairs)
    for row, line in enumerate(lines):
        if row in skipped_rows:
            continue
        pair = next(pair_iter)
        if flip_links:
            a = parse_pharaoh(line, len(pair.target), len(pair.source))
            a = flip(a)
        else:
            a = parse_pharaoh(line, len(pair.source), len(pair.target))
        out[pair.id] = a
    return out
