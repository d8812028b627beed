"""Theory-guided candidate generation over alignment structures.

Two candidate families:

* equivalence-constraint (EC): a sentence may switch language only at
  boundaries no alignment link crosses, so both word orders stay intact.
  Linearized over alignments: a labeling of the source tokens into
  alternating matrix/embedded segments is legal when every segment boundary
  is monotonic and every embedded segment has an exclusive target span.
* matrix-frame (MLF): function words and language-less tokens always stay
  in the matrix language; contiguous content-word ranges may be swapped for
  their aligned target spans as embedded islands.

Enumeration is a depth-first search over source positions, exploring the
no-switch / no-replace branch first so low-switch candidates surface before
the truncation limit hits. Sampling picks one candidate per sentence,
uniformly or by closeness to a reference switch-point fraction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from cswaug.align import AlignmentSet, is_monotonic_boundary, span_conflicts, target_span_for
from cswaug.corpus import DEFAULT_POLICY, Lang, NormalizationPolicy, SentencePair, Token, normalize
from cswaug.errors import EmptyCandidatesError, LengthMismatchError, NoCandidateError
from cswaug.generation import Generation, Strategy, make_generation
from cswaug.metrics import switch_points


@dataclass(frozen=True)
class TheoryConfig:
    ref_spf: float = 0.22
    max_candidates: int = 64
    function_words: frozenset[str] = frozenset()

    def __post_init__(self):
        if not 0.0 <= self.ref_spf <= 1.0:
            raise ValueError(f"ref_spf must be in [0, 1]: {self.ref_spf}")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be >= 1")


def load_function_words(path, policy: NormalizationPolicy = DEFAULT_POLICY) -> frozenset[str]:
    """One normalized matrix surface per line; blanks and # lines ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            w = normalize(line, policy).strip()
            if w:
                words.add(w)
    return frozenset(words)


# A segment plan is a list of (start, stop, lang) entries partitioning the
# source range, with adjacent entries differing in lang.
Segment = tuple[int, int, Lang]


def _embeddable(a: AlignmentSet, start: int, stop: int) -> bool:
    return target_span_for(a, start, stop) is not None and not span_conflicts(
        a, start, stop
    )


def ec_plans(a: AlignmentSet) -> Iterator[list[Segment]]:
    """Yield legal switched segment plans, depth-first over boundaries in
    left-to-right order with the no-switch branch explored first; plans with
    a single segment (monolingual) are not emitted."""
    n = a.src_len

    def close_ok(start: int, stop: int, lang: Lang) -> bool:
        return lang is Lang.MATRIX or _embeddable(a, start, stop)

    def rec(pos: int, seg_start: int, lang: Lang, done: list[Segment]):
        if pos == n:
            if done and close_ok(seg_start, n, lang):
                yield done + [(seg_start, n, lang)]
            return
        yield from rec(pos + 1, seg_start, lang, done)
        if is_monotonic_boundary(a, pos) and close_ok(seg_start, pos, lang):
            other = Lang.EMBEDDED if lang is Lang.MATRIX else Lang.MATRIX
            yield from rec(pos + 1, pos, other, done + [(seg_start, pos, lang)])

    for first in (Lang.MATRIX, Lang.EMBEDDED):
        yield from rec(1, 0, first, []) if n > 1 else iter(())


def render_plan(pair: SentencePair, a: AlignmentSet, plan: Sequence[Segment]) -> list[Token]:
    """Matrix segments emit their source tokens; embedded segments emit the
    target tokens of their minimal span."""
    out: list[Token] = []
    for start, stop, lang in plan:
        if lang is Lang.MATRIX:
            out.extend(pair.source[start:stop])
        else:
            lo, hi = target_span_for(a, start, stop)
            out.extend(pair.target[lo:hi])
    return out


def _check_shape(pair: SentencePair, a: AlignmentSet):
    if a.src_len != len(pair.source) or a.tgt_len != len(pair.target):
        raise LengthMismatchError(
            f"pair {pair.id}: alignment is {a.src_len}x{a.tgt_len}, pair is "
            f"{len(pair.source)}x{len(pair.target)}"
        )


def ec_generations(
    pair: SentencePair, a: AlignmentSet, cfg: TheoryConfig
) -> list[Generation]:
    """All equivalence-constraint candidates for one pair, up to
    cfg.max_candidates."""
    _check_shape(pair, a)
    out = []
    for plan in ec_plans(a):
        replaced = [
            i for start, stop, lang in plan if lang is Lang.EMBEDDED
            for i in range(start, stop)
        ]
        out.append(
            make_generation(pair.id, render_plan(pair, a, plan), Strategy.EC_RAND, replaced)
        )
        if len(out) >= cfg.max_candidates:
            break
    if not out:
        raise NoCandidateError(f"pair {pair.id}: no legal switched labeling")
    return out


def mlf_islands(
    a: AlignmentSet, content: Sequence[int]
) -> Iterator[list[tuple[int, int]]]:
    """Yield non-empty sets of embedded islands: each island is a maximal
    contiguous run of chosen content positions with an exclusive aligned
    span. Depth-first over positions, not-chosen branch first."""
    content = sorted(content)

    def island_ok(start: int, stop: int) -> bool:
        return _embeddable(a, start, stop)

    def rec(idx: int, open_start: int | None, islands: list[tuple[int, int]]):
        if idx == len(content):
            if open_start is not None:
                stop = content[idx - 1] + 1
                if island_ok(open_start, stop):
                    yield islands + [(open_start, stop)]
            elif islands:
                yield islands
            return
        pos = content[idx]
        # close any open island if this position is not adjacent to it
        if open_start is not None and pos != content[idx - 1] + 1:
            stop = content[idx - 1] + 1
            if not island_ok(open_start, stop):
                return
            closed = islands + [(open_start, stop)]
            yield from rec(idx, None, closed)
            return
        # branch 1: do not replace this position
        if open_start is not None:
            stop = pos  # positions open_start..pos-1 are contiguous chosen
            if island_ok(open_start, stop):
                yield from rec(idx + 1, None, islands + [(open_start, stop)])
        else:
            yield from rec(idx + 1, None, islands)
        # branch 2: replace this position
        yield from rec(idx + 1, open_start if open_start is not None else pos, islands)

    yield from rec(0, None, [])


def mlf_generations(
    pair: SentencePair, a: AlignmentSet, cfg: TheoryConfig
) -> list[Generation]:
    """All matrix-frame candidates for one pair, up to cfg.max_candidates.
    Content positions are matrix-tagged tokens not in the function-word
    list; everything else keeps its place in the matrix frame."""
    _check_shape(pair, a)
    content = [
        i
        for i, t in enumerate(pair.source)
        if t.lang is Lang.MATRIX and t.surface not in cfg.function_words
    ]
    out = []
    for islands in mlf_islands(a, content):
        starts = {start: stop for start, stop in islands}
        tokens: list[Token] = []
        replaced: list[int] = []
        i = 0
        while i < len(pair.source):
            if i in starts:
                stop = starts[i]
                lo, hi = target_span_for(a, i, stop)
                tokens.extend(pair.target[lo:hi])
                replaced.extend(range(i, stop))
                i = stop
            else:
                tokens.append(pair.source[i])
                i += 1
        out.append(make_generation(pair.id, tokens, Strategy.ML_RAND, replaced))
        if len(out) >= cfg.max_candidates:
            break
    if not out:
        raise NoCandidateError(
            f"pair {pair.id}: no replaceable content range (function words or "
            "unaligned spans only)"
        )
    return out


def sample_random(cands: Sequence[Generation], rng: random.Random) -> Generation:
    """Uniform choice among candidates."""
    if not cands:
        raise EmptyCandidatesError("no candidates to sample from")
    return rng.choice(list(cands))


def sample_spf(cands: Sequence[Generation], ref_spf: float) -> Generation:
    """The candidate whose SPF is closest to the reference; ties broken by
    fewer switch points, then by enumeration order. Deterministic."""
    if not cands:
        raise EmptyCandidatesError("no candidates to sample from")
    best = min(
        enumerate(cands),
        key=lambda kv: (abs(kv[1].spf - ref_spf), switch_points(kv[1].tokens)[0], kv[0]),
    )
    return best[1]
