"""Lexical-replacement strategies: gloss dictionary, alignment-random, and
alignment-with-predicted-switch-points, plus the tag-matching routine that
builds training data for an external switch-point predictor.

All three produce code-switched variants of a source sentence by swapping
matrix-language words for embedded-language material. The number of random
replacements is a fixed percentage of the sentence's matrix tokens,
matching the rate observed in natural code-switched speech.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from cswaug.align import AlignmentSet, span_conflicts, target_span_for
from cswaug.corpus import (
    DEFAULT_POLICY,
    Lang,
    NormalizationPolicy,
    SentencePair,
    Token,
    normalize,
    tag_token_language,
)
from cswaug.errors import (
    LengthMismatchError,
    NoEligiblePositionError,
    ParseError,
    TagLengthMismatchError,
)
from cswaug.generation import Generation, Strategy, make_generation


@dataclass(frozen=True)
class AugmentConfig:
    rate_percent: float = 19.0
    seed: int = 0
    min_replacements: int = 1

    def __post_init__(self):
        if not 0.0 < self.rate_percent <= 100.0:
            raise ValueError(f"rate_percent must be in (0, 100]: {self.rate_percent}")
        if self.min_replacements < 1:
            raise ValueError("min_replacements must be >= 1")


def replacement_count(n_matrix: int, cfg: AugmentConfig) -> int:
    """How many positions to replace: rate percent of the matrix tokens,
    rounded half-up, but never below min_replacements."""
    return max(cfg.min_replacements, math.floor(n_matrix * cfg.rate_percent / 100.0 + 0.5))


class GlossLexicon:
    """Matrix-language surface -> embedded-language gloss strings (a gloss
    may hold several tokens). Surfaces and glosses are stored normalized."""

    def __init__(self, entries: dict[str, tuple[str, ...]]):
        self.entries = entries

    def get(self, surface: str) -> tuple[str, ...]:
        return self.entries.get(surface, ())

    def __len__(self):
        return len(self.entries)

    @classmethod
    def from_tsv(cls, path, policy: NormalizationPolicy = DEFAULT_POLICY) -> "GlossLexicon":
        from cswaug.corpus import _content_lines

        entries: dict[str, list[str]] = {}
        for line_no, line in enumerate(_content_lines(path)):
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ParseError(f"expected 2 columns, got {len(cols)}", path, line_no)
            surface = normalize(cols[0], policy).strip()
            gloss = " ".join(normalize(cols[1], policy).split())
            if not surface or not gloss:
                continue
            bucket = entries.setdefault(surface, [])
            if gloss not in bucket:
                bucket.append(gloss)
        return cls({k: tuple(v) for k, v in entries.items()})


def _gloss_tokens(gloss: str) -> list[Token]:
    return [Token(s, tag_token_language(s)) for s in gloss.split()]


def _n_matrix(pair: SentencePair) -> int:
    return sum(1 for t in pair.source if t.lang is Lang.MATRIX)


def _render_replacements(
    pair: SentencePair, replacements: dict[int, Sequence[Token]]
) -> list[Token]:
    out: list[Token] = []
    for i, tok in enumerate(pair.source):
        if i in replacements:
            out.extend(replacements[i])
        else:
            out.append(tok)
    return out


def dict_replace(
    pair: SentencePair, lex: GlossLexicon, cfg: AugmentConfig, rng: random.Random
) -> Generation:
    """Replace randomly chosen matrix words that have gloss entries with one
    of their glosses (uniform choice; multi-token glosses expand in place)."""
    eligible = [
        i
        for i, t in enumerate(pair.source)
        if t.lang is Lang.MATRIX and lex.get(t.surface)
    ]
    if not eligible:
        raise NoEligiblePositionError(f"pair {pair.id}: no source word has a gloss")
    k = min(replacement_count(_n_matrix(pair), cfg), len(eligible))
    chosen = sorted(rng.sample(eligible, k))
    replacements = {}
    for i in chosen:
        replacements[i] = _gloss_tokens(rng.choice(lex.get(pair.source[i].surface)))
    return make_generation(
        pair.id, _render_replacements(pair, replacements), Strategy.DICT, chosen
    )


def _aligned_eligible(pair: SentencePair, a: AlignmentSet) -> list[int]:
    return [
        i
        for i, t in enumerate(pair.source)
        if t.lang is Lang.MATRIX
        and target_span_for(a, i, i + 1) is not None
        and not span_conflicts(a, i, i + 1)
    ]


def aligned_random_replace(
    pair: SentencePair, a: AlignmentSet, cfg: AugmentConfig, rng: random.Random
) -> Generation:
    """Replace randomly chosen matrix words with their aligned target words.
    A position is eligible when it is aligned and its minimal target span is
    not shared with any other source token."""
    if a.src_len != len(pair.source) or a.tgt_len != len(pair.target):
        raise LengthMismatchError(
            f"pair {pair.id}: alignment is {a.src_len}x{a.tgt_len}, pair is "
            f"{len(pair.source)}x{len(pair.target)}"
        )
    eligible = _aligned_eligible(pair, a)
    if not eligible:
        raise NoEligiblePositionError(f"pair {pair.id}: no replaceable aligned word")
    k = min(replacement_count(_n_matrix(pair), cfg), len(eligible))
    chosen = sorted(rng.sample(eligible, k))
    replacements = {}
    for i in chosen:
        lo, hi = target_span_for(a, i, i + 1)
        replacements[i] = pair.target[lo:hi]
    return make_generation(
        pair.id, _render_replacements(pair, replacements), Strategy.RAND, chosen
    )


def aligned_predicted_replace(
    pair: SentencePair, a: AlignmentSet, tags: Sequence[int]
) -> tuple[Generation, list[tuple[int, int]]]:
    """Inject every maximal run of switch-tagged target tokens whose source
    cover maps back exactly onto it. Deterministic; returns the generation
    plus the (half-open) target runs that could not be mapped."""
    if len(tags) != len(pair.target):
        raise TagLengthMismatchError(
            f"pair {pair.id}: {len(tags)} tags for {len(pair.target)} target tokens"
        )
    runs = []
    j = 0
    while j < len(tags):
        if tags[j]:
            j0 = j
            while j < len(tags) and tags[j]:
                j += 1
            runs.append((j0, j))
        else:
            j += 1
    replaced_ranges: list[tuple[int, int, int, int]] = []
    skipped: list[tuple[int, int]] = []
    for j0, j1 in runs:
        sources = [i for i, j in a.links if j0 <= j < j1]
        if not sources:
            skipped.append((j0, j1))
            continue
        i0, i1 = min(sources), max(sources) + 1
        if target_span_for(a, i0, i1) != (j0, j1):
            skipped.append((j0, j1))
            continue
        replaced_ranges.append((i0, i1, j0, j1))
    out: list[Token] = []
    replaced: set[int] = set()
    starts = {i0: (i1, j0, j1) for i0, i1, j0, j1 in replaced_ranges}
    i = 0
    while i < len(pair.source):
        if i in starts:
            i1, j0, j1 = starts[i]
            out.extend(pair.target[j0:j1])
            replaced.update(range(i, i1))
            i = i1
        else:
            out.append(pair.source[i])
            i += 1
    gen = make_generation(pair.id, out, Strategy.PRED, replaced)
    return gen, skipped


def match_switch_tags(
    csw: Sequence[Token],
    translation: Sequence[Token],
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> list[int]:
    """Tag each translation token 1 when its normalized surface matches an
    embedded token of the code-switched sentence, consuming every embedded
    token at most once, left to right."""
    pool = Counter(
        normalize(t.surface, policy) for t in csw if t.lang is Lang.EMBEDDED
    )
    tags = []
    for t in translation:
        s = normalize(t.surface, policy)
        if pool[s] > 0:
            pool[s] -= 1
            tags.append(1)
        else:
            tags.append(0)
    return tags
