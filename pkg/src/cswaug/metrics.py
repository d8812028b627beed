"""Switch-point statistics and WER/CER scoring.

The switch point fraction (SPF) of a sentence is the fraction of adjacent
language-bearing token pairs whose languages differ; tokens without a
language (digits, symbols) are skipped and never create or block a switch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from cswaug._kernels import edit_counts
from cswaug.corpus import Lang, Token
from cswaug.errors import LengthMismatchError


def switch_points(tokens: Sequence[Token]) -> tuple[int, int]:
    """(number of language switches, number of language-bearing boundaries)."""
    langs = [t.lang for t in tokens if t.lang is not Lang.OTHER]
    if len(langs) < 2:
        return 0, 0
    switches = sum(1 for a, b in zip(langs, langs[1:]) if a is not b)
    return switches, len(langs) - 1


def spf(tokens: Sequence[Token]) -> float:
    """Switch point fraction in [0, 1]; 0 for sentences with fewer than two
    language-bearing tokens."""
    switches, boundaries = switch_points(tokens)
    return switches / boundaries if boundaries else 0.0


def is_code_switched(tokens: Sequence[Token]) -> bool:
    has_matrix = any(t.lang is Lang.MATRIX for t in tokens)
    has_embedded = any(t.lang is Lang.EMBEDDED for t in tokens)
    return has_matrix and has_embedded


@dataclass(frozen=True)
class CswStats:
    sentences: int
    csw_sentences: int
    csw_fraction: float
    mean_spf: float
    embedded_fraction: float


def csw_stats(corpus: Iterable[Sequence[Token]]) -> CswStats:
    """Corpus-level code-switching statistics: how many sentences mix both
    languages, their mean SPF, and the embedded share of language tokens."""
    sentences = 0
    csw = 0
    spf_sum = 0.0
    matrix_tokens = 0
    embedded_tokens = 0
    for tokens in corpus:
        sentences += 1
        matrix_tokens += sum(1 for t in tokens if t.lang is Lang.MATRIX)
        embedded_tokens += sum(1 for t in tokens if t.lang is Lang.EMBEDDED)
        if is_code_switched(tokens):
            csw += 1
            spf_sum += spf(tokens)
    lang_tokens = matrix_tokens + embedded_tokens
    return CswStats(
        sentences=sentences,
        csw_sentences=csw,
        csw_fraction=csw / sentences if sentences else 0.0,
        mean_spf=spf_sum / csw if csw else 0.0,
        embedded_fraction=embedded_tokens / lang_tokens if lang_tokens else 0.0,
    )


@dataclass(frozen=True)
class EvalReport:
    """Corpus-level error-rate report. wer and cer are percentages;
    the substitution/insertion/deletion counts are word-level."""

    wer: float
    cer: float
    substitutions: int
    insertions: int
    deletions: int
    sentences: int
    ref_words: int
    ref_chars: int


def _ids(seq: Sequence[str], table: dict[str, int]) -> list[int]:
    out = []
    for s in seq:
        v = table.get(s)
        if v is None:
            v = len(table)
            table[s] = v
        out.append(v)
    return out


def sentence_word_errors(ref: Sequence[str], hyp: Sequence[str]) -> tuple[int, int, int]:
    """Word-level (substitutions, insertions, deletions) for one sentence."""
    table: dict[str, int] = {}
    return edit_counts(_ids(ref, table), _ids(hyp, table))


def sentence_char_errors(ref: Sequence[str], hyp: Sequence[str]) -> tuple[int, int, int]:
    """Character-level counts over the space-joined sentences."""
    rc = [ord(c) for c in " ".join(ref)]
    hc = [ord(c) for c in " ".join(hyp)]
    return edit_counts(rc, hc)


def _check_lengths(refs, hyps):
    if len(refs) != len(hyps):
        raise LengthMismatchError(f"{len(refs)} references vs {len(hyps)} hypotheses")


def wer(refs: Sequence[Sequence[str]], hyps: Sequence[Sequence[str]]) -> EvalReport:
    """Micro-averaged word and character error rates over a corpus of
    tokenized sentences; both sides must share one normalization policy."""
    _check_lengths(refs, hyps)
    subs = ins = dels = 0
    cerr = 0
    ref_words = 0
    ref_chars = 0
    for r, h in zip(refs, hyps):
        s, i, d = sentence_word_errors(r, h)
        subs += s
        ins += i
        dels += d
        cs, ci, cd = sentence_char_errors(r, h)
        cerr += cs + ci + cd
        ref_words += len(r)
        ref_chars += len(" ".join(r))
    return EvalReport(
        wer=100.0 * (subs + ins + dels) / ref_words if ref_words else 0.0,
        cer=100.0 * cerr / ref_chars if ref_chars else 0.0,
        substitutions=subs,
        insertions=ins,
        deletions=dels,
        sentences=len(refs),
        ref_words=ref_words,
        ref_chars=ref_chars,
    )


def cer(refs: Sequence[Sequence[str]], hyps: Sequence[Sequence[str]]) -> EvalReport:
    """Alias exposing the character-level rate; same report as wer()."""
    return wer(refs, hyps)
