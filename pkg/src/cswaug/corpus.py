"""Text normalization, tokenization, language tagging, and corpus I/O.

The matrix language is the Arabic side of a parallel corpus, the embedded
language the English side. Language identity is decided per token from the
script of its letters; tokens without letters (digits, symbols) carry no
language.
"""

from __future__ import annotations

import enum
import logging
import unicodedata
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from cswaug.errors import EmptySentenceError, LineCountMismatchError, ParseError

log = logging.getLogger(__name__)


class Lang(enum.Enum):
    MATRIX = "matrix"
    EMBEDDED = "embedded"
    OTHER = "other"


# Alif variants (hamza above/below, madda, wasla) collapse to bare Alif;
# dotless final Ya collapses to dotted Ya. Tatweel is always dropped.
_ALIF_BARE = "ا"
_ALIF_VARIANTS = "أإآٱ"
_YA_DOTLESS = "ى"
_YA_DOTTED = "ي"
_TATWEEL = "ـ"

_CHAR_MAP = {ord(c): _ALIF_BARE for c in _ALIF_VARIANTS}
_CHAR_MAP[ord(_YA_DOTLESS)] = _YA_DOTTED
_CHAR_MAP[ord(_TATWEEL)] = None

# Harakat and Quranic annotation marks stripped under strip_diacritics.
_DIACRITIC_RANGES = ((0x0610, 0x061A), (0x064B, 0x065F), (0x0670, 0x0670))

_ARABIC_LETTER_RANGES = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)
_LATIN_LETTER_RANGES = (
    (0x0041, 0x005A),
    (0x0061, 0x007A),
    (0x00C0, 0x024F),
    (0x1E00, 0x1EFF),
)


def _in_ranges(cp: int, ranges) -> bool:
    return any(lo <= cp <= hi for lo, hi in ranges)


def is_arabic_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L") and _in_ranges(
        ord(ch), _ARABIC_LETTER_RANGES
    )


def is_latin_letter(ch: str) -> bool:
    return unicodedata.category(ch).startswith("L") and _in_ranges(
        ord(ch), _LATIN_LETTER_RANGES
    )


def _is_diacritic(ch: str) -> bool:
    return _in_ranges(ord(ch), _DIACRITIC_RANGES)


@dataclass(frozen=True)
class NormalizationPolicy:
    """Which normalization steps to apply; the full pipeline is idempotent."""

    alif_ya: bool = True
    strip_punct: bool = True
    lowercase_latin: bool = True
    strip_diacritics: bool = True


DEFAULT_POLICY = NormalizationPolicy()


def normalize(text: str, policy: NormalizationPolicy = DEFAULT_POLICY) -> str:
    """Normalize raw text: Alif/Ya folding, tatweel/diacritic/punctuation
    removal, Latin lowercasing. Total and idempotent for every input."""
    if policy.alif_ya:
        text = text.translate(_CHAR_MAP)
    else:
        text = text.replace(_TATWEEL, "")
    out = []
    for ch in text:
        if policy.strip_diacritics and _is_diacritic(ch):
            continue
        if policy.strip_punct and unicodedata.category(ch).startswith("P"):
            continue
        if policy.lowercase_latin and _in_ranges(ord(ch), _LATIN_LETTER_RANGES):
            out.append(ch.lower())
        else:
            out.append(ch)
    return "".join(out)


def tag_token_language(t: str) -> Lang:
    """Matrix if the token has any Arabic letter, Embedded if it has Latin
    letters only, Other if it has no letters. Mixed-script tokens are Matrix
    so that Arabic clitics attached to English stems do not create spurious
    switch points."""
    has_latin = False
    for ch in t:
        if is_arabic_letter(ch):
            return Lang.MATRIX
        if not has_latin and is_latin_letter(ch):
            has_latin = True
    return Lang.EMBEDDED if has_latin else Lang.OTHER


@dataclass(frozen=True)
class Token:
    surface: str
    lang: Lang

    def __post_init__(self):
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"bad token surface: {self.surface!r}")


def tokenize(text: str) -> list[Token]:
    """Whitespace tokenization with per-token language tags."""
    parts = text.split()
    if not parts:
        raise EmptySentenceError("no tokens after normalization")
    return [Token(p, tag_token_language(p)) for p in parts]


@dataclass(frozen=True)
class SentencePair:
    """One parallel sentence: source is the matrix-language (Arabic) side,
    target the embedded-language (English) side."""

    id: str
    source: tuple[Token, ...]
    target: tuple[Token, ...]

    def __post_init__(self):
        if not self.source or not self.target:
            raise ValueError(f"pair {self.id}: empty side")


@dataclass(frozen=True)
class SkipRecord:
    """A corpus row that was dropped, with its original row number."""

    row: int
    id: str
    reason: str


def _content_lines(path) -> list[str]:
    """Read UTF-8 lines, dropping a leading block of ``#`` provenance lines."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    start = 0
    while start < len(lines) and lines[start].startswith("#"):
        start += 1
    return lines[start:]


def load_parallel(
    src_path,
    tgt_path,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> tuple[list[SentencePair], list[SkipRecord]]:
    """Build sentence pairs from two line-aligned plain-text files.

    Pair ids are zero-based line indices. Rows where either side is empty
    after normalization are skipped and reported, not fatal.
    """
    src_lines = _content_lines(src_path)
    tgt_lines = _content_lines(tgt_path)
    if len(src_lines) != len(tgt_lines):
        raise LineCountMismatchError(
            f"{src_path}: {len(src_lines)} lines vs {tgt_path}: {len(tgt_lines)} lines"
        )
    rows = [(str(i), s, t) for i, (s, t) in enumerate(zip(src_lines, tgt_lines))]
    return _build_pairs(rows, policy)


def load_parallel_tsv(
    path,
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> tuple[list[SentencePair], list[SkipRecord]]:
    """Build sentence pairs from a 3-column TSV file: id, source, target."""
    rows = []
    for line_no, line in enumerate(_content_lines(path)):
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(
                f"expected 3 tab-separated columns, got {len(cols)}", path, line_no
            )
        rows.append((cols[0], cols[1], cols[2]))
    return _build_pairs(rows, policy)


def _build_pairs(rows, policy):
    pairs: list[SentencePair] = []
    skips: list[SkipRecord] = []
    seen_ids: set[str] = set()
    for row, (pid, src_text, tgt_text) in enumerate(rows):
        if pid in seen_ids:
            raise ParseError(f"duplicate pair id {pid!r}", line_no=row)
        seen_ids.add(pid)
        src_norm = normalize(src_text, policy)
        tgt_norm = normalize(tgt_text, policy)
        if not src_norm.split() or not tgt_norm.split():
            side = "source" if not src_norm.split() else "target"
            log.warning("skipping pair %s: empty %s after normalization", pid, side)
            skips.append(SkipRecord(row, pid, f"empty {side} after normalization"))
            continue
        pairs.append(SentencePair(pid, tuple(tokenize(src_norm)), tuple(tokenize(tgt_norm))))
    return pairs, skips


def write_parallel(pairs: Iterable[SentencePair], src_path, tgt_path, header: str | None = None):
    with open(src_path, "w", encoding="utf-8") as fs, open(
        tgt_path, "w", encoding="utf-8"
    ) as ft:
        if header:
            fs.write(header + "\n")
            ft.write(header + "\n")
        for p in pairs:
            fs.write(" ".join(t.surface for t in p.source) + "\n")
            ft.write(" ".join(t.surface for t in p.target) + "\n")


def write_tsv(pairs: Iterable[SentencePair], path, header: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(header + "\n")
        for p in pairs:
            src = " ".join(t.surface for t in p.source)
            tgt = " ".join(t.surface for t in p.target)
            fh.write(f"{p.id}\t{src}\t{tgt}\n")


def write_skip_report(skips: Iterable[SkipRecord], path, header: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(header + "\n")
        for s in skips:
            fh.write(f"{s.id}\t{s.reason}\n")


def intersect_generations(
    sets: Sequence[Mapping[str, Any]], keep: int = 0
) -> dict[str, Any]:
    """Restrict the ``keep``-th id->generation mapping to the ids present in
    every input mapping; insertion order of the kept mapping is preserved."""
    if not sets:
        raise ValueError("need at least one generation set")
    if not 0 <= keep < len(sets):
        raise ValueError(f"keep index {keep} out of range for {len(sets)} sets")
    common = set(sets[0])
    for s in sets[1:]:
        common &= set(s)
    return {k: v for k, v in sets[keep].items() if k in common}
