"""The Generation record shared by all augmentation strategies."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from cswaug.corpus import NormalizationPolicy, DEFAULT_POLICY, Token, normalize, tokenize
from cswaug.errors import ParseError
from cswaug.metrics import spf as compute_spf


class Strategy(enum.Enum):
    DICT = "dict"
    RAND = "rand"
    PRED = "pred"
    EC_RAND = "ec-rand"
    EC_SPF = "ec-spf"
    ML_RAND = "ml-rand"
    ML_SPF = "ml-spf"
    BT = "bt"


@dataclass(frozen=True)
class Generation:
    """One synthetic code-switched sentence with its provenance."""

    id: str
    tokens: tuple[Token, ...]
    strategy: Strategy
    replaced_src_positions: frozenset[int]
    spf: float

    def __post_init__(self):
        if not self.tokens:
            raise ValueError(f"generation {self.id}: no tokens")
        got = compute_spf(self.tokens)
        if abs(got - self.spf) > 1e-12:
            raise ValueError(
                f"generation {self.id}: spf {self.spf} inconsistent with tokens ({got})"
            )

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


def make_generation(
    pair_id: str,
    tokens: Iterable[Token],
    strategy: Strategy,
    replaced: Iterable[int] = (),
) -> Generation:
    tokens = tuple(tokens)
    return Generation(pair_id, tokens, strategy, frozenset(replaced), compute_spf(tokens))


def write_generations(gens: Iterable[Generation], path, header: str | None = None) -> int:
    """Write generations as TSV rows: id, strategy, text."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(header + "\n")
        for g in gens:
            fh.write(f"{g.id}\t{g.strategy.value}\t{g.text}\n")
            count += 1
    return count


def read_generations(
    path, policy: NormalizationPolicy = DEFAULT_POLICY
) -> dict[str, Generation]:
    """Read a generation TSV back into an id-keyed mapping; text is
    re-normalized and re-tagged, so spf is recomputed. Replaced positions
    are not serialized and come back empty."""
    from cswaug.corpus import _content_lines

    out: dict[str, Generation] = {}
    for line_no, line in enumerate(_content_lines(path)):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"expected 3 columns, got {len(cols)}", path, line_no)
        pair_id, strategy_name, text = cols
        try:
            strategy = Strategy(strategy_name)
        except ValueError:
            raise ParseError(f"unknown strategy {strategy_name!r}", path, line_no)
        norm = normalize(text, policy)
        if not norm.split():
            raise ParseError("empty generation text", path, line_no)
        out[pair_id] = make_generation(pair_id, tokenize(norm), strategy)
    return out
