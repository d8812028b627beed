"""Interpolated Kneser-Ney n-gram language model with a closed vocabulary.

Counts at the highest order are raw; every lower order uses continuation
counts (distinct left extensions). The recursion bottoms out in a uniform
distribution over the prediction vocabulary, which keeps every conditional
distribution normalized and gives unseen words (mapped to the UNK symbol)
non-zero probability.
"""

from __future__ import annotations

import math
from collections import defaultdict
from typing import Iterable, Sequence

from cswaug.errors import EmptyCorpusError, ParseError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"

_FORMAT_TAG = "cswaug-ngram"
_FORMAT_VERSION = 1


class KneserNeyModel:
    """Immutable after training; safe to share across threads for scoring."""

    def __init__(self, order: int, discount: float, min_count: int):
        if order < 1:
            raise ValueError("order must be >= 1")
        if not 0.0 < discount < 1.0:
            raise ValueError("discount must be in (0, 1)")
        if min_count < 1:
            raise ValueError("min_count must be >= 1")
        self.order = order
        self.discount = discount
        self.min_count = min_count
        self.vocab: frozenset[str] = frozenset()
        self._support: list[str] = []
        # counts[k] maps a length-k context tuple to {word: count}; the
        # top level holds raw counts, lower levels continuation counts.
        self._counts: list[dict[tuple, dict[str, int]]] = []
        self._totals: list[dict[tuple, int]] = []

    def _install_top(self, top: dict[tuple, dict[str, int]]):
        """Derive continuation-count levels below the raw top level."""
        levels: list[dict[tuple, dict[str, int]]] = [dict() for _ in range(self.order)]
        levels[-1] = {ctx: dict(words) for ctx, words in top.items()}
        for k in range(self.order - 2, -1, -1):
            cont: dict[tuple, dict[str, int]] = defaultdict(lambda: defaultdict(int))
            for ctx, words in levels[k + 1].items():
                shorter = ctx[1:] if ctx else ()
                for w in words:
                    cont[shorter][w] += 1
            levels[k] = {ctx: dict(words) for ctx, words in cont.items()}
        self._counts = levels
        self._totals = [
            {ctx: sum(words.values()) for ctx, words in level.items()}
            for level in levels
        ]

    # -- training ---------------------------------------------------------

    def _fit(self, corpus: Sequence[Sequence[str]]):
        raw = defaultdict(int)
        for sent in corpus:
            for w in sent:
                raw[w] += 1
        kept = {w for w, c in raw.items() if c >= self.min_count}
        self.vocab = frozenset(kept | {UNK, BOS, EOS})
        self._support = sorted((kept | {UNK, EOS}))

        top: dict[tuple, dict[str, int]] = defaultdict(lambda: defaultdict(int))
        ctx_len = self.order - 1
        for sent in corpus:
            mapped = [w if w in kept else UNK for w in sent]
            seq = [BOS] * ctx_len + mapped + [EOS]
            for pos in range(ctx_len, len(seq)):
                ctx = tuple(seq[pos - ctx_len : pos])
                top[ctx][seq[pos]] += 1
        self._install_top(top)

    # -- scoring ----------------------------------------------------------

    def _prob(self, level: int, ctx: tuple, w: str) -> float:
        if level == 0:
            base = 1.0 / len(self._support)
            words = self._counts[0].get((), {})
            total = self._totals[0].get((), 0)
            if total == 0:
                return base
            c = words.get(w, 0)
            types = len(words)
            return (max(c - self.discount, 0.0) + self.discount * types * base) / total
        total = self._totals[level].get(ctx, 0)
        if total == 0:
            return self._prob(level - 1, ctx[1:], w)
        words = self._counts[level][ctx]
        c = words.get(w, 0)
        types = len(words)
        lower = self._prob(level - 1, ctx[1:], w)
        return (max(c - self.discount, 0.0) + self.discount * types * lower) / total

    def prob(self, context: Sequence[str], word: str) -> float:
        """p(word | context); context is the preceding tokens (any length),
        out-of-vocabulary tokens are mapped to UNK."""
        w = word if word in self.vocab else UNK
        ctx_len = self.order - 1
        ctx = [BOS] * ctx_len + [t if t in self.vocab else UNK for t in context]
        return self._prob(self.order - 1, tuple(ctx[len(ctx) - ctx_len :]) if ctx_len else (), w)

    def logprob_sentence(self, sent: Sequence[str]) -> tuple[float, int]:
        """(sum of natural-log probabilities, number of scored tokens);
        the end-of-sentence symbol is scored, padding is not."""
        ctx_len = self.order - 1
        mapped = [w if w in self.vocab else UNK for w in sent]
        seq = [BOS] * ctx_len + mapped + [EOS]
        lp = 0.0
        for pos in range(ctx_len, len(seq)):
            ctx = tuple(seq[pos - ctx_len : pos])
            lp += math.log(self._prob(self.order - 1, ctx, seq[pos]))
        return lp, len(mapped) + 1

    # -- persistence ------------------------------------------------------

    def save(self, path):
        """Versioned text dump: header, vocabulary, then the top-level raw
        count table (lower levels are re-derived on load)."""
        top = self._counts[-1]
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(
                f"#{_FORMAT_TAG} v{_FORMAT_VERSION} order={self.order} "
                f"discount={self.discount!r} min_count={self.min_count}\n"
            )
            fh.write(f"vocab {len(self.vocab)}\n")
            for w in sorted(self.vocab):
                fh.write(w + "\n")
            n_rows = sum(len(words) for words in top.values())
            fh.write(f"counts {n_rows}\n")
            for ctx in sorted(top):
                for w in sorted(top[ctx]):
                    fh.write(f"{' '.join(ctx)}\t{w}\t{top[ctx][w]}\n")

    @classmethod
    def load(cls, path) -> "KneserNeyModel":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().strip()
            parts = header.lstrip("#").split()
            if len(parts) != 5 or parts[0] != _FORMAT_TAG or parts[1] != f"v{_FORMAT_VERSION}":
                raise ParseError(f"not a {_FORMAT_TAG} v{_FORMAT_VERSION} file", path, 0)
            fields = dict(kv.split("=", 1) for kv in parts[2:])
            model = cls(int(fields["order"]), float(fields["discount"]), int(fields["min_count"]))
            tag, n = fh.readline().split()
            if tag != "vocab":
                raise ParseError("expected vocab section", path, 1)
            vocab = {fh.readline().rstrip("\n") for _ in range(int(n))}
            tag, n_rows = fh.readline().split()
            if tag != "counts":
                raise ParseError("expected counts section", path)
            top: dict[tuple, dict[str, int]] = defaultdict(dict)
            for _ in range(int(n_rows)):
                ctx_s, w, c = fh.readline().rstrip("\n").split("\t")
                top[tuple(ctx_s.split()) if ctx_s else ()][w] = int(c)
        model.vocab = frozenset(vocab)
        model._support = sorted(vocab - {BOS})
        model._install_top(top)
        return model


def train(
    corpus: Sequence[Sequence[str]],
    order: int = 3,
    discount: float = 0.75,
    min_count: int = 1,
) -> KneserNeyModel:
    """Train an interpolated Kneser-Ney model; sentences are sequences of
    token surfaces."""
    corpus = [list(s) for s in corpus if s]
    if not corpus:
        raise EmptyCorpusError("no non-empty training sentences")
    model = KneserNeyModel(order, discount, min_count)
    model._fit(corpus)
    return model


def perplexity(model: KneserNeyModel, corpus: Iterable[Sequence[str]]) -> float:
    """exp of the mean negative log probability per scored token (sentence
    ends included; unknown words scored as UNK). Always >= 1."""
    lp = 0.0
    count = 0
    for sent in corpus:
        if not sent:
            continue
        s_lp, s_n = model.logprob_sentence(sent)
        lp += s_lp
        count += s_n
    if count == 0:
        raise ValueError("no tokens to score")
    return math.exp(-lp / count)


def vocabulary(corpus: Iterable[Sequence[str]]) -> set[str]:
    """Surface vocabulary of a tokenized corpus (no special symbols)."""
    vocab: set[str] = set()
    for sent in corpus:
        vocab.update(sent)
    return vocab


def oov_rate(train_vocab: set[str], test: Sequence[Sequence[str]]) -> float:
    """Percentage of test tokens absent from the training vocabulary."""
    total = sum(len(s) for s in test)
    if total == 0:
        raise ValueError("empty test corpus")
    unseen = sum(1 for s in test for w in s if w not in train_vocab)
    return 100.0 * unseen / total
