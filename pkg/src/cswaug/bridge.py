"""File-based data exchange with external neural components: the
switch-point predictor (JSONL requests/tags) and the back-translation
model (line-aligned training files in, TSV outputs back)."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from cswaug.corpus import (
    DEFAULT_POLICY,
    NormalizationPolicy,
    SentencePair,
    _content_lines,
    normalize,
    tokenize,
)
from cswaug.errors import ParseError
from cswaug.generation import Generation, Strategy, make_generation
from cswaug.metrics import is_code_switched

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BridgeIssue:
    """A non-fatal problem found while importing or exporting, with file
    and line context."""

    path: str
    line_no: int | None
    pair_id: str | None
    reason: str


def export_prediction_requests(pairs: Sequence[SentencePair], path, header: str | None = None) -> int:
    """Write one JSONL prediction request per pair, in corpus order."""
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(header + "\n")
        for p in pairs:
            rec = {"id": p.id, "target_tokens": [t.surface for t in p.target]}
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
            count += 1
    return count


def import_predictions(
    path, pairs: Sequence[SentencePair]
) -> tuple[dict[str, list[int]], list[BridgeIssue]]:
    """Read JSONL {"id", "tags"} switch tags. Tag vectors whose length does
    not match the pair's target are rejected per line; duplicate ids keep
    the last occurrence; pairs with no tags are reported, not fatal."""
    tgt_len = {p.id: len(p.target) for p in pairs}
    tags: dict[str, list[int]] = {}
    issues: list[BridgeIssue] = []
    path_s = str(path)
    for line_no, line in enumerate(_content_lines(path)):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as e:
            raise ParseError(f"malformed JSON ({e.msg})", path_s, line_no)
        pid = rec.get("id")
        vec = rec.get("tags")
        if not isinstance(pid, str) or not isinstance(vec, list) or not all(
            v in (0, 1) for v in vec
        ):
            issues.append(BridgeIssue(path_s, line_no, pid, "bad record shape"))
            continue
        if pid not in tgt_len:
            issues.append(BridgeIssue(path_s, line_no, pid, "unknown pair id"))
            continue
        if len(vec) != tgt_len[pid]:
            issues.append(
                BridgeIssue(
                    path_s, line_no, pid,
                    f"tag length {len(vec)} != target length {tgt_len[pid]}",
                )
            )
            continue
        if pid in tags:
            log.warning("%s:%d: duplicate tags for pair %s; keeping the last", path_s, line_no, pid)
            issues.append(BridgeIssue(path_s, line_no, pid, "duplicate id (last wins)"))
        tags[pid] = [int(v) for v in vec]
    for pid in tgt_len:
        if pid not in tags:
            issues.append(BridgeIssue(path_s, None, pid, "no tags for pair"))
    return tags, issues


def export_bt_training(
    rows: Iterable[tuple[str, str, str]], src_out, tgt_out, header: str | None = None
) -> tuple[int, list[BridgeIssue]]:
    """Write line-aligned training files for a model that translates the
    embedded language into code-switched text: source lines are the
    translations, target lines the code-switched sentences. Rows without a
    translation are skipped and reported."""
    count = 0
    issues: list[BridgeIssue] = []
    with open(src_out, "w", encoding="utf-8") as fs, open(
        tgt_out, "w", encoding="utf-8"
    ) as ft:
        if header:
            fs.write(header + "\n")
            ft.write(header + "\n")
        for row_no, (pid, csw_text, translation) in enumerate(rows):
            if not translation.strip():
                issues.append(BridgeIssue(str(src_out), row_no, pid, "missing translation"))
                continue
            if not csw_text.strip():
                issues.append(BridgeIssue(str(tgt_out), row_no, pid, "missing sentence"))
                continue
            fs.write(" ".join(translation.split()) + "\n")
            ft.write(" ".join(csw_text.split()) + "\n")
            count += 1
    return count, issues


def import_bt_outputs(
    path,
    pairs: Sequence[SentencePair],
    policy: NormalizationPolicy = DEFAULT_POLICY,
) -> tuple[list[Generation], list[BridgeIssue]]:
    """Read TSV "id<TAB>text" model outputs into generations: normalized,
    tokenized, language-tagged, SPF computed. Monolingual outputs are kept
    but flagged; unknown ids and empty lines are rejected per line."""
    known = {p.id for p in pairs}
    gens: list[Generation] = []
    issues: list[BridgeIssue] = []
    path_s = str(path)
    for line_no, line in enumerate(_content_lines(path)):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            issues.append(BridgeIssue(path_s, line_no, None, f"expected 2 columns, got {len(cols)}"))
            continue
        pid, text = cols
        if pid not in known:
            issues.append(BridgeIssue(path_s, line_no, pid, "unknown pair id"))
            continue
        norm = normalize(text, policy)
        if not norm.split():
            issues.append(BridgeIssue(path_s, line_no, pid, "empty text after normalization"))
            continue
        gen = make_generation(pid, tokenize(norm), Strategy.BT)
        if not is_code_switched(gen.tokens):
            issues.append(BridgeIssue(path_s, line_no, pid, "monolingual output"))
        gens.append(gen)
    return gens, issues
