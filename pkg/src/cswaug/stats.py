"""Correlation and significance-testing machinery.

Pearson p-values use the exact two-sided Student-t distribution computed
through the regularized incomplete beta function, so small-n results are
reproducible to full double precision without external dependencies.
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from cswaug.errors import DegenerateInputError, LengthMismatchError
from cswaug.metrics import sentence_char_errors, sentence_word_errors


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified
    Lentz's method)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError("incomplete beta did not converge")


def _reg_inc_beta(a: float, b: float, x: float, cx: float) -> float:
    """I_x(a, b) with the complement 1-x supplied exactly, so callers that
    know both to full precision (e.g. the t-test) avoid cancellation."""
    if x <= 0.0:
        return 0.0
    if cx <= 0.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(cx)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, cx) / b


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    return _reg_inc_beta(a, b, x, 1.0 - x)


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for a Student-t variable with df degrees of freedom."""
    if df < 1:
        raise ValueError("df must be >= 1")
    if math.isinf(t):
        return 0.0
    return _reg_inc_beta(df / 2.0, 0.5, df / (df + t * t), t * t / (df + t * t))


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p: float
    n: int


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Sample Pearson correlation with a two-sided t-test p-value
    (df = n - 2). Requires n >= 3 and non-constant inputs."""
    if len(x) != len(y):
        raise DegenerateInputError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise DegenerateInputError(f"need at least 3 points, got {n}")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInputError("constant input vector")
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    denom = math.sqrt(sxx) * math.sqrt(syy)
    if denom == 0.0:
        raise DegenerateInputError("input variance underflows")
    r = sxy / denom
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        return CorrelationResult(r, 0.0, n)
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return CorrelationResult(r, student_t_two_sided_p(t, n - 2), n)


def paired_significance(
    refs: Sequence[Sequence[str]],
    hyps_a: Sequence[Sequence[str]],
    hyps_b: Sequence[Sequence[str]],
    metric: str = "wer",
    resamples: int = 1000,
    rng: random.Random | None = None,
) -> float:
    """Two-sided approximate-randomization p-value for the WER/CER
    difference between two systems on a sentence-aligned test set.

    Per-sentence error counts are precomputed once; each resample swaps the
    two systems' counts independently per sentence and recomputes the
    corpus-level difference. The add-one estimate (count+1)/(resamples+1)
    guarantees p in (0, 1]."""
    if not (len(refs) == len(hyps_a) == len(hyps_b)):
        raise LengthMismatchError(
            f"corpora not aligned: {len(refs)}/{len(hyps_a)}/{len(hyps_b)}"
        )
    if metric not in ("wer", "cer"):
        raise ValueError(f"unknown metric {metric!r}")
    if resamples < 1:
        raise ValueError("resamples must be >= 1")
    rng = rng or random.Random()
    per_sentence = sentence_word_errors if metric == "wer" else sentence_char_errors
    err_a = []
    err_b = []
    denom = 0
    for r, a, b in zip(refs, hyps_a, hyps_b):
        err_a.append(sum(per_sentence(r, a)))
        err_b.append(sum(per_sentence(r, b)))
        denom += len(r) if metric == "wer" else len(" ".join(r))
    if denom == 0:
        raise DegenerateInputError("empty reference corpus")
    observed = abs(sum(err_a) - sum(err_b))
    at_least = 0
    n = len(err_a)
    for _ in range(resamples):
        diff = 0
        for k in range(n):
            if rng.random() < 0.5:
                diff += err_b[k] - err_a[k]
            else:
                diff += err_a[k] - err_b[k]
        if abs(diff) >= observed:
            at_least += 1
    return (at_least + 1) / (resamples + 1)


def load_score_table(path) -> dict[str, dict[str, float]]:
    """Read a technique-score CSV (header row names the columns, first
    column keys the technique). Empty cells mean the value is not defined
    for that technique."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in fh if not r.startswith("#")]
    reader = csv.DictReader(rows)
    key = reader.fieldnames[0]
    table: dict[str, dict[str, float]] = {}
    for rec in reader:
        name = rec[key].strip()
        table[name] = {
            col: float(v)
            for col, v in rec.items()
            if col != key and v is not None and v.strip() != ""
        }
    return table


def column_vectors(
    table: Mapping[str, Mapping[str, float]],
    col_x: str,
    col_y: str,
    subset: Sequence[str] | None = None,
) -> tuple[list[float], list[float], list[str]]:
    """Extract two aligned column vectors. With an explicit subset every
    selected technique must define both columns; otherwise rows missing
    either value are dropped."""
    names = list(subset) if subset is not None else list(table)
    xs, ys, used = [], [], []
    for name in names:
        if name not in table:
            raise KeyError(f"unknown technique {name!r}")
        row = table[name]
        if subset is not None and (col_x not in row or col_y not in row):
            missing = col_x if col_x not in row else col_y
            raise DegenerateInputError(f"technique {name!r} has no {missing!r} value")
        if col_x in row and col_y in row:
            xs.append(row[col_x])
            ys.append(row[col_y])
            used.append(name)
    return xs, ys, used
