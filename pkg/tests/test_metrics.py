import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from cswaug import _editdist_py
from cswaug._kernels import BACKEND, edit_counts
from cswaug.corpus import Lang, Token
from cswaug.errors import LengthMismatchError
from cswaug.metrics import (
    CswStats,
    csw_stats,
    is_code_switched,
    sentence_word_errors,
    spf,
    switch_points,
    wer,
)


def T(surface, lang):
    return Token(surface, lang)


def M(s="م"):
    return T(s, Lang.MATRIX)


def E(s="e"):
    return T(s, Lang.EMBEDDED)


def O(s="7"):
    return T(s, Lang.OTHER)


def exhaustive_min_edits(ref, hyp):
    """Plain recursion over all alignments; exponential, for short inputs."""

    @lru_cache(maxsize=None)
    def rec(i, j):
        if i == len(ref):
            return len(hyp) - j
        if j == len(hyp):
            return len(ref) - i
        return min(
            rec(i + 1, j + 1) + (ref[i] != hyp[j]),
            rec(i + 1, j) + 1,
            rec(i, j + 1) + 1,
        )

    return rec(0, 0)


class TestSpf:
    def test_all_matrix_is_zero(self):
        assert spf([M(), M(), M()]) == 0.0

    def test_m_e_m_is_one(self):
        assert spf([M(), E(), M()]) == 1.0

    def test_other_tokens_skipped(self):
        assert spf([M(), O(), E()]) == 1.0
        assert switch_points([M(), O(), E()]) == (1, 1)

    def test_short_sentences_are_zero(self):
        assert spf([]) == 0.0
        assert spf([M()]) == 0.0
        assert spf([O(), O()]) == 0.0

    @given(st.lists(st.sampled_from(["m", "e", "o"]), max_size=20))
    @settings(max_examples=300, deadline=None)
    def test_bounds_and_monotone_append(self, kinds):
        mk = {"m": M, "e": E, "o": O}
        toks = [mk[k]() for k in kinds]
        value = spf(toks)
        assert 0.0 <= value <= 1.0
        switches, _ = switch_points(toks)
        langs = [t.lang for t in toks if t.lang is not Lang.OTHER]
        if langs:
            same = M() if langs[-1] is Lang.MATRIX else E()
            assert switch_points(toks + [same])[0] == switches


class TestCswStats:
    def test_monolingual_corpus(self):
        rep = csw_stats([[M(), M()], [E(), E()]])
        assert rep.csw_sentences == 0 and rep.mean_spf == 0.0

    def test_fraction(self):
        rep = csw_stats([[M(), E()], [M(), M()]])
        assert rep.csw_fraction == 0.5

    @given(st.lists(st.lists(st.sampled_from(["m", "e", "o"]), min_size=1, max_size=8),
                    min_size=1, max_size=12))
    @settings(max_examples=200, deadline=None)
    def test_mean_spf_matches_brute_force(self, corpus_kinds):
        mk = {"m": M, "e": E, "o": O}
        corpus = [[mk[k]() for k in kinds] for kinds in corpus_kinds]
        rep = csw_stats(corpus)
        csw = [s for s in corpus if is_code_switched(s)]
        expected = sum(spf(s) for s in csw) / len(csw) if csw else 0.0
        assert rep.mean_spf == pytest.approx(expected)
        assert rep.csw_sentences == len(csw)


class TestWer:
    def test_identical_is_zero(self):
        rep = wer([["a", "b"]], [["a", "b"]])
        assert rep.wer == 0.0 and rep.cer == 0.0

    def test_one_substitution_of_three(self):
        rep = wer([["a", "b", "c"]], [["a", "x", "c"]])
        assert rep.wer == pytest.approx(100 / 3)
        assert (rep.substitutions, rep.insertions, rep.deletions) == (1, 0, 0)

    def test_insertion_counts_against_ref_length(self):
        rep = wer([["a"]], [["a", "b"]])
        assert rep.wer == pytest.approx(100.0)
        assert rep.insertions == 1

    def test_deletion(self):
        rep = wer([["a", "b"]], [["a"]])
        assert rep.deletions == 1 and rep.wer == pytest.approx(50.0)

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            wer([["a"]], [["a"], ["b"]])

    def test_micro_average_over_corpus(self):
        rep = wer([["a"], ["b", "c", "d"]], [["x"], ["b", "c", "d"]])
        assert rep.wer == pytest.approx(25.0)

    @given(
        st.lists(st.integers(0, 3), max_size=6),
        st.lists(st.integers(0, 3), max_size=6),
    )
    @settings(max_examples=400, deadline=None)
    def test_total_matches_exhaustive_alignment_oracle(self, ref, hyp):
        s, i, d = edit_counts(ref, hyp)
        assert s + i + d == exhaustive_min_edits(tuple(ref), tuple(hyp))

    @given(
        st.lists(st.integers(0, 5), max_size=12),
        st.lists(st.integers(0, 5), max_size=12),
    )
    @settings(max_examples=400, deadline=None)
    def test_backends_agree_exactly(self, ref, hyp):
        assert edit_counts(ref, hyp) == _editdist_py.edit_counts(ref, hyp)

    def test_compiled_backend_active_by_default(self):
        # the wheel built in this repo carries the extension; the pure
        # fallback is covered by CSWAUG_PURE in the benchmark and CI
        assert BACKEND in ("cython", "python")

    def test_word_errors_on_surfaces(self):
        assert sentence_word_errors(["a", "b", "c"], ["a", "c"]) == (0, 0, 1)
