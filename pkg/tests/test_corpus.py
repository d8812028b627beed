import random

import pytest
from hypothesis import given, settings, strategies as st

from cswaug.corpus import (
    DEFAULT_POLICY,
    Lang,
    NormalizationPolicy,
    intersect_generations,
    load_parallel,
    load_parallel_tsv,
    normalize,
    tag_token_language,
    tokenize,
    write_tsv,
)
from cswaug.errors import EmptySentenceError, LineCountMismatchError


class TestNormalize:
    def test_alif_variants_fold_to_bare_alif(self):
        assert normalize("آكل") == "اكل"
        assert normalize("أحمد إلى ٱسم") == "احمد الي اسم"

    def test_latin_lowercase_and_punct(self):
        assert normalize("Hello!") == "hello"

    def test_dotless_ya_maps_to_dotted(self):
        assert normalize("مبنى") == "مبني"

    def test_tatweel_always_removed(self):
        assert normalize("كتـــاب", NormalizationPolicy(alif_ya=False)) == "كتاب"

    def test_diacritics_stripped_by_default(self):
        assert normalize("كَتَبَ") == "كتب"
        keep = NormalizationPolicy(strip_diacritics=False)
        assert normalize("كَتَبَ", keep) == "كَتَبَ"

    def test_punct_kept_when_disabled(self):
        keep = NormalizationPolicy(strip_punct=False)
        assert normalize("hello!", keep) == "hello!"

    @given(st.text(max_size=60))
    @settings(max_examples=300, deadline=None)
    def test_idempotent_default_policy(self, text):
        once = normalize(text)
        assert normalize(once) == once

    @given(
        st.text(max_size=40),
        st.booleans(), st.booleans(), st.booleans(), st.booleans(),
    )
    @settings(max_examples=200, deadline=None)
    def test_idempotent_any_policy(self, text, a, b, c, d):
        policy = NormalizationPolicy(a, b, c, d)
        once = normalize(text, policy)
        assert normalize(once, policy) == once


class TestTagging:
    def test_latin_token_is_embedded(self):
        assert tag_token_language("kitab") is Lang.EMBEDDED

    def test_arabic_comma_is_other(self):
        assert tag_token_language("،") is Lang.OTHER

    def test_mixed_script_resolves_to_matrix(self):
        assert tag_token_language("ال-semester") is Lang.MATRIX
        # unit enumeration: any Arabic letter anywhere wins
        for tok in ("الsemester", "semesterال", "xالy"):
            assert tag_token_language(tok) is Lang.MATRIX

    def test_digits_are_other(self):
        assert tag_token_language("123") is Lang.OTHER
        assert tag_token_language("12:30") is Lang.OTHER


class TestTokenize:
    def test_scripts_tagged(self):
        toks = tokenize("انا going 123")
        assert [(t.surface, t.lang) for t in toks] == [
            ("انا", Lang.MATRIX),
            ("going", Lang.EMBEDDED),
            ("123", Lang.OTHER),
        ]

    def test_empty_raises(self):
        with pytest.raises(EmptySentenceError):
            tokenize("   ")

    @given(st.lists(st.text(st.characters(blacklist_categories=("Z", "C")), min_size=1),
                    min_size=1, max_size=10))
    @settings(max_examples=200, deadline=None)
    def test_join_round_trip(self, surfaces):
        toks = tokenize(" ".join(surfaces))
        assert [t.surface for t in toks] == surfaces

    @given(st.text(max_size=60))
    @settings(max_examples=200, deadline=None)
    def test_lang_consistent_with_tagger(self, text):
        norm = normalize(text)
        if not norm.split():
            return
        for t in tokenize(norm):
            assert t.lang is tag_token_language(t.surface)


class TestLoadParallel:
    def test_two_line_files(self, tmp_path):
        src = tmp_path / "ar.txt"
        tgt = tmp_path / "en.txt"
        src.write_text("انا هنا\nهو هناك\n", encoding="utf-8")
        tgt.write_text("i am here\nhe is there\n", encoding="utf-8")
        pairs, skips = load_parallel(src, tgt)
        assert [p.id for p in pairs] == ["0", "1"]
        assert not skips

    def test_line_count_mismatch(self, tmp_path):
        src = tmp_path / "a"
        tgt = tmp_path / "b"
        src.write_text("x\ny\nz\n", encoding="utf-8")
        tgt.write_text("x\ny\n", encoding="utf-8")
        with pytest.raises(LineCountMismatchError):
            load_parallel(src, tgt)

    def test_empty_line_skipped_and_reported(self, tmp_path):
        src = tmp_path / "a"
        tgt = tmp_path / "b"
        src.write_text("انا هنا\n...\nهو هناك\n", encoding="utf-8")
        tgt.write_text("here\nok\nthere\n", encoding="utf-8")
        pairs, skips = load_parallel(src, tgt)
        assert [p.id for p in pairs] == ["0", "2"]
        assert len(skips) == 1 and skips[0].row == 1 and skips[0].id == "1"

    def test_tsv_round_trip(self, tmp_path):
        src = tmp_path / "a"
        tgt = tmp_path / "b"
        src.write_text("انا بحب القهوة\nهو هناك\n", encoding="utf-8")
        tgt.write_text("i love coffee\nhe is there\n", encoding="utf-8")
        pairs, _ = load_parallel(src, tgt)
        out = tmp_path / "c.tsv"
        write_tsv(pairs, out, header="# test")
        again, skips = load_parallel_tsv(out)
        assert not skips
        assert again == pairs

    def test_tsv_custom_ids(self, tmp_path):
        path = tmp_path / "c.tsv"
        path.write_text("s42\tانا هنا\there\n", encoding="utf-8")
        pairs, _ = load_parallel_tsv(path)
        assert pairs[0].id == "s42"


class TestIntersectGenerations:
    def test_basic(self):
        sets = [{"a": 1, "b": 2}, {"b": 3, "c": 4}]
        assert intersect_generations(sets) == {"b": 2}

    def test_identity(self):
        s = {"a": 1, "b": 2}
        assert intersect_generations([s, dict(s), dict(s)]) == s

    def test_empty_input_rejected(self):
        with pytest.raises(ValueError):
            intersect_generations([])

    def test_keep_selects_which_values_survive(self):
        sets = [{"a": 1, "b": 2}, {"b": 30, "c": 4}]
        assert intersect_generations(sets, keep=1) == {"b": 30}

    @given(
        st.lists(
            st.dictionaries(st.integers(0, 12).map(str), st.integers(), max_size=10),
            min_size=1,
            max_size=5,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_matches_brute_force_intersection(self, sets):
        got = intersect_generations(sets)
        expected_ids = set(sets[0])
        for s in sets:
            expected_ids &= set(s)
        assert set(got) == expected_ids
        for k, v in got.items():
            assert v == sets[0][k]
        for s in sets:
            assert set(got) <= set(s)
