import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from cswaug.align import (
    AlignmentSet,
    is_monotonic_boundary,
    span_conflicts,
    target_span_for,
)
from cswaug.corpus import Lang, tokenize
from cswaug.errors import EmptyCandidatesError, NoCandidateError
from cswaug.generation import Strategy, make_generation
from cswaug.theoryaug import (
    TheoryConfig,
    ec_generations,
    ec_plans,
    load_function_words,
    mlf_generations,
    render_plan,
    sample_random,
    sample_spf,
)

from conftest import make_alignment, make_pair

AR = ["كتاب", "بيت", "قلم", "ولد", "شمس", "قمر"]


def ar_pair(src_len, tgt_len, pid="0"):
    return make_pair(pid, " ".join(AR[:src_len]), " ".join(f"w{j}" for j in range(tgt_len)))


def oracle_labelings(a):
    """Brute force: every switched token labeling whose change points are all
    monotonic and whose embedded runs have exclusive target spans."""
    n = a.src_len
    out = set()
    for labels in itertools.product((Lang.MATRIX, Lang.EMBEDDED), repeat=n):
        if len(set(labels)) < 2:
            continue
        ok = all(
            labels[b] == labels[b - 1] or is_monotonic_boundary(a, b)
            for b in range(1, n)
        )
        i = 0
        while i < n and ok:
            j = i
            while j < n and labels[j] == labels[i]:
                j += 1
            if labels[i] is Lang.EMBEDDED and (
                target_span_for(a, i, j) is None or span_conflicts(a, i, j)
            ):
                ok = False
            i = j
        if ok:
            out.add(labels)
    return out


def plan_labels(plan, n):
    labels = [None] * n
    for s, e, lang in plan:
        for i in range(s, e):
            labels[i] = lang
    return tuple(labels)


class TestEcGenerations:
    def test_two_token_identity_gives_both_single_switch_plans(self):
        pair = ar_pair(2, 2)
        a = make_alignment({(0, 0), (1, 1)}, 2, 2)
        cands = ec_generations(pair, a, TheoryConfig())
        assert sorted(g.text for g in cands) == sorted(["كتاب w1", "w0 بيت"])

    def test_crossing_two_tokens_has_no_candidate(self):
        pair = ar_pair(2, 2)
        a = make_alignment({(0, 1), (1, 0)}, 2, 2)
        with pytest.raises(NoCandidateError):
            ec_generations(pair, a, TheoryConfig())

    def test_truncation_to_one(self):
        pair = ar_pair(3, 3)
        a = make_alignment({(i, i) for i in range(3)}, 3, 3)
        cands = ec_generations(pair, a, TheoryConfig(max_candidates=1))
        assert len(cands) == 1

    def test_exhaustive_oracle_all_shapes_up_to_4(self):
        checked = 0
        for sl in (1, 2, 3, 4):
            for tl in (1, 2, 3, 4):
                cells = [(i, j) for i in range(sl) for j in range(tl)]
                for mask in range(2 ** len(cells)):
                    links = frozenset(c for k, c in enumerate(cells) if mask >> k & 1)
                    a = AlignmentSet(links, sl, tl)
                    got = {plan_labels(p, sl) for p in ec_plans(a)}
                    assert got == oracle_labelings(a), (sl, tl, links)
                    checked += 1
        assert checked == sum(2 ** (s * t) for s in range(1, 5) for t in range(1, 5))

    def test_every_candidate_boundary_is_monotonic_post_hoc(self):
        rnd = random.Random(4)
        for _ in range(250):
            sl, tl = rnd.randint(2, 6), rnd.randint(2, 6)
            links = frozenset(
                (rnd.randrange(sl), rnd.randrange(tl))
                for _ in range(rnd.randint(0, sl * tl))
            )
            a = AlignmentSet(links, sl, tl)
            for plan in ec_plans(a):
                labels = plan_labels(plan, sl)
                for b in range(1, sl):
                    if labels[b] != labels[b - 1]:
                        assert is_monotonic_boundary(a, b)

    def test_all_matrix_plan_renders_source_verbatim(self):
        pair = ar_pair(4, 4)
        a = make_alignment({(i, i) for i in range(4)}, 4, 4)
        rendered = render_plan(pair, a, [(0, 4, Lang.MATRIX)])
        assert [t.surface for t in rendered] == [t.surface for t in pair.source]

    def test_candidates_carry_replaced_positions_and_spf(self):
        pair = ar_pair(3, 3)
        a = make_alignment({(i, i) for i in range(3)}, 3, 3)
        for g in ec_generations(pair, a, TheoryConfig()):
            assert g.replaced_src_positions
            assert 0.0 < g.spf <= 1.0


class TestMlfGenerations:
    def test_function_word_immutable(self):
        pair = make_pair("0", "في بيت", "in house")
        a = make_alignment({(0, 0), (1, 1)}, 2, 2)
        cfg = TheoryConfig(function_words=frozenset({"في"}))
        cands = mlf_generations(pair, a, cfg)
        assert [g.text for g in cands] == ["في house"]

    def test_all_function_words_no_candidate(self):
        pair = make_pair("0", "في من", "in from")
        a = make_alignment({(0, 0), (1, 1)}, 2, 2)
        cfg = TheoryConfig(function_words=frozenset({"في", "من"}))
        with pytest.raises(NoCandidateError):
            mlf_generations(pair, a, cfg)

    def test_two_content_words_give_three_candidates(self):
        pair = ar_pair(2, 2)
        a = make_alignment({(0, 0), (1, 1)}, 2, 2)
        cands = mlf_generations(pair, a, TheoryConfig())
        assert sorted(g.text for g in cands) == sorted(
            ["كتاب w1", "w0 بيت", "w0 w1"]
        )

    def test_function_words_survive_in_order(self):
        rnd = random.Random(9)
        fw = frozenset({"في", "من", "على"})
        for _ in range(250):
            n = rnd.randint(2, 6)
            words = [rnd.choice(list(fw) + AR[:3]) for _ in range(n)]
            pair = make_pair("0", " ".join(words), " ".join(f"w{j}" for j in range(n)))
            a = make_alignment({(i, i) for i in range(n)}, n, n)
            cfg = TheoryConfig(function_words=fw)
            try:
                cands = mlf_generations(pair, a, cfg)
            except NoCandidateError:
                assert all(
                    t.surface in fw or t.lang is not Lang.MATRIX for t in pair.source
                )
                continue
            source_fw = [t.surface for t in pair.source if t.surface in fw]
            for g in cands:
                kept_fw = [t.surface for t in g.tokens if t.surface in fw]
                assert kept_fw == source_fw

    def test_shared_span_only_replaceable_as_merged_island(self):
        # two content words sharing one target token: neither alone owns the
        # span, but the merged island does
        pair = ar_pair(2, 1)
        a = make_alignment({(0, 0), (1, 0)}, 2, 1)
        cands = mlf_generations(pair, a, TheoryConfig())
        assert [g.text for g in cands] == ["w0"]

    def test_island_shared_with_function_word_is_no_candidate(self):
        pair = make_pair("0", "في بيت", "in")
        a = make_alignment({(0, 0), (1, 0)}, 2, 1)
        cfg = TheoryConfig(function_words=frozenset({"في"}))
        with pytest.raises(NoCandidateError):
            mlf_generations(pair, a, cfg)

    def test_truncation(self):
        pair = ar_pair(6, 6)
        a = make_alignment({(i, i) for i in range(6)}, 6, 6)
        cands = mlf_generations(pair, a, TheoryConfig(max_candidates=5))
        assert len(cands) == 5


class TestSampling:
    def _cands(self, spfs):
        out = []
        for k, s in enumerate(spfs):
            # construct a token list with the desired spf: s = switches/boundaries
            # use [M E M E ...] prefixes; simpler: synthesize via alternating runs
            n_b = 4  # 5 language tokens -> 4 boundaries
            switches = round(s * n_b)
            langs = []
            cur = Lang.MATRIX
            langs.append(cur)
            for b in range(n_b):
                if b < switches:
                    cur = Lang.EMBEDDED if cur is Lang.MATRIX else Lang.MATRIX
                langs.append(cur)
            toks = [
                tokenize("كتاب")[0] if lang is Lang.MATRIX else tokenize("w")[0]
                for lang in langs
            ]
            out.append(make_generation(str(k), toks, Strategy.EC_RAND))
        return out

    def test_singleton_random(self, rng):
        cands = self._cands([0.5])
        assert sample_random(cands, rng) is cands[0]

    def test_empty_rejected(self, rng):
        with pytest.raises(EmptyCandidatesError):
            sample_random([], rng)
        with pytest.raises(EmptyCandidatesError):
            sample_spf([], 0.22)

    def test_random_uniformity_chi_square(self):
        cands = self._cands([0.25, 0.5, 0.75, 1.0])
        counts = Counter()
        rnd = random.Random(123)
        for _ in range(1000):
            counts[sample_random(cands, rnd).id] += 1
        expected = 1000 / 4
        chi2 = sum((counts[str(i)] - expected) ** 2 / expected for i in range(4))
        assert chi2 < 11.345  # 1% critical value, df = 3

    def test_spf_picks_nearest(self):
        cands = self._cands([0.5, 0.25])
        assert sample_spf(cands, 0.22).spf == 0.25

    def test_spf_tie_breaks_on_fewer_switches(self):
        # 0.25 and 0.75 are equidistant from 0.5; 0.25 has fewer switches
        cands = self._cands([0.75, 0.25])
        assert sample_spf(cands, 0.5).spf == 0.25

    def test_spf_singleton(self):
        cands = self._cands([1.0])
        assert sample_spf(cands, 0.0) is cands[0]

    @given(st.lists(st.sampled_from([0.0, 0.25, 0.5, 0.75, 1.0]), min_size=1, max_size=8),
           st.floats(0, 1))
    @settings(max_examples=200, deadline=None)
    def test_spf_result_is_minimal(self, spfs, ref):
        spfs = [s for s in spfs if s > 0] or [0.25]
        cands = self._cands(spfs)
        best = sample_spf(cands, ref)
        assert best in cands
        assert all(abs(best.spf - ref) <= abs(c.spf - ref) + 1e-12 for c in cands)


class TestFunctionWordFile:
    def test_load_normalizes(self, tmp_path):
        path = tmp_path / "fw.txt"
        path.write_text("# comment\nفِي\nمن\n\n", encoding="utf-8")
        fw = load_function_words(path)
        assert fw == {"في", "من"}
