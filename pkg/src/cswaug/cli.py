"""Command-line surface for the augmentation and evaluation pipeline.

Every output file starts with a provenance comment line carrying the tool
version, the resolved-config hash, and the seed, so any output can be
reproduced byte-for-byte by re-running with the same configuration. Flags
override values from an optional key = value config file.
"""

from __future__ import annotations

import argparse
import functools
import hashlib
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from cswaug import __version__
from cswaug import bridge, corpus, generation, metrics, ngramlm, reproduce, stats
from cswaug.align import read_pharaoh_file
from cswaug.corpus import DEFAULT_POLICY, NormalizationPolicy, SkipRecord
from cswaug.errors import (
    CswAugError,
    EmptyCandidatesError,
    MissingResourceError,
    NoCandidateError,
    NoEligiblePositionError,
    ParseError,
    TagLengthMismatchError,
)
from cswaug.generation import Strategy, make_generation, read_generations, write_generations
from cswaug.lexaug import (
    AugmentConfig,
    GlossLexicon,
    aligned_predicted_replace,
    aligned_random_replace,
    dict_replace,
    match_switch_tags,
)
from cswaug.theoryaug import (
    TheoryConfig,
    ec_generations,
    load_function_words,
    mlf_generations,
    sample_random,
    sample_spf,
)


def load_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` config file; # starts a comment."""
    out: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", path, line_no)
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip().strip('"')
    return out


def resolve(args: argparse.Namespace, config: dict[str, str], key: str, default, cast=str):
    """Explicit flag > config file > default."""
    flag_val = getattr(args, key, None)
    if flag_val is not None:
        return flag_val
    if key in config:
        raw = config[key]
        if cast is bool:
            return raw.lower() in ("1", "true", "yes")
        return cast(raw)
    return default


def provenance(cmd: str, options: dict, seed=None) -> str:
    blob = "\n".join(f"{k}={options[k]}" for k in sorted(options) if options[k] is not None)
    digest = hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]
    seed_part = "-" if seed is None else str(seed)
    return f"# cswaug={__version__} cmd={cmd} config=sha256:{digest} seed={seed_part}"


def derive_rng(seed: int, pair_id: str) -> random.Random:
    """Per-sentence stream keyed on (seed, id) so parallel and serial runs
    produce identical output."""
    digest = hashlib.blake2b(f"{seed}:{pair_id}".encode("utf-8"), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _require(condition: bool, message: str):
    if not condition:
        raise MissingResourceError(message)


def _load_corpus(args, policy):
    if getattr(args, "tsv", None):
        return corpus.load_parallel_tsv(args.tsv, policy)
    _require(
        getattr(args, "src", None) is not None and getattr(args, "tgt", None) is not None,
        "provide either --tsv FILE or both --src and --tgt",
    )
    return corpus.load_parallel(args.src, args.tgt, policy)


def _load_lines(path, policy):
    """Tokenized sentences from a plain text file, one per line; empty
    lines are dropped."""
    out = []
    for line in corpus._content_lines(path):
        norm = corpus.normalize(line, policy)
        if norm.split():
            out.append(corpus.tokenize(norm))
    return out


def _surfaces(sentences):
    return [[t.surface for t in s] for s in sentences]


# --- augment -------------------------------------------------------------

_STRATEGIES = ("dict", "rand", "pred", "ec-rand", "ec-spf", "ml-rand", "ml-spf")


def _augment_one(task, strategy, aug_cfg, theory_cfg, lexicon_entries, seed):
    """Produce one generation (or a skip record) for one pair; runs in
    worker processes, so everything passed in must be picklable."""
    pair, aln, tags = task
    rng = derive_rng(seed, pair.id)
    extra_issues = []
    try:
        if strategy == "dict":
            gen = dict_replace(pair, GlossLexicon(lexicon_entries), aug_cfg, rng)
        elif strategy == "rand":
            gen = aligned_random_replace(pair, aln, aug_cfg, rng)
        elif strategy == "pred":
            if tags is None:
                return ("skip", pair.id, "no switch tags for pair")
            gen, skipped_runs = aligned_predicted_replace(pair, aln, tags)
            extra_issues = [
                f"unmappable tagged run [{j0},{j1})" for j0, j1 in skipped_runs
            ]
        elif strategy in ("ec-rand", "ec-spf"):
            cands = ec_generations(pair, aln, theory_cfg)
            gen = (
                sample_random(cands, rng)
                if strategy == "ec-rand"
                else sample_spf(cands, theory_cfg.ref_spf)
            )
            gen = make_generation(
                pair.id, gen.tokens, Strategy(strategy), gen.replaced_src_positions
            )
        elif strategy in ("ml-rand", "ml-spf"):
            cands = mlf_generations(pair, aln, theory_cfg)
            gen = (
                sample_random(cands, rng)
                if strategy == "ml-rand"
                else sample_spf(cands, theory_cfg.ref_spf)
            )
            gen = make_generation(
                pair.id, gen.tokens, Strategy(strategy), gen.replaced_src_positions
            )
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
    except (NoCandidateError, NoEligiblePositionError, EmptyCandidatesError,
            TagLengthMismatchError) as e:
        return ("skip", pair.id, str(e))
    return ("ok", gen, extra_issues)


def cmd_augment(args, config) -> int:
    strategy = resolve(args, config, "strategy", None)
    _require(strategy in _STRATEGIES, f"--strategy must be one of {', '.join(_STRATEGIES)}")
    seed = resolve(args, config, "seed", 0, int)
    rate = resolve(args, config, "rate", 19.0, float)
    min_repl = resolve(args, config, "min_replacements", 1, int)
    ref_spf = resolve(args, config, "ref_spf", 0.22, float)
    max_candidates = resolve(args, config, "max_candidates", 64, int)
    jobs = resolve(args, config, "jobs", int(os.environ.get("CSWAUG_JOBS", "1")), int)
    policy = DEFAULT_POLICY

    pairs, load_skips = _load_corpus(args, policy)
    aug_cfg = AugmentConfig(rate_percent=rate, seed=seed, min_replacements=min_repl)

    lexicon_entries = {}
    if strategy == "dict":
        _require(args.lexicon is not None, "strategy dict needs --lexicon FILE")
        lexicon_entries = GlossLexicon.from_tsv(args.lexicon, policy).entries

    alignments = {}
    if strategy != "dict":
        _require(args.alignments is not None, f"strategy {strategy} needs --alignments FILE")
        alignments = read_pharaoh_file(
            args.alignments, pairs, load_skips, flip_links=bool(args.flip_alignments)
        )

    function_words = frozenset()
    if strategy.startswith("ml-"):
        _require(args.function_words is not None,
                 f"strategy {strategy} needs --function-words FILE")
        function_words = load_function_words(args.function_words, policy)
    theory_cfg = TheoryConfig(
        ref_spf=ref_spf, max_candidates=max_candidates, function_words=function_words
    )

    tags_map = {}
    if strategy == "pred":
        _require(args.tags is not None, "strategy pred needs --tags FILE (JSONL)")
        tags_map, _ = bridge.import_predictions(args.tags, pairs)

    options = {
        "strategy": strategy, "seed": seed, "rate": rate,
        "min_replacements": min_repl, "ref_spf": ref_spf,
        "max_candidates": max_candidates,
        "src": args.src, "tgt": args.tgt, "tsv": args.tsv,
        "lexicon": args.lexicon, "alignments": args.alignments,
        "tags": args.tags, "function_words": args.function_words,
        "flip_alignments": bool(args.flip_alignments),
    }
    header = provenance("augment", options, seed)

    tasks = [(p, alignments.get(p.id), tags_map.get(p.id)) for p in pairs]
    worker = functools.partial(
        _augment_one,
        strategy=strategy,
        aug_cfg=aug_cfg,
        theory_cfg=theory_cfg,
        lexicon_entries=lexicon_entries,
        seed=seed,
    )
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, tasks, chunksize=32))
    else:
        results = [worker(t) for t in tasks]

    gens = []
    skips = [SkipRecord(s.row, s.id, s.reason) for s in load_skips]
    for res in results:
        if res[0] == "ok":
            gens.append(res[1])
            for issue in res[2]:
                skips.append(SkipRecord(-1, res[1].id, issue))
        else:
            skips.append(SkipRecord(-1, res[1], res[2]))
    write_generations(gens, args.output, header)
    report_path = args.skip_report or f"{args.output}.skips.tsv"
    corpus.write_skip_report(skips, report_path, header)

    if args.dump_candidates and strategy.startswith(("ec-", "ml-")):
        enumerate_cands = ec_generations if strategy.startswith("ec-") else mlf_generations
        with open(args.dump_candidates, "w", encoding="utf-8") as fh:
            fh.write(header + "\n")
            for pair in pairs:
                try:
                    cands = enumerate_cands(pair, alignments[pair.id], theory_cfg)
                except CswAugError:
                    continue
                for g in cands:
                    fh.write(f"{g.id}\t{g.spf:.4f}\t{g.text}\n")

    print(f"wrote {len(gens)} generations to {args.output} "
          f"({len(skips)} skip/warning records)")
    return 0


# --- other subcommands ----------------------------------------------------

def _write_csv_rows(path_or_none, header, rows):
    lines = [header, "metric,value,n"] if header else ["metric,value,n"]
    lines += [f"{m},{v},{n}" for m, v, n in rows]
    text = "\n".join(lines) + "\n"
    if path_or_none:
        with open(path_or_none, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_tag(args, config) -> int:
    policy = DEFAULT_POLICY
    pairs, _ = corpus.load_parallel(args.csw, args.translations, policy)
    header = provenance("tag", {"csw": args.csw, "translations": args.translations})
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for p in pairs:
            tags = match_switch_tags(p.source, p.target, policy)
            fh.write(json.dumps({"id": p.id, "tags": tags}) + "\n")
    print(f"wrote tags for {len(pairs)} pairs to {args.output}")
    return 0


def cmd_stats(args, config) -> int:
    sentences = _load_lines(args.input, DEFAULT_POLICY)
    rep = metrics.csw_stats(sentences)
    header = provenance("stats", {"input": args.input})
    _write_csv_rows(args.output, header, [
        ("sentences", rep.sentences, rep.sentences),
        ("csw_sentences", rep.csw_sentences, rep.sentences),
        ("csw_fraction", f"{rep.csw_fraction:.6f}", rep.sentences),
        ("mean_spf", f"{rep.mean_spf:.6f}", rep.csw_sentences),
        ("embedded_fraction", f"{rep.embedded_fraction:.6f}", rep.sentences),
    ])
    return 0


def cmd_ppl(args, config) -> int:
    order = resolve(args, config, "order", 3, int)
    discount = resolve(args, config, "discount", 0.75, float)
    min_count = resolve(args, config, "min_count", 1, int)
    test = _surfaces(_load_lines(args.test, DEFAULT_POLICY))
    if args.model:
        model = ngramlm.KneserNeyModel.load(args.model)
    else:
        _require(args.train is not None, "ppl needs --train FILE or --model FILE")
        train_corpus = _surfaces(_load_lines(args.train, DEFAULT_POLICY))
        model = ngramlm.train(train_corpus, order, discount, min_count)
    if args.save_model:
        model.save(args.save_model)
    value = ngramlm.perplexity(model, test)
    n_tokens = sum(len(s) + 1 for s in test)
    header = provenance("ppl", {
        "train": args.train, "test": args.test, "model": args.model,
        "order": order, "discount": discount, "min_count": min_count,
    })
    _write_csv_rows(args.output, header, [("ppl", f"{value:.4f}", n_tokens)])
    return 0


def cmd_oov(args, config) -> int:
    train_corpus = _surfaces(_load_lines(args.train, DEFAULT_POLICY))
    test = _surfaces(_load_lines(args.test, DEFAULT_POLICY))
    value = ngramlm.oov_rate(ngramlm.vocabulary(train_corpus), test)
    header = provenance("oov", {"train": args.train, "test": args.test})
    _write_csv_rows(args.output, header, [
        ("oov", f"{value:.4f}", sum(len(s) for s in test)),
    ])
    return 0


def cmd_wer(args, config) -> int:
    refs = _surfaces(_load_lines(args.refs, DEFAULT_POLICY))
    hyps = _surfaces(_load_lines(args.hyps, DEFAULT_POLICY))
    rep = metrics.wer(refs, hyps)
    header = provenance("wer", {"refs": args.refs, "hyps": args.hyps})
    _write_csv_rows(args.output, header, [
        ("wer", f"{rep.wer:.4f}", rep.sentences),
        ("cer", f"{rep.cer:.4f}", rep.sentences),
        ("substitutions", rep.substitutions, rep.sentences),
        ("insertions", rep.insertions, rep.sentences),
        ("deletions", rep.deletions, rep.sentences),
    ])
    return 0


def cmd_significance(args, config) -> int:
    seed = resolve(args, config, "seed", 0, int)
    resamples = resolve(args, config, "resamples", 10000, int)
    metric = resolve(args, config, "metric", "wer")
    refs = _surfaces(_load_lines(args.refs, DEFAULT_POLICY))
    a = _surfaces(_load_lines(args.hyp_a, DEFAULT_POLICY))
    b = _surfaces(_load_lines(args.hyp_b, DEFAULT_POLICY))
    p = stats.paired_significance(refs, a, b, metric, resamples, random.Random(seed))
    header = provenance("significance", {
        "refs": args.refs, "hyp_a": args.hyp_a, "hyp_b": args.hyp_b,
        "metric": metric, "resamples": resamples,
    }, seed)
    _write_csv_rows(args.output, header, [(f"{metric}_significance_p", f"{p:.6f}", resamples)])
    return 0


def cmd_correlate(args, config) -> int:
    table = stats.load_score_table(args.table)
    subset = args.subset.split(",") if args.subset else None
    xs, ys, used = stats.column_vectors(table, args.x, args.y, subset)
    res = stats.pearson(xs, ys)
    header = provenance("correlate", {
        "table": args.table, "x": args.x, "y": args.y, "subset": args.subset,
    })
    _write_csv_rows(args.output, header, [
        ("r", f"{res.r:.6f}", res.n),
        ("p", f"{res.p:.6f}", res.n),
    ])
    return 0


def cmd_constrain(args, config) -> int:
    sets = [read_generations(path) for path in args.sets]
    keep = args.keep if args.keep is not None else 0
    kept = corpus.intersect_generations(sets, keep)
    header = provenance("constrain", {"sets": ";".join(args.sets), "keep": keep})
    write_generations(kept.values(), args.output, header)
    print(f"kept {len(kept)} generations common to {len(sets)} sets")
    return 0


def cmd_export_pred(args, config) -> int:
    pairs, _ = _load_corpus(args, DEFAULT_POLICY)
    header = provenance("export-pred", {"src": args.src, "tgt": args.tgt, "tsv": args.tsv})
    n = bridge.export_prediction_requests(pairs, args.output, header)
    print(f"wrote {n} prediction requests to {args.output}")
    return 0


def cmd_import_pred(args, config) -> int:
    pairs, _ = _load_corpus(args, DEFAULT_POLICY)
    tags, issues = bridge.import_predictions(args.input, pairs)
    header = provenance("import-pred", {
        "input": args.input, "src": args.src, "tgt": args.tgt, "tsv": args.tsv,
    })
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for pid, vec in tags.items():
            fh.write(json.dumps({"id": pid, "tags": vec}) + "\n")
    _report_issues(issues, args.skip_report, header)
    print(f"imported tags for {len(tags)} pairs ({len(issues)} issues)")
    return 0


def cmd_export_bt(args, config) -> int:
    rows = []
    for line_no, line in enumerate(corpus._content_lines(args.tsv)):
        cols = line.split("\t")
        if len(cols) != 3:
            raise ParseError(f"expected 3 columns, got {len(cols)}", args.tsv, line_no)
        rows.append((cols[0], cols[1], cols[2]))
    header = provenance("export-bt", {"tsv": args.tsv})
    n, issues = bridge.export_bt_training(rows, args.src_out, args.tgt_out, header)
    _report_issues(issues, args.skip_report, header)
    print(f"wrote {n} training pairs ({len(issues)} rows skipped)")
    return 0


def cmd_import_bt(args, config) -> int:
    pairs, _ = _load_corpus(args, DEFAULT_POLICY)
    gens, issues = bridge.import_bt_outputs(args.input, pairs, DEFAULT_POLICY)
    header = provenance("import-bt", {
        "input": args.input, "src": args.src, "tgt": args.tgt, "tsv": args.tsv,
    })
    write_generations(gens, args.output, header)
    _report_issues(issues, args.skip_report, header)
    print(f"imported {len(gens)} generations ({len(issues)} issues)")
    return 0


def _report_issues(issues, path, header):
    if not path:
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for i in issues:
            line = i.line_no if i.line_no is not None else "-"
            fh.write(f"{i.pair_id or '-'}\t{i.reason} ({i.path}:{line})\n")


def cmd_reproduce_paper(args, config) -> int:
    rows = reproduce.evaluate_checks()
    report = reproduce.format_report(rows)
    if args.output:
        header = provenance("reproduce-paper", {})
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(header + "\n" + report + "\n")
    print(report)
    passed = sum(r.passed for r in rows)
    print(f"# {passed}/{len(rows)} reference checks passed")
    return 0


# --- parser ----------------------------------------------------------------

def _add_corpus_opts(p):
    p.add_argument("--src", help="matrix-language side, one sentence per line")
    p.add_argument("--tgt", help="embedded-language side, one sentence per line")
    p.add_argument("--tsv", help="3-column TSV corpus (id, source, target)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cswaug", description=__doc__)
    ap.add_argument("--config", help="key = value config file; flags override it")
    ap.add_argument("--version", action="version", version=f"cswaug {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="generate code-switched sentences")
    _add_corpus_opts(p)
    p.add_argument("--strategy", choices=_STRATEGIES)
    p.add_argument("--lexicon", help="gloss lexicon TSV (dict strategy)")
    p.add_argument("--alignments", help="pharaoh alignment file")
    p.add_argument("--flip-alignments", action="store_true", default=None,
                   help="treat alignment items as target-source")
    p.add_argument("--tags", help="switch-tag JSONL (pred strategy)")
    p.add_argument("--function-words", dest="function_words",
                   help="function word list (ml-* strategies)")
    p.add_argument("--rate", type=float, help="replacement rate percent (default 19)")
    p.add_argument("--min-replacements", dest="min_replacements", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--ref-spf", dest="ref_spf", type=float,
                   help="reference switch-point fraction (default 0.22)")
    p.add_argument("--max-candidates", dest="max_candidates", type=int)
    p.add_argument("--jobs", type=int, help="worker processes (default $CSWAUG_JOBS or 1)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--skip-report", dest="skip_report",
                   help="skip-report TSV (default OUTPUT.skips.tsv)")
    p.add_argument("--dump-candidates", dest="dump_candidates",
                   help="debug TSV of all theory candidates: id, spf, text")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("tag", help="tag translation tokens matching code-switched words")
    p.add_argument("--csw", required=True, help="code-switched sentences, one per line")
    p.add_argument("--translations", required=True, help="line-aligned translations")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("stats", help="code-switching statistics of a corpus")
    p.add_argument("--input", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("ppl", help="train/score an n-gram language model")
    p.add_argument("--train")
    p.add_argument("--test", required=True)
    p.add_argument("--model", help="load a saved model instead of training")
    p.add_argument("--save-model", dest="save_model")
    p.add_argument("--order", type=int)
    p.add_argument("--discount", type=float)
    p.add_argument("--min-count", dest="min_count", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_ppl)

    p = sub.add_parser("oov", help="out-of-vocabulary rate of a test corpus")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oov)

    p = sub.add_parser("wer", help="word/character error rates")
    p.add_argument("--refs", required=True)
    p.add_argument("--hyps", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_wer)

    p = sub.add_parser("significance", help="paired approximate-randomization test")
    p.add_argument("--refs", required=True)
    p.add_argument("--hyp-a", dest="hyp_a", required=True)
    p.add_argument("--hyp-b", dest="hyp_b", required=True)
    p.add_argument("--metric", choices=("wer", "cer"))
    p.add_argument("--resamples", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_significance)

    p = sub.add_parser("correlate", help="Pearson correlation between two table columns")
    p.add_argument("--table", required=True, help="CSV with a header row")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--subset", help="comma-separated technique names")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("constrain", help="keep generations common to all sets")
    p.add_argument("--sets", nargs="+", required=True, help="generation TSV files")
    p.add_argument("--keep", type=int, help="index of the set to keep (default 0)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_constrain)

    p = sub.add_parser("export-pred", help="write predictor requests (JSONL)")
    _add_corpus_opts(p)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export_pred)

    p = sub.add_parser("import-pred", help="validate predictor tags (JSONL)")
    _add_corpus_opts(p)
    p.add_argument("--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--skip-report", dest="skip_report")
    p.set_defaults(func=cmd_import_pred)

    p = sub.add_parser("export-bt", help="write back-translation training files")
    p.add_argument("--tsv", required=True,
                   help="TSV rows: id, code-switched sentence, translation")
    p.add_argument("--src-out", dest="src_out", required=True)
    p.add_argument("--tgt-out", dest="tgt_out", required=True)
    p.add_argument("--skip-report", dest="skip_report")
    p.set_defaults(func=cmd_export_bt)

    p = sub.add_parser("import-bt", help="import back-translation outputs (TSV)")
    _add_corpus_opts(p)
    p.add_argument("--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--skip-report", dest="skip_report")
    p.set_defaults(func=cmd_import_bt)

    p = sub.add_parser("reproduce-paper",
                       help="recompute the published correlations from bundled tables")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reproduce_paper)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    config = load_config_file(args.config) if args.config else {}
    try:
        return args.func(args, config)
    except CswAugError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
