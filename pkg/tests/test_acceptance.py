"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s``).

Everything here runs against synthetic desk-scale corpora and the built-in
naive chunker; no web UI, external parser, or network is involved.
"""

import itertools
import math
import random
import time
from contextlib import contextmanager

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from titlegen import datagen, devparser
from titlegen.arranger import GenerationConfig, assemble, generate_from_abstract, shape_report
from titlegen.corpus import (
    PaperRecord,
    Vocab,
    detokenize,
    make_eval_negatives,
    normalize_text,
    title_coverage,
    tokenize,
    word_split,
)
from titlegen.grammar import (
    CallableParserAdapter,
    PatternBank,
    TreeFileParserAdapter,
    build_bank,
    check,
    collect_patterns,
    extract_pattern,
    parse_bracketed,
)
from titlegen.metrics import (
    benchmark,
    bleu2,
    lexrank_summary,
    rouge1,
    rougeL,
    textrank_summary,
    write_report_csv,
)
from titlegen.parts import TitlePart
from titlegen.scorer import appropriateness_ratio, build_training_set, train_scorer
from titlegen.tagger import select_keywords

from conftest import build_bundle

ADAPTER = CallableParserAdapter(devparser.parse_title)

REAL_TITLE = "Mobile Robot Mapping and Localization in Non-Static Environments"
TABLE_EDITS = ["mobile robot", "in", "mapping and localization", "non - static", "environments"]


@contextmanager
def criterion(name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {name}: FAIL")
        raise
    print(f"ACCEPTANCE {name}: PASS")


@pytest.fixture(scope="module")
def bundle():
    return build_bundle(n_records=80, seed=42)


def test_table_one_end_to_end_containment(bundle, tmp_path):
    with criterion("Table-style end-to-end containment (120 permutations, file parser)"):
        started = time.time()
        bank_titles = [
            REAL_TITLE,
            "Adaptive Mapping for Mobile Robots",
            "Learning Sparse Planning from Game Trees",
        ]
        bank, skipped = collect_patterns(bank_titles, ADAPTER)
        assert skipped == 0

        parts = [TitlePart(t) for t in TABLE_EDITS]
        orderings = list(itertools.permutations(range(len(parts))))
        texts = [assemble(parts, o) for o in orderings]
        tree_file = tmp_path / "permutations.trees"
        tree_file.write_text("".join(devparser.parse_title(t) + "\n" for t in texts))

        report = shape_report(
            parts, bank, bundle.scorer, TreeFileParserAdapter(tree_file), GenerationConfig()
        )
        target = REAL_TITLE.lower()
        assert report.n_examined == 120
        assert target in report.examined, "pre-gate candidate set must contain the real title"
        assert target in report.grammar_passed, "the real title's own pattern is in the bank"
        elapsed = time.time() - started
        assert elapsed < 10.0, f"took {elapsed:.1f}s"


def test_permutation_completeness(bundle):
    with criterion("permutation completeness (n! examined; 3 x 5 parts = 360)"):
        for n in range(1, 7):
            parts = [TitlePart(f"w{i}") for i in range(n)]
            report = shape_report(parts, bundle.bank, bundle.scorer, ADAPTER)
            assert report.n_examined == math.factorial(n)
            # distinct parts assemble to distinct strings
            assert len(set(report.examined)) == math.factorial(n)
        total = 0
        for words in (
            ["alpha", "beta", "gamma", "delta", "eps"],
            ["one", "two", "three", "four", "five"],
            ["p", "q", "r", "s", "t"],
        ):
            report = shape_report(
                [TitlePart(w) for w in words], bundle.bank, bundle.scorer, ADAPTER
            )
            total += report.n_examined
        assert total == 360


def test_grammar_self_match_and_pruning(bundle):
    with criterion("grammar self-match 1.0 + nonzero pruning on random permutations"):
        records = datagen.make_corpus(40, seed=4, embed_full_title=False)
        titles = [r.title for r in records]
        trees = [parse_bracketed(devparser.parse_title(t)) for t in titles]
        bank = build_bank(trees)
        assert all(check(bank, t) for t in trees), "every bank source must self-match"

        # three desk titles with at least five words, split into five parts
        five_worders = [t for t in titles if len(t.split()) >= 5][:3]
        assert len(five_worders) == 3
        rng = random.Random(99)
        examined = 0
        rejected = 0
        for title in five_worders:
            words = title.lower().split()
            bounds = [round(i * len(words) / 5) for i in range(6)]
            parts = [TitlePart(" ".join(words[bounds[i] : bounds[i + 1]])) for i in range(5)]
            all_orderings = list(itertools.permutations(range(5)))
            for ordering in rng.sample(all_orderings, 40):
                text = assemble(parts, ordering)
                tree = parse_bracketed(devparser.parse_title(text))
                examined += 1
                if not check(bank, tree):
                    rejected += 1
        assert examined == 120
        fraction = rejected / examined
        print(f"  [grammar gate rejected {rejected}/120 = {fraction:.2f} of random permutations]")
        assert fraction > 0.0


def test_scorer_direction_margin():
    with criterion("scorer direction: ratio(real) - ratio(shuffled) >= 0.15"):
        corpus = datagen.make_corpus(620, seed=3, embed_full_title=False)
        train, held = corpus[:500], corpus[500:]
        assert len(train) >= 500 and len(held) >= 100
        model = train_scorer(build_training_set(train, seed=11))
        real = [r.title for r in held]
        shuffled = [
            make_eval_negatives(r, seed=5000 + i).shuffled_title for i, r in enumerate(held)
        ]
        ratio_real = appropriateness_ratio(model, real, threshold=0.5)
        ratio_shuffled = appropriateness_ratio(model, shuffled, threshold=0.5)
        print(f"  [ratio real={ratio_real:.3f} shuffled={ratio_shuffled:.3f}]")
        assert ratio_real > ratio_shuffled
        assert ratio_real - ratio_shuffled >= 0.15


def test_metric_oracles():
    with criterion("metric oracles at 1e-9 + summarizer fixtures"):
        r1 = rouge1("a b c", "a d")
        assert abs(r1.precision - 1 / 3) < 1e-9
        assert abs(r1.recall - 1 / 2) < 1e-9
        assert abs(r1.f1 - 0.4) < 1e-9

        rl = rougeL("a c b", "a b c")
        assert abs(rl.precision - 2 / 3) < 1e-9
        assert abs(rl.recall - 2 / 3) < 1e-9
        assert abs(rl.f1 - 2 / 3) < 1e-9

        assert abs(bleu2("a b", "a c") - math.sqrt(0.5 * 0.25)) < 1e-9

        identical = rouge1("x y z", "x y z")
        assert (identical.precision, identical.recall, identical.f1) == (1.0, 1.0, 1.0)
        identical_l = rougeL("x y z", "x y z")
        assert (identical_l.precision, identical_l.recall, identical_l.f1) == (1.0, 1.0, 1.0)
        assert bleu2("x y z", "x y z") == 1.0

        lex_fixture = [
            "the robot maps the corridor",
            "the robot maps the corridor",
            "bananas are yellow fruit entirely",
        ]
        assert lexrank_summary(lex_fixture) == lex_fixture[0]
        tex_fixture = [
            "robots map corridors and rooms",
            "robots clean kitchens quickly today",
            "corridors and rooms are large",
        ]
        assert textrank_summary(tex_fixture) == tex_fixture[0]


def test_benchmark_shape_and_length_direction(tmp_path):
    with criterion("benchmark CSV + proposed titles < half of baseline lengths"):
        records = datagen.make_corpus(60, seed=5, embed_full_title=False)
        assert len(records) >= 50
        bundle = build_bundle(n_records=60, seed=5)
        config = GenerationConfig()

        def ours(record: PaperRecord) -> str:
            return generate_from_abstract(record.abstract_text, bundle, config).candidates[0].text

        reports = benchmark(
            records,
            [
                ("ours", ours),
                ("lexrank", lambda r: lexrank_summary(list(r.abstract_sentences))),
                ("textrank", lambda r: textrank_summary(list(r.abstract_sentences))),
            ],
        )
        csv_path = tmp_path / "report.csv"
        write_report_csv(reports, csv_path)
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "system,avg_words,rouge1_f,rougeL_f,bleu2,n_items"
        assert {ln.split(",")[0] for ln in lines[1:]} == {"ours", "lexrank", "textrank"}

        by_name = {r.system_name: r for r in reports}
        ours_len = by_name["ours"].avg_words
        print(
            f"  [avg words: ours={ours_len:.1f} "
            f"lexrank={by_name['lexrank'].avg_words:.1f} textrank={by_name['textrank'].avg_words:.1f}]"
        )
        assert ours_len < by_name["lexrank"].avg_words / 2
        assert ours_len < by_name["textrank"].avg_words / 2


def test_coverage_statistic():
    with criterion("title coverage: 1.0 when embedded, inside (0,1) on desk corpus"):
        embedded = datagen.make_corpus(50, seed=2, embed_full_title=True)
        assert title_coverage(embedded) == 1.0
        realistic = datagen.make_corpus(200, seed=6, embed_full_title=False)
        value = title_coverage(realistic)
        print(f"  [desk-corpus coverage = {value:.4f}]")
        assert 0.0 < value < 1.0


# -- randomized invariant suites (>= 1000 cases each) -------------------------

SUITE = settings(max_examples=1000, deadline=None, derandomize=True)

_text = st.text(alphabet=st.sampled_from("abcdef -.,"), min_size=1, max_size=30).filter(
    lambda s: any(not ch.isspace() for ch in s)
)


def test_round_trip_suite():
    with criterion("tokenization round-trip (1000 cases)"):

        @SUITE
        @given(_text, st.integers(0, 2**30))
        def prop(text, seed):
            words = word_split(text)
            chars = {ch for w in words for ch in w}
            rng = random.Random(seed)
            extras = {
                w[i : i + rng.randint(2, 4)]
                for w in words
                for i in range(0, max(len(w) - 1, 0), 2)
                if len(w) > 1
            }
            entries = frozenset(chars | set(rng.sample(sorted(extras), min(len(extras), 4))))
            vocab = Vocab(entries=entries, max_piece_len=max((len(e) for e in entries), default=1))
            tokens = tokenize(text, vocab)
            if tokens.pieces:
                assert detokenize(tokens) == normalize_text(text)

        prop()


def test_keyword_threshold_monotonicity_suite():
    with criterion("keyword-threshold monotonicity (1000 cases)"):

        @SUITE
        @given(
            st.lists(st.floats(-4, 4, allow_nan=False), min_size=1, max_size=40),
            st.floats(-4, 4, allow_nan=False),
            st.floats(0, 4, allow_nan=False),
        )
        def prop(scores, threshold, bump):
            low = select_keywords(scores, threshold)
            high = select_keywords(scores, threshold + bump)
            assert sum(high.selected) <= sum(low.selected)
            assert all(not h or l for h, l in zip(high.selected, low.selected))

        prop()


_tree_label = st.sampled_from(["NP", "VP", "PP", "S", "ADJP"])
_pos_label = st.sampled_from(["NN", "JJ", "IN", "VB"])
_leaf = st.sampled_from(["a", "b", "c"])


@st.composite
def _tree(draw, depth=0):
    from titlegen.grammar import ParseTree

    if depth >= 2 or draw(st.booleans()):
        return ParseTree(label=draw(_pos_label), leaf_word=draw(_leaf))
    children = tuple(draw(_tree(depth + 1)) for _ in range(draw(st.integers(1, 3))))
    return ParseTree(label=draw(_tree_label), children=children)


def test_bank_monotonicity_suite():
    with criterion("bank monotonicity (1000 cases)"):

        @SUITE
        @given(st.lists(_tree(), min_size=1, max_size=5), st.lists(_tree(), min_size=0, max_size=3))
        def prop(trees, extras):
            bank = build_bank(trees)
            assert all(check(bank, t) for t in trees)
            grown = PatternBank(
                patterns=bank.patterns | {extract_pattern(t).canonical for t in extras},
                source_count=bank.source_count + len(extras),
            )
            assert all(check(grown, t) for t in trees)

        prop()


_PROP_BANK, _ = collect_patterns(
    ["alpha beta", "alpha of beta", "alpha of beta in gamma", "in alpha"], ADAPTER
)
_PART_TEXTS = st.lists(
    st.sampled_from(["alpha", "beta", "gamma", "of x", "in y", "delta"]),
    min_size=1,
    max_size=3,
    unique=True,
)


def test_gate_soundness_suite():
    with criterion("gate soundness (1000 cases)"):

        @SUITE
        @given(_PART_TEXTS, st.floats(0, 1, allow_nan=False))
        def prop(texts, threshold):
            parts = [TitlePart(t) for t in texts]
            scorer = lambda text: (hash(text) % 1009) / 1008.0
            config = GenerationConfig(eval_threshold=threshold)
            report = shape_report(parts, _PROP_BANK, scorer, ADAPTER, config)
            assert report.n_examined == math.factorial(len(parts))
            for cand in report.candidates:
                assert cand.grammar_ok is True
                assert cand.score >= threshold
                assert cand.text in report.grammar_passed

        prop()


def test_ranking_order_suite():
    with criterion("ranking order (1000 cases)"):

        @SUITE
        @given(_PART_TEXTS, st.integers(0, 2**30))
        def prop(texts, salt):
            parts = [TitlePart(t) for t in texts]
            scorer = lambda text: ((hash(text) ^ salt) % 1009) / 1008.0
            report = shape_report(parts, _PROP_BANK, scorer, ADAPTER, GenerationConfig(eval_threshold=0.0))
            scores = [c.score for c in report.candidates]
            assert scores == sorted(scores, reverse=True)
            # ties broken lexicographically
            for a, b in zip(report.candidates, report.candidates[1:]):
                if a.score == b.score:
                    assert a.text <= b.text

        prop()
