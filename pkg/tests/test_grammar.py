import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from titlegen.devparser import parse_title
from titlegen.grammar import (
    CallableParserAdapter,
    CommandParserAdapter,
    ParseTree,
    PatternBank,
    TreeFileParserAdapter,
    TreeParseError,
    build_bank,
    check,
    collect_patterns,
    extract_pattern,
    load_bank,
    parse_bracketed,
    request_parses,
    save_bank,
)


class TestParseBracketed:
    def test_preterminal(self):
        tree = parse_bracketed("(NP (NN mapping))")
        assert tree.label == "NP"
        assert len(tree.children) == 1
        assert tree.children[0].label == "NN"
        assert tree.children[0].leaf_word == "mapping"

    def test_nested(self):
        tree = parse_bracketed("(ROOT (NP (NP (NN a)) (PP (IN of) (NP (NN b)))))")
        np = tree.children[0]
        assert [c.label for c in np.children] == ["NP", "PP"]
        assert np.children[1].children[0].leaf_word == "of"

    def test_unbalanced_reports_end_offset(self):
        text = "(NP (NN"
        with pytest.raises(TreeParseError) as exc:
            parse_bracketed(text)
        assert exc.value.offset == len(text.encode())

    def test_empty_node(self):
        with pytest.raises(TreeParseError, match="empty node"):
            parse_bracketed("(NP ())")

    def test_trailing_content(self):
        with pytest.raises(TreeParseError, match="trailing"):
            parse_bracketed("(NP (NN x)) junk")

    def test_whitespace_insensitive(self):
        a = parse_bracketed("(NP (JJ mobile) (NN robot))")
        b = parse_bracketed("  (NP\n   (JJ mobile)\n   (NN robot)  )\n")
        assert a == b

    def test_label_less_wrapper(self):
        tree = parse_bracketed("( (S (NP (NN x))))")
        assert tree.label == ""
        assert tree.children[0].label == "S"


class TestExtractPattern:
    def test_strips_root_preterminals_and_leaves(self):
        tree = parse_bracketed("(ROOT (NP (JJ mobile) (NN robot)))")
        assert extract_pattern(tree).canonical == "(NP)"

    def test_keeps_phrase_structure(self):
        tree = parse_bracketed(
            "(ROOT (NP (NP (NN mapping)) (PP (IN in) (NP (JJ non-static) (NNS environments)))))"
        )
        assert extract_pattern(tree).canonical == "(NP (NP) (PP (NP)))"

    def test_fully_stripped_yields_sentinel(self):
        assert extract_pattern(parse_bracketed("(ROOT (NN x))")).canonical == "(EMPTY)"

    def test_top_label_also_synthetic(self):
        tree = parse_bracketed("(TOP (NP (NN x)))")
        assert extract_pattern(tree).canonical == "(NP)"

    def test_leaf_word_invariance(self):
        a = parse_bracketed("(ROOT (NP (NP (NN mapping)) (PP (IN in) (NP (NN maps)))))")
        b = parse_bracketed("(ROOT (NP (NP (NN qq)) (PP (IN zz) (NP (NN ww)))))")
        assert extract_pattern(a) == extract_pattern(b)

    def test_preterminal_relabel_invariance(self):
        a = parse_bracketed("(NP (JJ mobile) (NN robot))")
        b = parse_bracketed("(NP (VBG mobile) (NNS robot))")
        assert extract_pattern(a) == extract_pattern(b)


class TestBank:
    def test_identical_skeletons_merge(self):
        trees = [
            parse_bracketed("(ROOT (NP (NN a)))"),
            parse_bracketed("(ROOT (NP (JJ b) (NN c)))"),
        ]
        bank = build_bank(trees)
        assert bank.patterns == {"(NP)"}
        assert bank.source_count == 2

    def test_empty(self):
        bank = build_bank([])
        assert bank.patterns == set()
        assert bank.source_count == 0

    def test_union_of_patterns(self):
        trees = [
            parse_bracketed("(ROOT (NP (JJ mobile) (NN robot)))"),
            parse_bracketed(
                "(ROOT (NP (NP (NN mapping)) (PP (IN in) (NP (NNS environments)))))"
            ),
        ]
        assert build_bank(trees).patterns == {"(NP)", "(NP (NP) (PP (NP)))"}

    def test_check_membership(self):
        bank = PatternBank(patterns={"(NP)", "(NP (NP) (PP (NP)))"}, source_count=2)
        yes = parse_bracketed("(ROOT (NP (NP (NN x)) (PP (IN of) (NP (NN y)))))")
        no = parse_bracketed("(ROOT (S (NP (NN x)) (VP (VB y))))")
        assert check(bank, yes)
        assert not check(bank, no)

    def test_self_match(self):
        trees = [
            parse_bracketed("(ROOT (NP (NN a)))"),
            parse_bracketed("(ROOT (S (NP (NN b)) (VP (VB c))))"),
        ]
        bank = build_bank(trees)
        assert all(check(bank, t) for t in trees)

    def test_file_round_trip(self, tmp_path):
        bank = PatternBank(patterns={"(NP)", "(S (NP) (VP))"}, source_count=5)
        path = tmp_path / "bank.txt"
        save_bank(bank, path)
        loaded = load_bank(path)
        assert loaded.patterns == bank.patterns
        assert loaded.source_count == 5
        assert path.read_text().startswith("source_count=5\n")


class TestAdapters:
    def test_tree_file_exact_count(self, tmp_path):
        path = tmp_path / "trees.txt"
        path.write_text("(NP (NN a))\n(NP (NN b))\n(NP (NN c))\n")
        trees = request_parses(["a", "b", "c"], TreeFileParserAdapter(path))
        assert [t.children[0].leaf_word for t in trees] == ["a", "b", "c"]

    def test_tree_file_count_mismatch(self, tmp_path):
        path = tmp_path / "trees.txt"
        path.write_text("(NP (NN a))\n(NP (NN b))\n")
        with pytest.raises(RuntimeError, match="expected 3 trees, got 2"):
            request_parses(["a", "b", "c"], TreeFileParserAdapter(path))

    def test_command_adapter(self):
        script = "import sys\nfor line in sys.stdin:\n    print('(NP (NN x))')\n"
        adapter = CommandParserAdapter([sys.executable, "-c", script])
        trees = request_parses(["one", "two"], adapter)
        assert len(trees) == 2
        assert trees[0].label == "NP"

    def test_command_failure(self):
        adapter = CommandParserAdapter([sys.executable, "-c", "import sys; sys.exit(3)"])
        with pytest.raises(RuntimeError, match="exit(ed)? with code 3"):
            adapter.parse_lines(["x"])

    def test_lenient_parse_many(self):
        adapter = CallableParserAdapter(lambda s: "garbage" if s == "bad" else "(NP (NN x))")
        trees = adapter.parse_many(["ok", "bad"])
        assert trees[0] is not None and trees[1] is None

    def test_strict_request_raises_on_bad_line(self):
        adapter = CallableParserAdapter(lambda s: "garbage")
        with pytest.raises(TreeParseError):
            request_parses(["x"], adapter)

    def test_collect_patterns_skips_failures(self):
        adapter = CallableParserAdapter(lambda s: "garbage" if s == "bad" else "(NP (NN x))")
        bank, skipped = collect_patterns(["ok", "bad", "ok2"], adapter)
        assert skipped == 1
        assert bank.source_count == 2


# -- properties ---------------------------------------------------------------

labels_phrase = st.sampled_from(["NP", "VP", "PP", "S", "ADJP", "SBAR"])
labels_pos = st.sampled_from(sorted({"NN", "JJ", "IN", "VB", "DT"}))
leaf_words = st.sampled_from(["alpha", "beta", "gamma", "x"])


@st.composite
def random_tree(draw, depth=0):
    if depth >= 3 or draw(st.booleans()):
        return ParseTree(label=draw(labels_pos), leaf_word=draw(leaf_words))
    n = draw(st.integers(1, 3))
    children = tuple(draw(random_tree(depth + 1)) for _ in range(n))
    return ParseTree(label=draw(labels_phrase), children=children)


@settings(max_examples=300, deadline=None)
@given(st.lists(random_tree(), min_size=1, max_size=6), random_tree())
def test_bank_monotone_and_self_match(trees, extra):
    bank = build_bank(trees)
    assert all(check(bank, t) for t in trees)
    grown = PatternBank(
        patterns=bank.patterns | {extract_pattern(extra).canonical},
        source_count=bank.source_count + 1,
    )
    # adding patterns never flips a positive decision
    assert all(check(grown, t) for t in trees)


@settings(max_examples=200, deadline=None)
@given(random_tree(), st.sampled_from(["zz", "ww", "qq"]))
def test_leaf_replacement_invariance(tree, replacement):
    def swap(node: ParseTree) -> ParseTree:
        if node.leaf_word is not None:
            return ParseTree(label=node.label, leaf_word=replacement)
        return ParseTree(label=node.label, children=tuple(swap(c) for c in node.children))

    assert extract_pattern(tree) == extract_pattern(swap(tree))


def test_devparser_emits_parseable_trees():
    for text in ["mobile robot mapping", "in", "a b - c of d", ""]:
        tree = parse_bracketed(parse_title(text))
        assert tree.label == "ROOT"
