"""Grammar gate: constituency-tree skeletons harvested from real titles.

A pattern is what remains of a bracketed parse tree after removing leaf
words, POS preterminals, and the synthetic ROOT/TOP wrapper — only phrase
and clause labels survive. A candidate title passes the gate iff its
skeleton is exactly one already seen in the bank.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

# Penn Treebank preterminal inventory (word-level tags plus punctuation).
PENN_POS_TAGS = frozenset(
    {
        "CC", "CD", "DT", "EX", "FW", "IN", "JJ", "JJR", "JJS", "LS", "MD",
        "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR",
        "RBS", "RP", "SYM", "TO", "UH", "VB", "VBD", "VBG", "VBN", "VBP",
        "VBZ", "WDT", "WP", "WP$", "WRB",
        ".", ",", ":", "``", "''", "-LRB-", "-RRB-", "$", "#", "HYPH", "AFX",
    }
)

_SYNTHETIC_ROOTS = frozenset({"ROOT", "TOP", ""})

EMPTY_PATTERN = "(EMPTY)"


class TreeParseError(ValueError):
    """Malformed bracketed tree; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class ParseTree:
    """A constituency tree node: either internal (children) or a preterminal
    holding its leaf word — never both."""

    label: str
    children: tuple["ParseTree", ...] = ()
    leaf_word: Optional[str] = None

    def __post_init__(self) -> None:
        if (self.leaf_word is None) == (len(self.children) == 0):
            raise ValueError("a node carries either children or a leaf word")

    def is_preterminal(self) -> bool:
        return self.leaf_word is not None

    def leaves(self) -> list[str]:
        if self.leaf_word is not None:
            return [self.leaf_word]
        out: list[str] = []
        for child in self.children:
            out.extend(child.leaves())
        return out


@dataclass(frozen=True)
class GrammarPattern:
    """Canonical phrase/clause skeleton string, e.g. "(NP (NP) (PP (NP)))"."""

    canonical: str

    def __post_init__(self) -> None:
        if not self.canonical:
            raise ValueError("pattern must be non-empty")


@dataclass
class PatternBank:
    """Set of skeletons collected from real titles; membership is exact
    string equality."""

    patterns: set[str] = field(default_factory=set)
    source_count: int = 0

    def __contains__(self, pattern: GrammarPattern | str) -> bool:
        key = pattern.canonical if isinstance(pattern, GrammarPattern) else pattern
        return key in self.patterns


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode("utf-8"))


def parse_bracketed(text: str) -> ParseTree:
    """Parse one Penn-Treebank-style bracketed tree.

    Whitespace-insensitive. Raises :class:`TreeParseError` with the byte
    offset for unbalanced brackets, empty nodes, or trailing content.
    """
    s = text
    n = len(s)

    def skip_ws(i: int) -> int:
        while i < n and s[i].isspace():
            i += 1
        return i

    def read_token(i: int) -> tuple[str, int]:
        j = i
        while j < n and not s[j].isspace() and s[j] not in "()":
            j += 1
        return s[i:j], j

    def parse_node(i: int) -> tuple[ParseTree, int]:
        # s[i] == "("
        label, i = read_token(i + 1)
        i = skip_ws(i)
        if i >= n:
            raise TreeParseError("unexpected end of input", _byte_offset(s, i))
        if s[i] == "(":
            children: list[ParseTree] = []
            while i < n and s[i] == "(":
                child, i = parse_node(i)
                children.append(child)
                i = skip_ws(i)
            if i >= n:
                raise TreeParseError("unexpected end of input", _byte_offset(s, i))
            if s[i] != ")":
                raise TreeParseError(f"expected ')' but found {s[i]!r}", _byte_offset(s, i))
            return ParseTree(label=label, children=tuple(children)), i + 1
        if s[i] == ")":
            raise TreeParseError("empty node", _byte_offset(s, i))
        word, i = read_token(i)
        i = skip_ws(i)
        if i >= n:
            raise TreeParseError("unexpected end of input", _byte_offset(s, i))
        if s[i] != ")":
            raise TreeParseError(
                f"expected ')' after leaf word but found {s[i]!r}", _byte_offset(s, i)
            )
        return ParseTree(label=label, leaf_word=word), i + 1

    i = skip_ws(0)
    if i >= n or s[i] != "(":
        raise TreeParseError("expected '('", _byte_offset(s, i))
    tree, i = parse_node(i)
    i = skip_ws(i)
    if i != n:
        raise TreeParseError("trailing content after tree", _byte_offset(s, i))
    return tree


def extract_pattern(tree: ParseTree, pos_tags: frozenset[str] | set[str] = PENN_POS_TAGS) -> GrammarPattern:
    """Strip leaves, preterminals, POS-labeled nodes, and a synthetic root;
    serialize what remains depth-first. A fully stripped tree yields the
    "(EMPTY)" sentinel so single-word titles stay representable."""

    def skeleton(node: ParseTree) -> str | None:
        if node.is_preterminal() or node.label in pos_tags:
            return None
        kids = [k for k in (skeleton(c) for c in node.children) if k is not None]
        if kids:
            return "(" + node.label + " " + " ".join(kids) + ")"
        return "(" + node.label + ")"

    if tree.label in _SYNTHETIC_ROOTS and not tree.is_preterminal():
        tops = [k for k in (skeleton(c) for c in tree.children) if k is not None]
    else:
        top = skeleton(tree)
        tops = [top] if top is not None else []
    return GrammarPattern(" ".join(tops) if tops else EMPTY_PATTERN)


def build_bank(trees: Sequence[ParseTree], pos_tags: frozenset[str] | set[str] = PENN_POS_TAGS) -> PatternBank:
    """Collect the pattern set over all trees; source_count records how many
    trees were ingested."""
    patterns = {extract_pattern(tree, pos_tags).canonical for tree in trees}
    return PatternBank(patterns=patterns, source_count=len(trees))


def check(
    bank: PatternBank,
    candidate_tree: ParseTree,
    pos_tags: frozenset[str] | set[str] = PENN_POS_TAGS,
) -> bool:
    """True iff the candidate's skeleton is in the bank."""
    return extract_pattern(candidate_tree, pos_tags).canonical in bank.patterns


class ParserAdapter:
    """Source of bracketed trees for a batch of sentences."""

    def parse_lines(self, sentences: Sequence[str]) -> list[str]:
        """One bracketed-tree line per sentence, order preserved. Raises on
        process failure or line-count mismatch."""
        raise NotImplementedError

    def parse_many(self, sentences: Sequence[str]) -> list[Optional[ParseTree]]:
        """Lenient batch parse: a line that fails to parse yields None instead
        of aborting the batch. Process-level failures still raise."""
        trees: list[Optional[ParseTree]] = []
        for line in self.parse_lines(sentences):
            try:
                trees.append(parse_bracketed(line))
            except TreeParseError:
                trees.append(None)
        return trees


class TreeFileParserAdapter(ParserAdapter):
    """Pre-parsed trees, one per line, keyed by input line number."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def parse_lines(self, sentences: Sequence[str]) -> list[str]:
        lines = self.path.read_text(encoding="utf-8").splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        if len(lines) != len(sentences):
            raise RuntimeError(f"expected {len(sentences)} trees, got {len(lines)}")
        return lines


class CommandParserAdapter(ParserAdapter):
    """External parser process: one sentence per input line, one bracketed
    tree per output line. A fresh process handles each batch."""

    def __init__(self, command: Sequence[str]):
        if not command:
            raise ValueError("parser command must be non-empty")
        self.command = list(command)

    def parse_lines(self, sentences: Sequence[str]) -> list[str]:
        payload = "".join(s.replace("\n", " ") + "\n" for s in sentences)
        proc = subprocess.run(
            self.command, input=payload, capture_output=True, text=True
        )
        if proc.returncode != 0:
            detail = proc.stderr.strip().splitlines()
            raise RuntimeError(
                f"parser command exited with code {proc.returncode}"
                + (f": {detail[-1]}" if detail else "")
            )
        lines = proc.stdout.splitlines()
        while lines and not lines[-1].strip():
            lines.pop()
        if len(lines) != len(sentences):
            raise RuntimeError(f"expected {len(sentences)} trees, got {len(lines)}")
        return lines


class CallableParserAdapter(ParserAdapter):
    """In-process adapter around a ``sentence -> bracketed tree`` function."""

    def __init__(self, fn: Callable[[str], str]):
        self.fn = fn

    def parse_lines(self, sentences: Sequence[str]) -> list[str]:
        return [self.fn(s) for s in sentences]


def request_parses(sentences: Sequence[str], adapter: ParserAdapter) -> list[ParseTree]:
    """Strict batch parse: one tree per sentence or an exception."""
    return [parse_bracketed(line) for line in adapter.parse_lines(sentences)]


def collect_patterns(
    titles: Sequence[str],
    adapter: ParserAdapter,
    pos_tags: frozenset[str] | set[str] = PENN_POS_TAGS,
) -> tuple[PatternBank, int]:
    """Parse titles and build a bank, skipping unparseable ones.

    Returns the bank and the number of titles skipped; source_count reflects
    only the titles that contributed a tree.
    """
    trees = [t for t in adapter.parse_many(titles) if t is not None]
    skipped = len(titles) - len(trees)
    return build_bank(trees, pos_tags), skipped


def save_bank(bank: PatternBank, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"source_count={bank.source_count}\n")
        for pattern in sorted(bank.patterns):
            fh.write(pattern + "\n")


def load_bank(path: str | Path) -> PatternBank:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("source_count="):
            raise ValueError(f"{path}: missing source_count header")
        try:
            count = int(header.split("=", 1)[1])
        except ValueError:
            raise ValueError(f"{path}: bad source_count header {header!r}") from None
        patterns = {line.rstrip("\n") for line in fh if line.strip()}
    return PatternBank(patterns=patterns, source_count=count)
