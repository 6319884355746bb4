"""Corpus ingestion, text normalization, and subword tokenization.

A corpus is a JSON-lines file of paper records (id, title, abstract, venue,
year). Words are lowercased and split on whitespace with punctuation broken
out into separate tokens; each word is then segmented into subword pieces by
greedy longest-prefix match against a frequency-built vocabulary. Pieces
after the first one of a word are continuations (serialized with a "##"
prefix) and are merged back without a space on detokenization.
"""

from __future__ import annotations

import json
import random
import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

_HYPHEN_JOIN = re.compile(r"(?<=[^\W_]) - (?=[^\W_])")
_SENTENCE_SPLIT = re.compile(r"(?<=[.?!]) (?=[A-Z])")

CONTINUATION_PREFIX = "##"


def normalize_whitespace(text: str) -> str:
    """Collapse all whitespace runs (including newlines) to single spaces."""
    return " ".join(text.split())


def word_split(text: str) -> list[str]:
    """Lowercase and split into word tokens.

    Splits on whitespace and additionally breaks every punctuation character
    (anything neither alphanumeric nor whitespace) out as its own token, so
    "Non-Static" becomes ["non", "-", "static"].
    """
    words: list[str] = []
    current: list[str] = []
    for ch in text.lower():
        if ch.isspace():
            if current:
                words.append("".join(current))
                current = []
        elif ch.isalnum():
            current.append(ch)
        else:
            if current:
                words.append("".join(current))
                current = []
            words.append(ch)
    if current:
        words.append("".join(current))
    return words


def hyphen_normalize(text: str) -> str:
    """Collapse " - " to "-" when flanked by word characters on both sides."""
    return _HYPHEN_JOIN.sub("-", text)


def normalize_text(text: str) -> str:
    """Canonical surface form: lowercased, space-separated word tokens,
    hyphens rejoined. ``detokenize(tokenize(x, v))`` equals ``normalize_text(x)``
    for any vocabulary covering the characters of ``x``."""
    return hyphen_normalize(" ".join(word_split(text)))


def split_sentences(text: str) -> list[str]:
    """Split on sentence-final punctuation followed by an uppercase letter."""
    text = normalize_whitespace(text)
    return [s for s in _SENTENCE_SPLIT.split(text) if s]


def strip_system_name(title: str, max_prefix_words: int = 4) -> str:
    """Drop a short "SystemName:" prefix from a title.

    Only strips when the segment before the first colon is at most
    ``max_prefix_words`` words (the system-name idiom) and something non-empty
    remains after the colon.
    """
    if ":" not in title:
        return title
    head, _, tail = title.partition(":")
    tail = tail.strip()
    if tail and len(head.split()) <= max_prefix_words:
        return tail
    return title


@dataclass(frozen=True)
class PaperRecord:
    """One (title, abstract) corpus entry."""

    id: str
    title: str
    abstract_sentences: tuple[str, ...]
    venue: str = ""
    year: int = 0

    def __post_init__(self) -> None:
        if not self.title or self.title != normalize_whitespace(self.title):
            raise ValueError(f"record {self.id!r}: title must be non-empty and whitespace-normalized")
        if not self.abstract_sentences:
            raise ValueError(f"record {self.id!r}: abstract has no sentences")
        if any(not s for s in self.abstract_sentences):
            raise ValueError(f"record {self.id!r}: abstract contains an empty sentence")

    @property
    def abstract_text(self) -> str:
        return " ".join(self.abstract_sentences)


@dataclass(frozen=True)
class SubwordPiece:
    """A tokenizer piece; ``is_continuation`` marks non-initial pieces of a word.

    The stored text never carries the "##" marker; that prefix exists only in
    the serialized form (see :func:`serialize_piece`).
    """

    text: str
    is_continuation: bool = False

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("piece text must be non-empty")


def serialize_piece(piece: SubwordPiece) -> str:
    return CONTINUATION_PREFIX + piece.text if piece.is_continuation else piece.text


def parse_piece(serialized: str) -> SubwordPiece:
    if serialized.startswith(CONTINUATION_PREFIX) and len(serialized) > len(CONTINUATION_PREFIX):
        return SubwordPiece(serialized[len(CONTINUATION_PREFIX):], True)
    return SubwordPiece(serialized, False)


@dataclass(frozen=True)
class TokenSeq:
    """An ordered subword piece sequence plus the text it came from."""

    pieces: tuple[SubwordPiece, ...]
    origin: str = ""

    def __post_init__(self) -> None:
        if self.pieces and self.pieces[0].is_continuation:
            raise ValueError("first piece of a sequence cannot be a continuation")

    def __len__(self) -> int:
        return len(self.pieces)

    def word_ids(self) -> list[int]:
        """Index of the surface word each piece belongs to."""
        ids: list[int] = []
        wid = -1
        for piece in self.pieces:
            if not piece.is_continuation:
                wid += 1
            ids.append(wid)
        return ids

    def words(self) -> list[str]:
        """Surface words, pieces concatenated."""
        out: list[str] = []
        for piece in self.pieces:
            if piece.is_continuation:
                out[-1] += piece.text
            else:
                out.append(piece.text)
        return out


@dataclass(frozen=True)
class Vocab:
    """Subword vocabulary; contains every corpus character, so greedy
    segmentation is total on corpus text."""

    entries: frozenset[str]
    max_piece_len: int = 1

    def __post_init__(self) -> None:
        if self.max_piece_len < 1:
            raise ValueError("max_piece_len must be >= 1")


@dataclass(frozen=True)
class LabeledTokenSeq:
    """Abstract tokens with per-piece title-membership labels."""

    tokens: TokenSeq
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.tokens.pieces):
            raise ValueError("labels and pieces must have equal length")
        if any(l not in (0, 1) for l in self.labels):
            raise ValueError("labels must be 0 or 1")


@dataclass(frozen=True)
class EvalNegatives:
    shuffled_title: str
    first_sentence: str


def load_corpus(path: str | Path) -> list[PaperRecord]:
    """Read a JSON-lines corpus file.

    Each line holds one object with keys id, title, abstract (string or list
    of sentences), venue, year. A string abstract is split into sentences;
    titles get system-name prefixes stripped. Raises ValueError naming the
    offending line for malformed input and naming the id for duplicates.
    """
    records: list[PaperRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"line {lineno}: invalid JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise ValueError(f"line {lineno}: expected a JSON object")
            try:
                rid = obj["id"]
                title = obj["title"]
                abstract = obj["abstract"]
                venue = obj.get("venue", "")
                year = obj.get("year", 0)
            except KeyError as exc:
                raise ValueError(f"line {lineno}: missing key {exc.args[0]!r}") from None
            if not isinstance(rid, str) or not isinstance(title, str):
                raise ValueError(f"line {lineno}: id and title must be strings")
            if rid in seen:
                raise ValueError(f"duplicate id {rid}")
            seen.add(rid)
            if isinstance(abstract, str):
                sentences = split_sentences(abstract)
            elif isinstance(abstract, list) and all(isinstance(s, str) for s in abstract):
                sentences = [normalize_whitespace(s) for s in abstract if s.strip()]
            else:
                raise ValueError(f"line {lineno}: abstract must be a string or a list of strings")
            title = strip_system_name(normalize_whitespace(title))
            try:
                records.append(
                    PaperRecord(
                        id=rid,
                        title=title,
                        abstract_sentences=tuple(sentences),
                        venue=str(venue),
                        year=int(year),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
    return records


def save_corpus(records: Iterable[PaperRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "id": rec.id,
                        "title": rec.title,
                        "abstract": list(rec.abstract_sentences),
                        "venue": rec.venue,
                        "year": rec.year,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def _corpus_words(records: Sequence[PaperRecord]) -> Iterable[str]:
    for rec in records:
        yield from word_split(rec.title)
        yield from word_split(rec.abstract_text)


def build_vocab(records: Sequence[PaperRecord], max_size: int) -> Vocab:
    """Build a subword vocabulary of at most ``max_size`` entries.

    All observed characters are always included; remaining slots go to the
    most frequent multi-character substrings of corpus words, longer
    substrings first on equal counts and lexicographic order last, so the
    result is deterministic.
    """
    chars: set[str] = set()
    substrings: Counter[str] = Counter()
    for word in _corpus_words(records):
        chars.update(word)
        for i in range(len(word)):
            for j in range(i + 2, len(word) + 1):
                substrings[word[i:j]] += 1
    if max_size < len(chars):
        raise ValueError(
            f"max_size {max_size} is below the {len(chars)} distinct characters in the corpus"
        )
    slots = max_size - len(chars)
    ranked = sorted(substrings.items(), key=lambda kv: (-kv[1], -len(kv[0]), kv[0]))
    entries = chars | {s for s, _ in ranked[:slots]}
    max_len = max((len(e) for e in entries), default=1)
    return Vocab(entries=frozenset(entries), max_piece_len=max_len)


def tokenize(text: str, vocab: Vocab) -> TokenSeq:
    """Segment ``text`` into subword pieces by greedy longest-prefix match.

    A character absent from the vocabulary falls back to a single-character
    piece, so segmentation never fails.
    """
    if not text:
        raise ValueError("text must be non-empty")
    pieces: list[SubwordPiece] = []
    for word in word_split(text):
        start = 0
        first = True
        while start < len(word):
            end = min(len(word), start + vocab.max_piece_len)
            piece_text = None
            while end > start:
                candidate = word[start:end]
                if candidate in vocab.entries:
                    piece_text = candidate
                    break
                end -= 1
            if piece_text is None:
                piece_text = word[start]
            pieces.append(SubwordPiece(piece_text, is_continuation=not first))
            first = False
            start += len(piece_text)
    return TokenSeq(pieces=tuple(pieces), origin=text)


def detokenize(tokens: TokenSeq) -> str:
    """Merge continuation pieces into their word, join words with spaces,
    and rejoin hyphens that sit between word characters."""
    if not tokens.pieces:
        raise ValueError("cannot detokenize an empty sequence")
    if tokens.pieces[0].is_continuation:
        raise ValueError("first piece is a continuation")
    return hyphen_normalize(" ".join(tokens.words()))


def make_training_pairs(record: PaperRecord, vocab: Vocab) -> LabeledTokenSeq:
    """Tokenize the abstract and label each piece 1 iff its whole surface
    word occurs in the title (case-insensitive, punctuation-split match).
    All pieces of one word share one label."""
    tokens = tokenize(record.abstract_text, vocab)
    title_words = set(word_split(record.title))
    labels: list[int] = []
    for word in tokens.words():
        label = 1 if word in title_words else 0
        labels.append(label)
    # expand word labels back onto pieces
    piece_labels = [labels[wid] for wid in tokens.word_ids()]
    return LabeledTokenSeq(tokens=tokens, labels=tuple(piece_labels))


def make_eval_negatives(record: PaperRecord, seed: int) -> EvalNegatives:
    """Build the two negative examples for one record: a seeded word shuffle
    of the title that is guaranteed to differ from the original order, and
    the first abstract sentence."""
    words = record.title.split()
    if len(words) < 2:
        raise ValueError(f"record {record.id!r}: cannot shuffle a one-word title")
    if len(set(words)) == 1:
        raise ValueError(f"record {record.id!r}: all title words are identical, no reordering exists")
    rng = random.Random(seed)
    shuffled = list(words)
    while shuffled == words:
        rng.shuffle(shuffled)
    return EvalNegatives(
        shuffled_title=" ".join(shuffled),
        first_sentence=record.abstract_sentences[0],
    )


def title_coverage(records: Sequence[PaperRecord]) -> float:
    """Fraction of title-word occurrences whose word also appears in the same
    record's abstract (case-insensitive, punctuation-split)."""
    if not records:
        raise ValueError("records must be non-empty")
    hits = 0
    total = 0
    for rec in records:
        abstract_words = set(word_split(rec.abstract_text))
        for word in word_split(rec.title):
            total += 1
            if word in abstract_words:
                hits += 1
    if total == 0:
        raise ValueError("corpus contains no title words")
    return hits / total


def save_vocab(vocab: Vocab, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"max_piece_len={vocab.max_piece_len}\n")
        for entry in sorted(vocab.entries):
            fh.write(entry + "\n")


def load_vocab(path: str | Path) -> Vocab:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("max_piece_len="):
            raise ValueError(f"{path}: missing max_piece_len header")
        try:
            max_len = int(header.split("=", 1)[1])
        except ValueError:
            raise ValueError(f"{path}: bad max_piece_len header {header!r}") from None
        entries = frozenset(line.rstrip("\n") for line in fh if line.rstrip("\n"))
    return Vocab(entries=entries, max_piece_len=max(max_len, 1))
