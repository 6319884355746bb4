"""Title parts: contiguous keyword runs of the abstract, cleaned for editing.

Pipeline: find maximal runs of selected pieces (padded out to whole words),
detokenize each run back to surface text, then drop bare hyphens, duplicates,
and parts wholly contained in another part.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

from .corpus import TokenSeq, detokenize

if TYPE_CHECKING:
    from .tagger import KeywordMask

Span = tuple[int, int]


@dataclass(frozen=True)
class TitlePart:
    """One editable, permutable unit of a title.

    ``source_span`` is the inclusive piece-index range into the abstract
    token sequence; user-authored parts have none.
    """

    text: str
    source_span: Span | None = None

    def __post_init__(self) -> None:
        if not self.text.strip():
            raise ValueError("part text must be non-empty")

    def words(self) -> list[str]:
        return self.text.split()


def get_longest_matches(tokens: TokenSeq, mask: "KeywordMask") -> list[Span]:
    """Maximal runs of consecutive selected pieces, in abstract order.

    Runs that start or end mid-word are padded to the word boundary so no
    span ever begins or ends on a continuation piece.
    """
    selected = mask.selected
    if len(selected) != len(tokens.pieces):
        raise ValueError(f"mask has {len(selected)} entries for {len(tokens.pieces)} pieces")
    pieces = tokens.pieces
    n = len(pieces)
    spans: list[Span] = []
    i = 0
    while i < n:
        if not selected[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and selected[j + 1]:
            j += 1
        start, end = i, j
        while start > 0 and pieces[start].is_continuation:
            start -= 1
        while end + 1 < n and pieces[end + 1].is_continuation:
            end += 1
        if (start, end) not in spans:
            spans.append((start, end))
        i = j + 1
    return spans


def repair(tokens: TokenSeq, span: Span) -> str:
    """Detokenize one span back to surface text (merge "##" pieces, single
    spaces between words, hyphens rejoined)."""
    start, end = span
    if not (0 <= start <= end < len(tokens.pieces)):
        raise ValueError(f"span {span} out of range for {len(tokens.pieces)} pieces")
    return detokenize(TokenSeq(pieces=tokens.pieces[start : end + 1], origin=tokens.origin))


def dump(parts: Sequence[TitlePart]) -> list[TitlePart]:
    """Drop unnecessary parts: bare "-", exact duplicate texts (first kept),
    and parts whose word sequence appears contiguously inside another part."""
    deduped: list[TitlePart] = []
    seen: set[str] = set()
    for part in parts:
        if part.text == "-":
            continue
        if part.text in seen:
            continue
        seen.add(part.text)
        deduped.append(part)

    words = {part.text: part.words() for part in deduped}

    def contained(inner: list[str], outer: list[str]) -> bool:
        if len(inner) >= len(outer):
            return False
        return any(outer[i : i + len(inner)] == inner for i in range(len(outer) - len(inner) + 1))

    kept: list[TitlePart] = []
    for part in deduped:
        mine = words[part.text]
        if any(contained(mine, words[other.text]) for other in deduped if other.text != part.text):
            continue
        kept.append(part)
    return kept


def generate_title_parts(tokens: TokenSeq, mask: "KeywordMask") -> list[TitlePart]:
    """Full part extraction for one abstract: runs, repair, cleanup.

    User editing happens downstream (the session service swaps in edited
    parts before arrangement).
    """
    parts = [TitlePart(text=repair(tokens, span), source_span=span) for span in get_longest_matches(tokens, mask)]
    return dump(parts)
