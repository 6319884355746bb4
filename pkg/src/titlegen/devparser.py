"""Naive bracketed-tree chunker for development and tests.

This is NOT a constituency parser; it is a deterministic stand-in that
honors the parser line protocol (one sentence in, one bracketed tree out) so
the pipeline can run without an external parser installed. Words are tagged
from a tiny closed-class lexicon (everything else is NN), noun chunks become
NPs, and each preposition opens a PP over the following chunk.

Run as a child process with::

    python -m titlegen.devparser

or wire it in-process through ``CallableParserAdapter(parse_title)``.
"""

from __future__ import annotations

import sys

from .corpus import word_split

_TAGS = {
    "in": "IN", "of": "IN", "for": "IN", "with": "IN", "on": "IN", "via": "IN",
    "under": "IN", "from": "IN", "by": "IN", "at": "IN", "over": "IN",
    "to": "TO", "and": "CC", "or": "CC",
    "a": "DT", "an": "DT", "the": "DT",
    "-": "HYPH", ",": ",", ".": ".", ":": ":", ";": ":",
}


def _tag(word: str) -> str:
    return _TAGS.get(word, "NN")


def parse_title(sentence: str) -> str:
    """Bracketed tree for one sentence: (ROOT (NP <chunks>)).

    Maximal runs of non-preposition words form NP chunks; a preposition
    starts a PP that wraps the next chunk. Empty input gets a placeholder
    leaf so the output is always a well-formed tree.
    """
    words = word_split(sentence)
    if not words:
        return "(ROOT (NP (NN unk)))"

    def chunk(run: list[str]) -> str:
        return "(NP " + " ".join(f"({_tag(w)} {w})" for w in run) + ")"

    pieces: list[str] = []
    i = 0
    n = len(words)
    while i < n:
        if _tag(words[i]) == "IN":
            prep = f"({_tag(words[i])} {words[i]})"
            i += 1
            run: list[str] = []
            while i < n and _tag(words[i]) != "IN":
                run.append(words[i])
                i += 1
            inner = " " + chunk(run) if run else ""
            pieces.append(f"(PP {prep}{inner})")
        else:
            run = []
            while i < n and _tag(words[i]) != "IN":
                run.append(words[i])
                i += 1
            pieces.append(chunk(run))
    return "(ROOT (NP " + " ".join(pieces) + "))"


def main() -> int:
    for line in sys.stdin:
        sys.stdout.write(parse_title(line.rstrip("\n")) + "\n")
        sys.stdout.flush()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
