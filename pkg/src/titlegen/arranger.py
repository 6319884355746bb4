"""Candidate arrangement: permute title parts, gate by grammar, score, rank.

Every permutation of the parts is assembled and examined (the factorial cost
is capped by ``GenerationConfig.max_parts``). Candidates that pass the
pattern-bank gate and score at or above the evaluation threshold are ranked
by score; when nothing survives, the parts in their original order become a
single fallback candidate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .corpus import Vocab, hyphen_normalize, tokenize
from .grammar import PENN_POS_TAGS, ParserAdapter, PatternBank, check
from .parts import TitlePart, generate_title_parts
from .scorer import TitleScorerModel, evaluate_title
from .tagger import ScorerBackend, adaptive_threshold

EvaluateFn = Callable[[str], float]
ScorerLike = Union[TitleScorerModel, EvaluateFn]


class TitlePartsUnavailable(ValueError):
    """No title parts could be extracted from the abstract."""

    def __init__(self, diagnostic: str):
        super().__init__("no title parts")
        self.diagnostic = diagnostic


@dataclass(frozen=True)
class TitleCandidate:
    """One assembled permutation with its appropriateness score."""

    text: str
    score: float
    ordering: tuple[int, ...]
    grammar_ok: bool


@dataclass(frozen=True)
class GenerationConfig:
    """Operating constants for the end-to-end pipeline."""

    eval_threshold: float = 0.5
    max_parts: int = 8  # hard cap: 8! = 40,320 permutations
    base_keyword_threshold: float = -0.5
    part_range: tuple[int, int] = (3, 6)

    def __post_init__(self) -> None:
        if not 0.0 <= self.eval_threshold <= 1.0:
            raise ValueError("eval_threshold must lie in [0, 1]")
        if self.max_parts < 1:
            raise ValueError("max_parts must be >= 1")
        lo, hi = self.part_range
        if lo < 1 or hi < lo:
            raise ValueError("part_range must satisfy 1 <= lo <= hi")


@dataclass
class ShapeReport:
    """Everything one arrangement pass looked at, for diagnostics and tests."""

    candidates: list[TitleCandidate]
    examined: list[str]
    grammar_passed: list[str]

    @property
    def n_examined(self) -> int:
        return len(self.examined)


@dataclass
class GenerationResult:
    parts: list[TitlePart]
    candidates: list[TitleCandidate]
    used_fallback: bool
    report: Optional[ShapeReport] = None


@dataclass
class ModelBundle:
    """Immutable shared state the pipeline needs: trained models plus the
    parser adapter."""

    vocab: Vocab
    tagger: ScorerBackend
    scorer: ScorerLike
    bank: PatternBank
    parser: ParserAdapter
    pos_tags: frozenset[str] = PENN_POS_TAGS


def _evaluate_fn(scorer: ScorerLike) -> EvaluateFn:
    if isinstance(scorer, TitleScorerModel):
        return lambda text: evaluate_title(scorer, text)
    if callable(scorer):
        return scorer
    raise TypeError(f"unsupported scorer {type(scorer).__name__}")


def assemble(parts: Sequence[TitlePart], ordering: Sequence[int]) -> str:
    """Join part texts in the given order with single spaces; collapse
    whitespace and rejoin hyphens."""
    if sorted(ordering) != list(range(len(parts))):
        raise ValueError(f"ordering {tuple(ordering)} is not a permutation of 0..{len(parts) - 1}")
    joined = " ".join(parts[i].text for i in ordering)
    return hyphen_normalize(" ".join(joined.split()))


def shape_report(
    parts: Sequence[TitlePart],
    bank: PatternBank,
    scorer: ScorerLike,
    parser: ParserAdapter,
    config: GenerationConfig = GenerationConfig(),
    pos_tags: frozenset[str] = PENN_POS_TAGS,
) -> ShapeReport:
    """Examine every permutation of the parts and return the full report.

    All n! orderings are assembled and parsed in one batched adapter call,
    enumerated in lexicographic index order — a tree-file adapter must list
    its trees in that order. A permutation survives iff its tree's skeleton
    is in the bank and its score clears ``config.eval_threshold``.
    Candidates are deduplicated by text (keeping the best score) and ranked
    by score, ties broken by text. A candidate whose tree line fails to
    parse merely fails the gate.
    """
    n = len(parts)
    if n == 0:
        raise ValueError("parts must be non-empty")
    if n > config.max_parts:
        raise ValueError(f"too many parts: {n} exceeds the cap of {config.max_parts}")
    evaluate = _evaluate_fn(scorer)

    orderings = list(itertools.permutations(range(n)))
    texts = [assemble(parts, ordering) for ordering in orderings]
    trees = parser.parse_many(texts)

    grammar_passed: list[str] = []
    best: dict[str, TitleCandidate] = {}
    for ordering, text, tree in zip(orderings, texts, trees):
        if tree is None or not check(bank, tree, pos_tags):
            continue
        grammar_passed.append(text)
        score = evaluate(text)
        if score < config.eval_threshold:
            continue
        existing = best.get(text)
        if existing is None or score > existing.score:
            best[text] = TitleCandidate(text=text, score=score, ordering=ordering, grammar_ok=True)

    ranked = sorted(best.values(), key=lambda c: (-c.score, c.text))
    return ShapeReport(candidates=ranked, examined=texts, grammar_passed=grammar_passed)


def shape(
    parts: Sequence[TitlePart],
    bank: PatternBank,
    scorer: ScorerLike,
    parser: ParserAdapter,
    config: GenerationConfig = GenerationConfig(),
    pos_tags: frozenset[str] = PENN_POS_TAGS,
) -> list[TitleCandidate]:
    """Ranked, grammar-checked, threshold-passing candidates over all
    permutations of the parts."""
    return shape_report(parts, bank, scorer, parser, config, pos_tags).candidates


def fallback_original_order(parts: Sequence[TitlePart], scorer: ScorerLike) -> TitleCandidate:
    """The parts joined in their original order, marked as having failed the
    grammar gate; the score is informational only."""
    if not parts:
        raise ValueError("parts must be non-empty")
    ordering = tuple(range(len(parts)))
    text = assemble(parts, ordering)
    return TitleCandidate(
        text=text, score=_evaluate_fn(scorer)(text), ordering=ordering, grammar_ok=False
    )


def extract_parts(
    abstract: str, bundle: ModelBundle, config: GenerationConfig = GenerationConfig()
) -> list[TitlePart]:
    """Abstract -> adaptive keyword selection -> cleaned title parts.

    Raises :class:`TitlePartsUnavailable` (with the top token scores as a
    diagnostic) when nothing can be extracted.
    """
    tokens = tokenize(abstract, bundle.vocab)
    if not tokens.pieces:
        raise TitlePartsUnavailable("abstract contains no tokens")
    mask = adaptive_threshold(
        bundle.tagger,
        tokens,
        base=config.base_keyword_threshold,
        min_parts=config.part_range[0],
        max_parts=config.part_range[1],
    )
    parts = generate_title_parts(tokens, mask)
    if not parts:
        pairs = sorted(zip(mask.scores, tokens.words()), reverse=True)[:5]
        diagnostic = "top token scores: " + ", ".join(f"{w}={s:.3f}" for s, w in pairs)
        raise TitlePartsUnavailable(diagnostic)
    return parts


def shape_with_fallback(
    parts: Sequence[TitlePart],
    bundle: ModelBundle,
    config: GenerationConfig = GenerationConfig(),
) -> tuple[list[TitleCandidate], bool, ShapeReport]:
    """Arrange the parts; fall back to the original order when every
    permutation is rejected."""
    report = shape_report(parts, bundle.bank, bundle.scorer, bundle.parser, config, bundle.pos_tags)
    if report.candidates:
        return report.candidates, False, report
    return [fallback_original_order(parts, bundle.scorer)], True, report


def generate_from_abstract(
    abstract: str,
    bundle: ModelBundle,
    config: GenerationConfig = GenerationConfig(),
    user_edited_parts: Optional[Sequence[TitlePart]] = None,
) -> GenerationResult:
    """End-to-end generation for one abstract.

    When ``user_edited_parts`` is given it replaces the extracted parts
    before arrangement, mirroring the human editing step of the interactive
    flow.
    """
    parts = extract_parts(abstract, bundle, config)
    working = list(user_edited_parts) if user_edited_parts else parts
    candidates, used_fallback, report = shape_with_fallback(working, bundle, config)
    return GenerationResult(
        parts=working, candidates=candidates, used_fallback=used_fallback, report=report
    )
