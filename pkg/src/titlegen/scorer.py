"""Title appropriateness scoring: candidate string -> score in (0, 1).

The reference model is an interpolated bigram language model over real
titles with a two-parameter logistic calibration fitted on positive titles
versus two kinds of negatives (first abstract sentences and word-shuffled
titles). A neural scorer can replace it through the external line-protocol
adapter: one candidate per input line, one decimal in [0, 1] per output line.
"""

from __future__ import annotations

import json
import math
import random
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .corpus import PaperRecord, make_eval_negatives, word_split

CALIBRATION_A_GRID = (0.5, 1.0, 2.0, 4.0, 8.0)
CALIBRATION_B_GRID = tuple(x / 2 for x in range(-8, 9))  # -4.0 .. 4.0 step 0.5


@dataclass(frozen=True)
class LabeledTitle:
    """One training item: a real title (label 1) or a negative (label 0)."""

    text: str
    label: int
    kind: str  # real_title | first_sentence | shuffled_title

    def __post_init__(self) -> None:
        if self.kind not in ("real_title", "first_sentence", "shuffled_title"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.label != (1 if self.kind == "real_title" else 0):
            raise ValueError("label must be 1 exactly for real titles")


@dataclass(frozen=True)
class TitleScorerModel:
    """Interpolated bigram LM over titles plus logistic calibration.

    Scores are computed from the mean per-token log10 probability m as
    ``logistic(a * (m - b))``; the calibration grid for b spans [-4, 4],
    which covers the base-10 log-probability range of short titles.
    """

    unigram_counts: dict[str, int]
    bigram_counts: dict[tuple[str, str], int]
    interpolation_lambda: float
    calibration_a: float
    calibration_b: float
    vocab_size: int
    total_unigrams: int

    def __post_init__(self) -> None:
        if not 0 < self.interpolation_lambda < 1:
            raise ValueError("interpolation lambda must lie in (0, 1)")
        if self.vocab_size < 1:
            raise ValueError("vocab_size must be >= 1")


def build_training_set(records: Sequence[PaperRecord], seed: int) -> list[LabeledTitle]:
    """One positive (the title) and up to two negatives per record.

    Negatives are the first abstract sentence and a seeded word shuffle of
    the title; records whose title cannot be reordered (one word, or all
    words equal) contribute only the sentence negative.
    """
    if not records:
        raise ValueError("records must be non-empty")
    rng = random.Random(seed)
    items: list[LabeledTitle] = []
    for record in records:
        child_seed = rng.randrange(2**32)
        items.append(LabeledTitle(text=record.title, label=1, kind="real_title"))
        items.append(
            LabeledTitle(text=record.abstract_sentences[0], label=0, kind="first_sentence")
        )
        try:
            negatives = make_eval_negatives(record, seed=child_seed)
        except ValueError:
            continue
        items.append(LabeledTitle(text=negatives.shuffled_title, label=0, kind="shuffled_title"))
    return items


def _mean_log10_prob(
    words: Sequence[str],
    unigram_counts: dict[str, int],
    bigram_counts: dict[tuple[str, str], int],
    lam: float,
    vocab_size: int,
    total_unigrams: int,
) -> float:
    def p_unigram(w: str) -> float:
        return (unigram_counts.get(w, 0) + 1) / (total_unigrams + vocab_size)

    total = 0.0
    prev: str | None = None
    for w in words:
        p_uni = p_unigram(w)
        if prev is None:
            p = p_uni
        else:
            p_bi = (bigram_counts.get((prev, w), 0) + 1) / (
                unigram_counts.get(prev, 0) + vocab_size
            )
            p = lam * p_bi + (1 - lam) * p_uni
        total += math.log10(p)
        prev = w
    return total / len(words)


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-min(x, 700.0)))
    z = math.exp(max(x, -700.0))
    return z / (1.0 + z)


def train_scorer(items: Sequence[LabeledTitle], lam: float = 0.7) -> TitleScorerModel:
    """Fit the language model on positives and calibrate on the full set.

    The LM counts come from real titles only; negatives enter only through
    the calibration, a grid search over (a, b) maximizing accuracy at the
    0.5 threshold (ties resolved toward the smallest a, then the smallest b).
    """
    if not 0 < lam < 1:
        raise ValueError("interpolation lambda must lie in (0, 1)")
    positives = [it for it in items if it.label == 1]
    negatives = [it for it in items if it.label == 0]
    if not positives or not negatives:
        raise ValueError("training needs at least one positive and one negative item")

    unigrams: dict[str, int] = {}
    bigrams: dict[tuple[str, str], int] = {}
    for item in positives:
        words = word_split(item.text)
        for w in words:
            unigrams[w] = unigrams.get(w, 0) + 1
        for a, b in zip(words, words[1:]):
            bigrams[(a, b)] = bigrams.get((a, b), 0) + 1
    vocab_size = len(unigrams) + 1
    total_unigrams = sum(unigrams.values())

    means: list[tuple[float, int]] = []
    for item in items:
        words = word_split(item.text)
        if not words:
            continue
        means.append(
            (_mean_log10_prob(words, unigrams, bigrams, lam, vocab_size, total_unigrams), item.label)
        )

    best_a, best_b, best_acc = CALIBRATION_A_GRID[0], CALIBRATION_B_GRID[0], -1.0
    for a in CALIBRATION_A_GRID:
        for b in CALIBRATION_B_GRID:
            correct = sum(1 for m, label in means if (m >= b) == (label == 1))
            acc = correct / len(means)
            if acc > best_acc:
                best_a, best_b, best_acc = a, b, acc

    return TitleScorerModel(
        unigram_counts=unigrams,
        bigram_counts=bigrams,
        interpolation_lambda=lam,
        calibration_a=best_a,
        calibration_b=best_b,
        vocab_size=vocab_size,
        total_unigrams=total_unigrams,
    )


def evaluate_title(model: TitleScorerModel, text: str) -> float:
    """Appropriateness score in (0, 1) for one candidate string."""
    if not text:
        raise ValueError("text must be non-empty")
    words = word_split(text)
    if not words:
        raise ValueError("text contains no words")
    mean = _mean_log10_prob(
        words,
        model.unigram_counts,
        model.bigram_counts,
        model.interpolation_lambda,
        model.vocab_size,
        model.total_unigrams,
    )
    return _logistic(model.calibration_a * (mean - model.calibration_b))


def appropriateness_ratio(
    model: TitleScorerModel, titles: Sequence[str], threshold: float = 0.5
) -> float:
    """Fraction of titles scoring at or above the threshold."""
    if not titles:
        raise ValueError("titles must be non-empty")
    passed = sum(1 for t in titles if evaluate_title(model, t) >= threshold)
    return passed / len(titles)


def save_scorer(model: TitleScorerModel, path: str | Path) -> None:
    nested: dict[str, dict[str, int]] = {}
    for (a, b), count in model.bigram_counts.items():
        nested.setdefault(a, {})[b] = count
    payload = {
        "unigram_counts": model.unigram_counts,
        "bigram_counts": nested,
        "interpolation_lambda": model.interpolation_lambda,
        "calibration": {"a": model.calibration_a, "b": model.calibration_b},
        "vocab_size": model.vocab_size,
        "total_unigrams": model.total_unigrams,
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_scorer(path: str | Path) -> TitleScorerModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    bigrams: dict[tuple[str, str], int] = {}
    for a, row in payload["bigram_counts"].items():
        for b, count in row.items():
            bigrams[(a, b)] = int(count)
    unigrams = {str(k): int(v) for k, v in payload["unigram_counts"].items()}
    return TitleScorerModel(
        unigram_counts=unigrams,
        bigram_counts=bigrams,
        interpolation_lambda=float(payload["interpolation_lambda"]),
        calibration_a=float(payload["calibration"]["a"]),
        calibration_b=float(payload["calibration"]["b"]),
        vocab_size=int(payload["vocab_size"]),
        total_unigrams=int(payload.get("total_unigrams", sum(unigrams.values()))),
    )


class ExternalTitleScorer:
    """Child-process scorer speaking the line protocol: one candidate per
    input line, one decimal in [0, 1] per output line. Each batch runs a
    fresh process."""

    def __init__(self, command: Sequence[str]):
        if not command:
            raise ValueError("scorer command must be non-empty")
        self.command = list(command)

    def evaluate_many(self, texts: Sequence[str]) -> list[float]:
        payload = "".join(t.replace("\n", " ") + "\n" for t in texts)
        proc = subprocess.run(self.command, input=payload, capture_output=True, text=True)
        if proc.returncode != 0:
            raise RuntimeError(f"scorer command exited with code {proc.returncode}")
        lines = [ln for ln in proc.stdout.splitlines() if ln.strip()]
        if len(lines) != len(texts):
            raise RuntimeError(f"expected {len(texts)} scores, got {len(lines)}")
        scores = [float(ln) for ln in lines]
        for s in scores:
            if not 0.0 <= s <= 1.0:
                raise RuntimeError(f"scorer returned {s!r}, outside [0, 1]")
        return scores

    def __call__(self, text: str) -> float:
        return self.evaluate_many([text])[0]
