"""Evaluation harness: ROUGE-1/-L, BLEU-2, graph-based sentence baselines,
and a multi-system benchmark report.

ROUGE scores are reported as F1 (the symmetric default; the column names in
the report record the choice). BLEU-2 smooths a zero n-gram precision by
substituting 1/(2*|candidate|), since unsmoothed bigram precision is
frequently zero on short titles.
"""

from __future__ import annotations

import csv
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .corpus import PaperRecord, word_split

logger = logging.getLogger(__name__)

DAMPING = 0.85
LEXRANK_SIM_THRESHOLD = 0.1
POWER_TOL = 1e-6
POWER_MAX_ITERS = 100

TitleSystem = tuple[str, Callable[[PaperRecord], str]]


@dataclass(frozen=True)
class OverlapScore:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricReport:
    system_name: str
    avg_words: float
    rouge1_f: float
    rougeL_f: float
    bleu2: float
    n_items: int


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def rouge1(candidate: str, reference: str) -> OverlapScore:
    """Clipped unigram overlap on lowercased, punctuation-split words."""
    cand = word_split(candidate)
    ref = word_split(reference)
    if not cand or not ref:
        raise ValueError("candidate and reference must be non-empty")
    cand_counts = Counter(cand)
    ref_counts = Counter(ref)
    overlap = sum(min(count, ref_counts[w]) for w, count in cand_counts.items())
    precision = overlap / len(cand)
    recall = overlap / len(ref)
    return OverlapScore(precision, recall, _f1(precision, recall))


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    # single-row DP over the shorter second dimension
    if len(b) > len(a):
        a, b = b, a
    row = [0] * (len(b) + 1)
    for x in a:
        prev = 0
        for j, y in enumerate(b, start=1):
            cur = row[j]
            row[j] = prev + 1 if x == y else max(row[j], row[j - 1])
            prev = cur
    return row[len(b)]


def rougeL(candidate: str, reference: str) -> OverlapScore:
    """Longest-common-subsequence overlap over word sequences."""
    cand = word_split(candidate)
    ref = word_split(reference)
    if not cand or not ref:
        raise ValueError("candidate and reference must be non-empty")
    lcs = _lcs_length(cand, ref)
    precision = lcs / len(cand)
    recall = lcs / len(ref)
    return OverlapScore(precision, recall, _f1(precision, recall))


def _ngrams(words: Sequence[str], n: int) -> Counter:
    return Counter(tuple(words[i : i + n]) for i in range(len(words) - n + 1))


def bleu2(candidate: str, reference: str) -> float:
    """Cumulative BLEU over unigrams and bigrams with uniform 0.5 weights.

    Brevity penalty exp(1 - |ref|/|cand|) applies when the candidate is
    shorter than the reference; a zero modified precision is replaced by
    1/(2*|cand|).
    """
    cand = word_split(candidate)
    ref = word_split(reference)
    if not cand or not ref:
        raise ValueError("candidate and reference must be non-empty")
    precisions: list[float] = []
    for n in (1, 2):
        cand_ngrams = _ngrams(cand, n)
        ref_ngrams = _ngrams(ref, n)
        total = sum(cand_ngrams.values())
        clipped = sum(min(count, ref_ngrams[g]) for g, count in cand_ngrams.items())
        p = clipped / total if total else 0.0
        if p == 0.0:
            p = 1.0 / (2 * len(cand))
        precisions.append(p)
    bp = math.exp(1 - len(ref) / len(cand)) if len(cand) < len(ref) else 1.0
    return bp * math.exp(0.5 * math.log(precisions[0]) + 0.5 * math.log(precisions[1]))


def _pagerank(weights: list[list[float]]) -> list[float]:
    """Damped power iteration over a weighted similarity graph; rows with no
    outgoing weight distribute uniformly."""
    n = len(weights)
    if n == 0:
        return []
    degrees = [sum(row) for row in weights]
    scores = [1.0 / n] * n
    for _ in range(POWER_MAX_ITERS):
        incoming = [0.0] * n
        for j in range(n):
            if degrees[j] > 0:
                share = scores[j] / degrees[j]
                row = weights[j]
                for i in range(n):
                    if row[i] > 0:
                        incoming[i] += share * row[i]
            else:
                share = scores[j] / n
                for i in range(n):
                    incoming[i] += share
        updated = [(1 - DAMPING) / n + DAMPING * inc for inc in incoming]
        delta = sum(abs(u - s) for u, s in zip(updated, scores))
        scores = updated
        if delta < POWER_TOL:
            break
    return scores


def _top_sentences(sentences: Sequence[str], scores: Sequence[float], k: int) -> str:
    # ties go to the earliest sentence; multi-sentence summaries keep source order
    order = sorted(range(len(sentences)), key=lambda i: (-round(scores[i], 12), i))
    chosen = sorted(order[:k])
    return " ".join(sentences[i] for i in chosen)


def lexrank_summary(sentences: Sequence[str], k: int = 1) -> str:
    """Centrality-ranked summary: TF-IDF cosine graph thresholded at 0.1,
    damped power iteration, top-k sentences (earliest wins ties)."""
    if not sentences:
        raise ValueError("sentences must be non-empty")
    if len(sentences) == 1:
        return sentences[0]
    token_lists = [word_split(s) for s in sentences]
    n = len(sentences)
    df: Counter[str] = Counter()
    for tokens in token_lists:
        df.update(set(tokens))
    idf = {w: math.log(n / count) for w, count in df.items()}

    tfs = [Counter(tokens) for tokens in token_lists]
    norms = [
        math.sqrt(sum((count * idf[w]) ** 2 for w, count in tf.items())) for tf in tfs
    ]

    weights = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if norms[i] == 0 or norms[j] == 0:
                continue
            dot = sum(count * tfs[j][w] * idf[w] ** 2 for w, count in tfs[i].items())
            sim = dot / (norms[i] * norms[j])
            if sim >= LEXRANK_SIM_THRESHOLD:
                weights[i][j] = weights[j][i] = sim
    scores = _pagerank(weights)
    return _top_sentences(sentences, scores, k)


def textrank_summary(sentences: Sequence[str], k: int = 1) -> str:
    """Word-overlap graph summary: similarity |overlap| / (log|Si| + log|Sj|)
    with damped power iteration; one-word sentences contribute no edges."""
    if not sentences:
        raise ValueError("sentences must be non-empty")
    if len(sentences) == 1:
        return sentences[0]
    token_lists = [word_split(s) for s in sentences]
    word_sets = [set(tokens) for tokens in token_lists]
    n = len(sentences)
    weights = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            len_i, len_j = len(token_lists[i]), len(token_lists[j])
            if len_i <= 1 or len_j <= 1:
                continue
            overlap = len(word_sets[i] & word_sets[j])
            if overlap:
                sim = overlap / (math.log(len_i) + math.log(len_j))
                weights[i][j] = weights[j][i] = sim
    scores = _pagerank(weights)
    return _top_sentences(sentences, scores, k)


def benchmark(records: Sequence[PaperRecord], systems: Sequence[TitleSystem]) -> list[MetricReport]:
    """Run each system over the corpus and average the metrics against the
    true titles. Per-record failures are logged and excluded; a system that
    fails on every record raises."""
    if not records:
        raise ValueError("records must be non-empty")
    reports: list[MetricReport] = []
    for name, fn in systems:
        r1_sum = rl_sum = b2_sum = words_sum = 0.0
        n_ok = 0
        n_failed = 0
        for record in records:
            try:
                generated = fn(record)
                if not generated or not generated.strip():
                    raise ValueError("system produced an empty title")
                r1_sum += rouge1(generated, record.title).f1
                rl_sum += rougeL(generated, record.title).f1
                b2_sum += bleu2(generated, record.title)
                words_sum += len(generated.split())
                n_ok += 1
            except Exception as exc:  # noqa: BLE001 - a bad record must not sink the run
                n_failed += 1
                logger.warning("system %s failed on record %s: %s", name, record.id, exc)
        if n_ok == 0:
            raise RuntimeError(f"system {name} failed on every record")
        if n_failed:
            logger.warning("system %s: %d of %d records excluded", name, n_failed, len(records))
        reports.append(
            MetricReport(
                system_name=name,
                avg_words=words_sum / n_ok,
                rouge1_f=r1_sum / n_ok,
                rougeL_f=rl_sum / n_ok,
                bleu2=b2_sum / n_ok,
                n_items=n_ok,
            )
        )
    return reports


CSV_HEADER = ["system", "avg_words", "rouge1_f", "rougeL_f", "bleu2", "n_items"]


def write_report_csv(reports: Sequence[MetricReport], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for r in reports:
            writer.writerow(
                [r.system_name, f"{r.avg_words:.4f}", f"{r.rouge1_f:.4f}", f"{r.rougeL_f:.4f}", f"{r.bleu2:.4f}", r.n_items]
            )


def format_report_table(reports: Sequence[MetricReport]) -> str:
    rows = [CSV_HEADER] + [
        [r.system_name, f"{r.avg_words:.1f}", f"{r.rouge1_f:.4f}", f"{r.rougeL_f:.4f}", f"{r.bleu2:.4f}", str(r.n_items)]
        for r in reports
    ]
    widths = [max(len(row[i]) for row in rows) for i in range(len(CSV_HEADER))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
    return "\n".join(lines)
