"""Per-token keyword scoring: which abstract tokens belong in the title.

The reference model is a smoothed log-odds token classifier trained on
labeled abstracts; a neural tagger can be swapped in through the external
process backend, which speaks a line protocol (tab-separated serialized
pieces in, space-separated scores out).
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from math import log
from pathlib import Path
from typing import Protocol, Sequence

from .corpus import LabeledTokenSeq, SubwordPiece, TokenSeq, serialize_piece
from . import parts as _parts


def piece_key(piece: SubwordPiece) -> str:
    """Count key for a piece; continuations are distinct token types."""
    return serialize_piece(piece)


@dataclass(frozen=True)
class TaggerModel:
    """Smoothed log-odds keyword model: per-token title/non-title counts."""

    token_title_count: dict[str, int]
    token_nontitle_count: dict[str, int]
    total_title: int
    total_nontitle: int
    smoothing_alpha: float

    def __post_init__(self) -> None:
        if self.smoothing_alpha <= 0:
            raise ValueError("smoothing must be positive")
        if self.total_title != sum(self.token_title_count.values()):
            raise ValueError("total_title does not match counts")
        if self.total_nontitle != sum(self.token_nontitle_count.values()):
            raise ValueError("total_nontitle does not match counts")

    @property
    def vocab_size(self) -> int:
        return len(set(self.token_title_count) | set(self.token_nontitle_count))


@dataclass(frozen=True)
class KeywordMask:
    """Per-token scores plus the boolean selection at a threshold."""

    scores: tuple[float, ...]
    selected: tuple[bool, ...]
    threshold_used: float

    def __post_init__(self) -> None:
        if len(self.scores) != len(self.selected):
            raise ValueError("scores and selected must have equal length")


class ScorerBackend(Protocol):
    """Anything that maps a token sequence to one score per piece."""

    def score(self, tokens: TokenSeq) -> list[float]: ...


def train_tagger(pairs: Sequence[LabeledTokenSeq], alpha: float = 1.0) -> TaggerModel:
    """Accumulate per-token counts from labeled abstracts."""
    if not pairs:
        raise ValueError("training pairs must be non-empty")
    if alpha <= 0:
        raise ValueError("smoothing must be positive")
    title: dict[str, int] = {}
    nontitle: dict[str, int] = {}
    for pair in pairs:
        for piece, label in zip(pair.tokens.pieces, pair.labels):
            key = piece_key(piece)
            bucket = title if label == 1 else nontitle
            bucket[key] = bucket.get(key, 0) + 1
    return TaggerModel(
        token_title_count=title,
        token_nontitle_count=nontitle,
        total_title=sum(title.values()),
        total_nontitle=sum(nontitle.values()),
        smoothing_alpha=alpha,
    )


def score_tokens(model: TaggerModel, tokens: TokenSeq) -> list[float]:
    """Log-odds of title membership per piece.

    score(t) = log((c_title(t)+a) / (T_title+aV)) - log((c_non(t)+a) / (T_non+aV))
    with V the number of distinct tokens seen in training. Unseen tokens get
    the pure-smoothing score.
    """
    alpha = model.smoothing_alpha
    v = model.vocab_size
    denom_title = model.total_title + alpha * v
    denom_non = model.total_nontitle + alpha * v
    scores: list[float] = []
    for piece in tokens.pieces:
        key = piece_key(piece)
        p_title = (model.token_title_count.get(key, 0) + alpha) / denom_title
        p_non = (model.token_nontitle_count.get(key, 0) + alpha) / denom_non
        scores.append(log(p_title) - log(p_non))
    return scores


def select_keywords(scores: Sequence[float], threshold: float) -> KeywordMask:
    """Mark every token whose score is at or above the threshold."""
    return KeywordMask(
        scores=tuple(scores),
        selected=tuple(s >= threshold for s in scores),
        threshold_used=threshold,
    )


class ModelBackend:
    """Backend adapter around the reference :class:`TaggerModel`."""

    def __init__(self, model: TaggerModel):
        self.model = model

    def score(self, tokens: TokenSeq) -> list[float]:
        return score_tokens(self.model, tokens)


class ExternalTaggerBackend:
    """Child-process backend speaking the line protocol.

    Request: one line of tab-separated serialized pieces (continuations carry
    the "##" prefix). Response: one line of space-separated decimal scores,
    one per piece. The child is kept alive between calls; requests are
    serialized per instance.
    """

    def __init__(self, command: Sequence[str]):
        self.command = list(command)
        self._proc: subprocess.Popen[str] | None = None

    def _ensure_running(self) -> subprocess.Popen[str]:
        if self._proc is None or self._proc.poll() is not None:
            self._proc = subprocess.Popen(
                self.command,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        return self._proc

    def score(self, tokens: TokenSeq) -> list[float]:
        proc = self._ensure_running()
        assert proc.stdin is not None and proc.stdout is not None
        request = "\t".join(serialize_piece(p) for p in tokens.pieces)
        proc.stdin.write(request + "\n")
        proc.stdin.flush()
        response = proc.stdout.readline()
        if not response:
            raise RuntimeError(
                f"tagger backend {self.command[0]!r} closed its output (exit code {proc.poll()})"
            )
        try:
            scores = [float(x) for x in response.split()]
        except ValueError:
            raise RuntimeError(f"tagger backend returned a non-numeric score: {response.strip()!r}") from None
        if len(scores) != len(tokens.pieces):
            raise RuntimeError(
                f"tagger backend returned {len(scores)} scores for {len(tokens.pieces)} tokens"
            )
        return scores

    def close(self) -> None:
        if self._proc is not None and self._proc.poll() is None:
            if self._proc.stdin is not None:
                self._proc.stdin.close()
            self._proc.wait(timeout=5)
        self._proc = None

    def __enter__(self) -> "ExternalTaggerBackend":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def adaptive_threshold(
    backend: ScorerBackend,
    tokens: TokenSeq,
    base: float = -0.5,
    min_parts: int = 3,
    max_parts: int = 6,
    step: float = 0.1,
    max_iters: int = 100,
) -> KeywordMask:
    """Walk the threshold in fixed steps until the title-part count lands in
    [min_parts, max_parts].

    Too many parts raises the threshold, too few lowers it. Stops on success,
    on revisiting a threshold (oscillation), or after max_iters, returning the
    mask whose part count is closest to the target interval (ties go to the
    higher threshold).
    """
    if not tokens.pieces:
        raise ValueError("tokens must be non-empty")
    scores = backend.score(tokens)
    if len(scores) != len(tokens.pieces):
        raise RuntimeError(f"backend returned {len(scores)} scores for {len(tokens.pieces)} tokens")

    visited: dict[int, tuple[float, KeywordMask, int]] = {}
    offset = 0
    for _ in range(max_iters):
        if offset in visited:
            break
        threshold = round(base + offset * step, 10)
        mask = select_keywords(scores, threshold)
        count = len(_parts.generate_title_parts(tokens, mask))
        visited[offset] = (threshold, mask, count)
        if min_parts <= count <= max_parts:
            return mask
        offset = offset + 1 if count > max_parts else offset - 1

    def distance(count: int) -> int:
        if count < min_parts:
            return min_parts - count
        if count > max_parts:
            return count - max_parts
        return 0

    best = min(visited.values(), key=lambda entry: (distance(entry[2]), -entry[0]))
    return best[1]


def save_tagger(model: TaggerModel, path: str | Path) -> None:
    payload = {
        "token_title_count": model.token_title_count,
        "token_nontitle_count": model.token_nontitle_count,
        "total_title": model.total_title,
        "total_nontitle": model.total_nontitle,
        "smoothing_alpha": model.smoothing_alpha,
    }
    Path(path).write_text(json.dumps(payload, ensure_ascii=False, sort_keys=True), encoding="utf-8")


def load_tagger(path: str | Path) -> TaggerModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return TaggerModel(
        token_title_count={str(k): int(v) for k, v in payload["token_title_count"].items()},
        token_nontitle_count={str(k): int(v) for k, v in payload["token_nontitle_count"].items()},
        total_title=int(payload["total_title"]),
        total_nontitle=int(payload["total_nontitle"]),
        smoothing_alpha=float(payload["smoothing_alpha"]),
    )
