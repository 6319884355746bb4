"""In-memory session store with TTL expiry and optional disk snapshots.

Sessions hold the human-in-the-loop state: the abstract, the parts as
generated, the parts as last edited, and the candidates of the most recent
generation. The store map is guarded by one lock; each session carries its
own lock so handlers for one session serialize while distinct sessions
proceed concurrently.
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from ..arranger import TitleCandidate
from ..parts import TitlePart

DEFAULT_TTL_SECONDS = 24 * 3600.0

PARTS_READY = "parts_ready"
GENERATED = "generated"


@dataclass
class Session:
    id: str
    abstract: str
    generated_parts: list[TitlePart]
    current_parts: list[TitlePart]
    candidates: Optional[list[TitleCandidate]] = None
    used_fallback: Optional[bool] = None
    n_examined: int = 0
    state: str = PARTS_READY
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)


def new_session_id() -> str:
    return secrets.token_hex(16)


class SessionStore:
    def __init__(self, ttl_seconds: float = DEFAULT_TTL_SECONDS):
        self.ttl_seconds = ttl_seconds
        self._sessions: dict[str, Session] = {}
        self._lock = threading.RLock()

    def create(self, abstract: str, parts: list[TitlePart]) -> Session:
        session = Session(
            id=new_session_id(),
            abstract=abstract,
            generated_parts=list(parts),
            current_parts=list(parts),
        )
        with self._lock:
            self._purge_expired()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge_expired()
            if session_id not in self._sessions:
                raise KeyError(session_id)
            return self._sessions[session_id]

    def _purge_expired(self) -> None:
        cutoff = time.time() - self.ttl_seconds
        expired = [sid for sid, s in self._sessions.items() if s.created_at < cutoff]
        for sid in expired:
            del self._sessions[sid]

    def __len__(self) -> int:
        with self._lock:
            self._purge_expired()
            return len(self._sessions)

    def snapshot(self, path: str | Path) -> None:
        """Write all live sessions to a JSON file."""
        with self._lock:
            self._purge_expired()
            payload = [_session_to_dict(s) for s in self._sessions.values()]
        Path(path).write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")

    def restore(self, path: str | Path) -> int:
        """Load sessions from a snapshot file; returns how many were loaded."""
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        loaded = 0
        with self._lock:
            for entry in payload:
                session = _session_from_dict(entry)
                self._sessions[session.id] = session
                loaded += 1
            self._purge_expired()
        return loaded


def _session_to_dict(s: Session) -> dict:
    return {
        "id": s.id,
        "abstract": s.abstract,
        "generated_parts": [[p.text, p.source_span] for p in s.generated_parts],
        "current_parts": [[p.text, p.source_span] for p in s.current_parts],
        "candidates": None
        if s.candidates is None
        else [[c.text, c.score, list(c.ordering), c.grammar_ok] for c in s.candidates],
        "used_fallback": s.used_fallback,
        "n_examined": s.n_examined,
        "state": s.state,
        "created_at": s.created_at,
    }


def _parts_from(entries: list) -> list[TitlePart]:
    return [
        TitlePart(text=text, source_span=tuple(span) if span else None) for text, span in entries
    ]


def _session_from_dict(entry: dict) -> Session:
    candidates = None
    if entry["candidates"] is not None:
        candidates = [
            TitleCandidate(text=text, score=score, ordering=tuple(ordering), grammar_ok=ok)
            for text, score, ordering, ok in entry["candidates"]
        ]
    return Session(
        id=entry["id"],
        abstract=entry["abstract"],
        generated_parts=_parts_from(entry["generated_parts"]),
        current_parts=_parts_from(entry["current_parts"]),
        candidates=candidates,
        used_fallback=entry["used_fallback"],
        n_examined=entry.get("n_examined", 0),
        state=entry["state"],
        created_at=entry["created_at"],
    )
