"""Request/response models for the session API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel

SessionState = Literal["parts_ready", "generated"]


class SessionCreateRequest(BaseModel):
    abstract: str


class PartsUpdateRequest(BaseModel):
    parts: list[str]


class PartOut(BaseModel):
    text: str
    span: Optional[tuple[int, int]] = None


class CandidateOut(BaseModel):
    text: str
    score: float
    grammar_ok: bool


class SessionView(BaseModel):
    session_id: str
    state: SessionState
    abstract: str
    parts: list[PartOut]
    candidates: Optional[list[CandidateOut]] = None
    used_fallback: Optional[bool] = None
    created_at: float


class CandidatesResponse(BaseModel):
    session_id: str
    state: SessionState
    candidates: list[CandidateOut]
    used_fallback: bool
    n_examined: int


class ErrorBody(BaseModel):
    error: str
    detail: str
