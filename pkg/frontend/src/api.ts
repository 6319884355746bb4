/** Typed client for the titlegen session API. */

export interface PartOut {
  text: string;
  span: [number, number] | null;
}

export interface CandidateOut {
  text: string;
  score: number;
  grammar_ok: boolean;
}

export interface SessionView {
  session_id: string;
  state: "parts_ready" | "generated";
  abstract: string;
  parts: PartOut[];
  candidates: CandidateOut[] | null;
  used_fallback: boolean | null;
  created_at: number;
}

export interface CandidatesResponse {
  session_id: string;
  state: "parts_ready" | "generated";
  candidates: CandidateOut[];
  used_fallback: boolean;
  n_examined: number;
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public error: string,
    public detail: string,
  ) {
    super(detail ? `${error}: ${detail}` : error);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    throw new ApiError(res.status, body.error ?? `http ${res.status}`, body.detail ?? "");
  }
  return body as T;
}

export class TitlegenClient {
  constructor(private baseUrl = "") {}

  createSession(abstract: string): Promise<SessionView> {
    return request(`${this.baseUrl}/api/sessions`, {
      method: "POST",
      body: JSON.stringify({ abstract }),
    });
  }

  getSession(sessionId: string): Promise<SessionView> {
    return request(`${this.baseUrl}/api/sessions/${encodeURIComponent(sessionId)}`);
  }

  updateParts(sessionId: string, parts: string[]): Promise<SessionView> {
    return request(`${this.baseUrl}/api/sessions/${encodeURIComponent(sessionId)}/parts`, {
      method: "PUT",
      body: JSON.stringify({ parts }),
    });
  }

  generateCandidates(sessionId: string): Promise<CandidatesResponse> {
    return request(`${this.baseUrl}/api/sessions/${encodeURIComponent(sessionId)}/candidates`, {
      method: "POST",
    });
  }
}
