/**
 * The title workbench: abstract in, chips to edit, ranked candidates out.
 *
 * All rendering is a pure function of the last server response plus
 * uncommitted chip edits; no scoring or grammar logic lives client-side.
 * One request is in flight per session at a time (busy flag).
 */

import { CandidateOut, TitlegenClient } from "./api.js";
import { MAX_PARTS, addChip, deleteChip, moveChip, partsProblem, updateChip } from "./chips.js";

interface AppState {
  sessionId: string | null;
  parts: string[];
  candidates: CandidateOut[] | null;
  usedFallback: boolean | null;
  serverState: "idle" | "parts_ready" | "generated";
  busy: boolean;
  error: string | null;
}

export class App {
  private state: AppState = {
    sessionId: null,
    parts: [],
    candidates: null,
    usedFallback: null,
    serverState: "idle",
    busy: false,
    error: null,
  };
  private dragFrom: number | null = null;

  constructor(
    private root: HTMLElement,
    private client: TitlegenClient,
    private onSession: (id: string) => void = () => {},
  ) {
    this.renderSkeleton();
    this.render();
  }

  /** Restore a previous session (page reload with a session id). */
  async restore(sessionId: string): Promise<void> {
    await this.withBusy(async () => {
      const view = await this.client.getSession(sessionId);
      this.state.sessionId = view.session_id;
      this.state.parts = view.parts.map((p) => p.text);
      this.state.candidates = view.candidates;
      this.state.usedFallback = view.used_fallback;
      this.state.serverState = view.state;
      const abstractInput = this.q<HTMLTextAreaElement>("abstract-input");
      abstractInput.value = view.abstract;
    });
  }

  private q<T extends HTMLElement>(testId: string): T {
    const el = this.root.querySelector(`[data-testid="${testId}"]`);
    if (!el) throw new Error(`missing element ${testId}`);
    return el as T;
  }

  private async withBusy(fn: () => Promise<void>): Promise<void> {
    if (this.state.busy) return;
    this.state.busy = true;
    this.state.error = null;
    this.render();
    try {
      await fn();
    } catch (err) {
      this.state.error = err instanceof Error ? err.message : String(err);
    } finally {
      this.state.busy = false;
      this.render();
    }
  }

  private async submitAbstract(): Promise<void> {
    const text = this.q<HTMLTextAreaElement>("abstract-input").value.trim();
    if (!text) return;
    await this.withBusy(async () => {
      const view = await this.client.createSession(text);
      this.state.sessionId = view.session_id;
      this.state.parts = view.parts.map((p) => p.text);
      this.state.candidates = null;
      this.state.usedFallback = null;
      this.state.serverState = view.state;
      this.onSession(view.session_id);
    });
  }

  private async generate(): Promise<void> {
    const sessionId = this.state.sessionId;
    if (!sessionId || partsProblem(this.state.parts)) return;
    await this.withBusy(async () => {
      this.state.candidates = null; // stale list cleared while busy
      const committed = await this.client.updateParts(
        sessionId,
        this.state.parts.map((p) => p.trim()),
      );
      this.state.parts = committed.parts.map((p) => p.text);
      const result = await this.client.generateCandidates(sessionId);
      this.state.candidates = result.candidates;
      this.state.usedFallback = result.used_fallback;
      this.state.serverState = result.state;
    });
  }

  private editParts(next: string[]): void {
    this.state.parts = next;
    this.render();
  }

  // -- rendering --------------------------------------------------------

  private renderSkeleton(): void {
    this.root.innerHTML = `
      <h1>titlegen</h1>
      <section class="panel">
        <label for="abstract">Abstract</label>
        <textarea id="abstract" rows="6" data-testid="abstract-input"
          placeholder="Paste the abstract here"></textarea>
        <div class="row">
          <button data-testid="submit-abstract">Extract title parts</button>
        </div>
      </section>
      <div class="error" data-testid="error" hidden></div>
      <section class="panel" data-testid="parts-panel" hidden>
        <h2>Title parts</h2>
        <p class="hint">Edit, reorder, or drag the chips; their order is the fallback order.</p>
        <ul class="chips" data-testid="chip-list"></ul>
        <div class="row">
          <button data-testid="add-part">+ add part</button>
          <button data-testid="generate">Generate titles</button>
          <span class="hint" data-testid="parts-problem"></span>
        </div>
      </section>
      <section class="panel" data-testid="candidates-panel" hidden>
        <h2>Candidates</h2>
        <div class="badge fallback" data-testid="fallback-badge" hidden>
          every permutation failed the grammar gate — showing original order
        </div>
        <ol class="candidates" data-testid="candidate-list"></ol>
      </section>
    `;
    this.q("submit-abstract").addEventListener("click", () => void this.submitAbstract());
    this.q("add-part").addEventListener("click", () => this.editParts(addChip(this.state.parts)));
    this.q("generate").addEventListener("click", () => void this.generate());
  }

  private render(): void {
    const { candidates, busy, error, serverState } = this.state;

    const errorBox = this.q("error");
    errorBox.hidden = !error;
    errorBox.textContent = error ?? "";

    (this.q("submit-abstract") as HTMLButtonElement).disabled = busy;

    const partsPanel = this.q("parts-panel");
    partsPanel.hidden = serverState === "idle";
    if (!partsPanel.hidden) {
      this.renderChips();
      this.refreshPartControls();
    }

    const candidatesPanel = this.q("candidates-panel");
    candidatesPanel.hidden = serverState !== "generated" || candidates === null;
    if (!candidatesPanel.hidden) {
      this.renderCandidates();
    }
  }

  private refreshPartControls(): void {
    const problem = partsProblem(this.state.parts);
    this.q("parts-problem").textContent = problem ?? "";
    (this.q("generate") as HTMLButtonElement).disabled = this.state.busy || problem !== null;
    (this.q("add-part") as HTMLButtonElement).disabled =
      this.state.busy || this.state.parts.length >= MAX_PARTS;
  }

  private renderChips(): void {
    const list = this.q("chip-list");
    list.textContent = "";
    this.state.parts.forEach((text, index) => {
      const li = document.createElement("li");
      li.className = "chip";
      li.draggable = true;
      li.dataset.index = String(index);

      const input = document.createElement("input");
      input.value = text;
      input.dataset.testid = "chip-input";
      input.disabled = this.state.busy;
      input.addEventListener("input", () => {
        // uncommitted edit: update state without re-rendering (keeps focus)
        this.state.parts = updateChip(this.state.parts, index, input.value);
        this.refreshPartControls();
      });

      const mk = (label: string, action: () => void, testid: string) => {
        const btn = document.createElement("button");
        btn.textContent = label;
        btn.dataset.testid = testid;
        btn.disabled = this.state.busy;
        btn.addEventListener("click", action);
        return btn;
      };
      li.append(
        input,
        mk("◀", () => this.editParts(moveChip(this.state.parts, index, index - 1)), "chip-left"),
        mk("▶", () => this.editParts(moveChip(this.state.parts, index, index + 1)), "chip-right"),
        mk("×", () => this.editParts(deleteChip(this.state.parts, index)), "chip-delete"),
      );

      li.addEventListener("dragstart", () => {
        this.dragFrom = index;
      });
      li.addEventListener("dragover", (ev) => ev.preventDefault());
      li.addEventListener("drop", (ev) => {
        ev.preventDefault();
        if (this.dragFrom !== null) {
          this.editParts(moveChip(this.state.parts, this.dragFrom, index));
          this.dragFrom = null;
        }
      });

      list.append(li);
    });
  }

  private renderCandidates(): void {
    const list = this.q("candidate-list");
    list.textContent = "";
    this.q("fallback-badge").hidden = this.state.usedFallback !== true;
    for (const candidate of this.state.candidates ?? []) {
      const li = document.createElement("li");
      li.className = "candidate";

      const bar = document.createElement("span");
      bar.className = "score-bar";
      bar.style.width = `${(candidate.score * 100).toFixed(1)}%`;

      const text = document.createElement("span");
      text.className = "candidate-text";
      text.dataset.testid = "candidate-text";
      text.textContent = candidate.text;

      const score = document.createElement("span");
      score.className = "score";
      score.textContent = candidate.score.toFixed(3);

      const copy = document.createElement("button");
      copy.textContent = "copy";
      copy.className = "copy";
      copy.addEventListener("click", () => {
        void navigator.clipboard?.writeText(candidate.text).catch(() => {});
      });

      li.append(bar, text, score);
      if (!candidate.grammar_ok) {
        const badge = document.createElement("span");
        badge.className = "badge fallback";
        badge.textContent = "unchecked order";
        li.append(badge);
      }
      li.append(copy);
      list.append(li);
    }
  }
}

export interface InitOptions {
  baseUrl?: string;
  sessionId?: string | null;
}

/** Mount the app; restores the session when an id is supplied (or found in
 * the location hash as ``#s=<id>``). */
export function initApp(root: HTMLElement, options: InitOptions = {}): App {
  const baseUrl = options.baseUrl ?? "";
  const client = new TitlegenClient(baseUrl);
  const app = new App(root, client, (id) => {
    try {
      window.location.hash = `s=${id}`;
    } catch {
      // non-browser host: hash bookkeeping is cosmetic
    }
  });
  const fromHash = window.location.hash.match(/^#s=([0-9a-f]+)$/)?.[1] ?? null;
  const sessionId = options.sessionId !== undefined ? options.sessionId : fromHash;
  if (sessionId) {
    void app.restore(sessionId);
  }
  return app;
}
