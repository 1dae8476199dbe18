// Debugging workbench page. All state of record lives server-side; this
// module renders service responses and forwards user verdicts. Refreshing
// the page mid-session must land back on the same pending question.

import {
  Api,
  ApiError,
  DebugPayload,
  DiagnosisPayload,
  SolvePayload,
  TranscriptDocument,
  TreeNode,
} from "./api.js";

const STORAGE_KEY = "trivalog.ui";
const TREE_PAGE = 50;

const VERDICT_KEYS: Record<string, string> = {
  c: "correct",
  e: "erroneous",
  i: "inadmissible",
};

export interface AppOptions {
  pollMs?: number;
  storage?: Storage;
}

interface StoredSession {
  base: string;
  session: string;
  program: string;
}

export class App {
  api: Api;
  private root: HTMLElement;
  private storage: Storage;
  private pollMs: number;
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  sessionId: string | null = null;
  private keyHandler: ((ev: KeyboardEvent) => void) | null = null;
  private predicates: string[] = [];
  private programText = "";
  private debug: DebugPayload | null = null;
  private transcript: TranscriptDocument | null = null;
  private lastSolve: SolvePayload | null = null;
  private treeNodes: TreeNode[] = [];
  private treeTotal = 0;
  private collapsed = new Set<number>();
  private selectedNode: number | null = null;
  private notice = "";

  constructor(root: HTMLElement, api: Api, opts: AppOptions = {}) {
    this.root = root;
    this.api = api;
    this.pollMs = opts.pollMs ?? 1500;
    this.storage = opts.storage ?? window.sessionStorage;
    this.buildSkeleton();
    this.bindEvents();
  }

  /** Restore a stored session if the service still knows it. */
  async start(): Promise<void> {
    const stored = this.readStored();
    if (!stored) {
      this.render();
      return;
    }
    this.api.base = stored.base;
    (this.el("base") as HTMLInputElement).value = stored.base;
    this.programText = stored.program;
    try {
      await this.api.getSession(stored.session);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.storage.removeItem(STORAGE_KEY);
        this.notice = "stored session is gone; start a new one";
        this.render();
        return;
      }
      this.notice = describeError(err);
      this.render();
      return;
    }
    this.sessionId = stored.session;
    await this.refreshAll();
    this.startPolling();
  }

  stop(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  /** Stop polling and detach the document-level key handler. */
  dispose(): void {
    this.stop();
    if (this.keyHandler) {
      this.root.ownerDocument.removeEventListener("keydown", this.keyHandler);
      this.keyHandler = null;
    }
  }

  // --- service round-trips ---

  async createSession(): Promise<void> {
    const base = (this.el("base") as HTMLInputElement).value.trim();
    const program = (this.el("program") as HTMLTextAreaElement).value;
    const interpretation = (this.el("interp") as HTMLTextAreaElement).value.trim();
    this.api.base = base;
    this.notice = "";
    try {
      const created = await this.api.createSession({
        program,
        interpretation: interpretation || undefined,
      });
      this.sessionId = created.session;
      this.predicates = created.predicates;
      this.programText = program;
      this.debug = null;
      this.transcript = null;
      this.lastSolve = null;
      this.treeNodes = [];
      this.treeTotal = 0;
      this.selectedNode = null;
      if (created.warnings.length) {
        this.notice = "warnings: " + created.warnings.join("; ");
      }
      this.writeStored();
      this.startPolling();
    } catch (err) {
      this.notice = describeError(err);
    }
    this.render();
  }

  async solve(): Promise<void> {
    if (!this.sessionId) return;
    const goal = (this.el("solve-goal") as HTMLInputElement).value.trim();
    if (!goal) return;
    try {
      this.lastSolve = await this.api.solve(this.sessionId, { goal });
      this.notice = "";
    } catch (err) {
      this.notice = describeError(err);
    }
    this.render();
  }

  async startDebug(): Promise<void> {
    if (!this.sessionId) return;
    const goal = (this.el("debug-goal") as HTMLInputElement).value.trim();
    const mode = (this.el("debug-mode") as HTMLSelectElement).value;
    if (!goal) return;
    try {
      this.debug = await this.api.startDebug(this.sessionId, { goal, mode, oracle: "human" });
      this.notice = "";
      this.treeNodes = [];
      this.treeTotal = 0;
      this.collapsed.clear();
      this.selectedNode = null;
      await this.refreshTranscript();
      await this.loadTree(0);
    } catch (err) {
      this.notice = describeError(err);
    }
    this.render();
  }

  async answerVerdict(verdict: string): Promise<void> {
    if (!this.sessionId || !this.debug || !this.debug.question) return;
    try {
      this.debug = await this.api.answer(this.sessionId, verdict);
      this.notice = "";
    } catch (err) {
      if (err instanceof ApiError && (err.status === 0 || err.status === 409)) {
        // the answer may or may not have landed; re-fetching is safe and
        // the verdict cache means nothing is ever asked twice
        this.notice = "connection hiccup, re-fetched the pending question";
        await this.refreshQuestion();
      } else {
        this.notice = describeError(err);
      }
      this.render();
      return;
    }
    await this.refreshTranscript();
    await this.reloadTreeSlice();
    this.render();
  }

  async dropSession(): Promise<void> {
    if (!this.sessionId) return;
    try {
      await this.api.dropSession(this.sessionId);
    } catch {
      // dropping a dead session is fine either way
    }
    this.storage.removeItem(STORAGE_KEY);
    this.sessionId = null;
    this.debug = null;
    this.transcript = null;
    this.lastSolve = null;
    this.treeNodes = [];
    this.treeTotal = 0;
    this.notice = "";
    this.stop();
    this.render();
  }

  async loadMoreTree(): Promise<void> {
    await this.loadTree(this.treeNodes.length);
    this.render();
  }

  private async loadTree(offset: number): Promise<void> {
    if (!this.sessionId) return;
    try {
      const page = await this.api.tree(this.sessionId, offset, TREE_PAGE);
      this.treeTotal = page.total;
      if (offset === 0) {
        this.treeNodes = page.nodes;
      } else {
        this.treeNodes = this.treeNodes.slice(0, offset).concat(page.nodes);
      }
    } catch (err) {
      this.notice = describeError(err);
    }
  }

  /** Re-fetch what is already on screen so verdict colors track answers. */
  private async reloadTreeSlice(): Promise<void> {
    if (!this.sessionId) return;
    const want = Math.max(this.treeNodes.length, TREE_PAGE);
    try {
      const page = await this.api.tree(this.sessionId, 0, want);
      this.treeTotal = page.total;
      this.treeNodes = page.nodes;
    } catch (err) {
      this.notice = describeError(err);
    }
  }

  private async refreshQuestion(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const poll = await this.api.question(this.sessionId);
      if (!this.debug || poll.version !== this.debug.version) {
        await this.refreshAll();
      }
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        this.storage.removeItem(STORAGE_KEY);
        this.sessionId = null;
        this.notice = "session is gone; start a new one";
        this.stop();
      }
    }
  }

  private async refreshTranscript(): Promise<void> {
    if (!this.sessionId) return;
    try {
      const payload = await this.api.transcript(this.sessionId);
      this.transcript = payload.transcript;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        this.transcript = null; // no debug run yet
      }
    }
  }

  private async refreshAll(): Promise<void> {
    if (!this.sessionId) return;
    try {
      this.debug = await this.api.diagnosis(this.sessionId);
    } catch (err) {
      this.notice = describeError(err);
      this.render();
      return;
    }
    await this.refreshTranscript();
    await this.reloadTreeSlice();
    this.render();
  }

  private startPolling(): void {
    this.stop();
    if (this.pollMs <= 0) return;
    this.pollTimer = setInterval(() => {
      if (this.sessionId && this.debug && this.debug.status === "awaiting_answer") {
        void this.refreshQuestion().then(() => {
          // render only when the poll advanced the version; refreshAll
          // rendered already in that case
        });
      }
    }, this.pollMs);
  }

  // --- storage ---

  private readStored(): StoredSession | null {
    const raw = this.storage.getItem(STORAGE_KEY);
    if (!raw) return null;
    try {
      const parsed = JSON.parse(raw);
      if (parsed && typeof parsed.session === "string") return parsed as StoredSession;
    } catch {
      // fall through
    }
    return null;
  }

  private writeStored(): void {
    if (!this.sessionId) return;
    const record: StoredSession = {
      base: this.api.base,
      session: this.sessionId,
      program: this.programText,
    };
    this.storage.setItem(STORAGE_KEY, JSON.stringify(record));
  }

  // --- DOM ---

  private el(id: string): HTMLElement {
    const found = this.root.querySelector(`#${id}`);
    if (!found) throw new Error(`missing element #${id}`);
    return found as HTMLElement;
  }

  private buildSkeleton(): void {
    this.root.innerHTML = `
      <div id="notice" class="notice" hidden></div>
      <section id="setup">
        <h2>new session</h2>
        <label>service <input id="base" value="http://127.0.0.1:8080" spellcheck="false"></label>
        <label>program <textarea id="program" rows="10" spellcheck="false"></textarea></label>
        <label>intended interpretation (optional)
          <textarea id="interp" rows="4" spellcheck="false"></textarea></label>
        <button id="create">create session</button>
      </section>
      <section id="workbench" hidden>
        <div id="session-bar">
          <span id="session-label"></span>
          <button id="drop">discard session</button>
        </div>
        <div id="program-view-wrap">
          <h3>program</h3>
          <pre id="program-view"></pre>
        </div>
        <div id="solve-row">
          <input id="solve-goal" placeholder="goal, e.g. merge([2,3],[2],X)" spellcheck="false">
          <button id="solve">solve</button>
          <div id="solve-result"></div>
        </div>
        <div id="debug-row">
          <input id="debug-goal" placeholder="atom to debug" spellcheck="false">
          <select id="debug-mode">
            <option value="wrong">wrong answer</option>
            <option value="missing">missing answer</option>
          </select>
          <button id="start-debug">start debugging</button>
        </div>
        <div id="question-card" hidden>
          <div id="question-text"></div>
          <div id="question-answers"></div>
          <div class="verdict-buttons">
            <button id="verdict-correct" data-verdict="correct">correct (c)</button>
            <button id="verdict-erroneous" data-verdict="erroneous">erroneous (e)</button>
            <button id="verdict-inadmissible" data-verdict="inadmissible">inadmissible (i)</button>
          </div>
        </div>
        <div id="diagnosis" hidden></div>
        <div id="answered-wrap">
          <h3>answered so far</h3>
          <ul id="answered"></ul>
        </div>
        <div id="tree-wrap">
          <h3>tree</h3>
          <div id="tree"></div>
          <button id="tree-more" hidden>load more</button>
          <div id="node-detail" hidden></div>
        </div>
      </section>`;
  }

  private bindEvents(): void {
    this.el("create").addEventListener("click", () => void this.createSession());
    this.el("solve").addEventListener("click", () => void this.solve());
    this.el("start-debug").addEventListener("click", () => void this.startDebug());
    this.el("drop").addEventListener("click", () => void this.dropSession());
    this.el("tree-more").addEventListener("click", () => void this.loadMoreTree());
    for (const verdict of ["correct", "erroneous", "inadmissible"]) {
      this.el(`verdict-${verdict}`).addEventListener("click", () =>
        void this.answerVerdict(verdict));
    }
    this.keyHandler = (ev: KeyboardEvent) => {
      const target = ev.target as HTMLElement | null;
      if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) return;
      const verdict = VERDICT_KEYS[ev.key];
      if (verdict && this.debug && this.debug.question) {
        void this.answerVerdict(verdict);
      }
    };
    this.root.ownerDocument.addEventListener("keydown", this.keyHandler);
    this.el("tree").addEventListener("click", (ev) => {
      const target = ev.target as HTMLElement;
      const row = target.closest("[data-node]") as HTMLElement | null;
      if (!row) return;
      const id = Number(row.dataset.node);
      if (target.classList.contains("twisty")) {
        if (this.collapsed.has(id)) this.collapsed.delete(id);
        else this.collapsed.add(id);
      } else {
        this.selectedNode = id;
      }
      this.render();
    });
  }

  render(): void {
    const noticeBox = this.el("notice");
    noticeBox.hidden = !this.notice;
    noticeBox.textContent = this.notice;

    this.el("setup").hidden = this.sessionId !== null;
    this.el("workbench").hidden = this.sessionId === null;
    if (!this.sessionId) return;

    this.el("session-label").textContent =
      `session ${this.sessionId.slice(0, 8)} (${this.predicates.join(", ")})`;
    this.renderProgramView();
    this.renderSolve();
    this.renderQuestion();
    this.renderDiagnosis();
    this.renderAnswered();
    this.renderTree();
  }

  private renderProgramView(): void {
    const highlight = this.debug?.diagnosis?.clause_line ?? null;
    const lines = this.programText.split("\n").map((line, i) => {
      const n = i + 1;
      const cls = n === highlight ? ' class="hl-line"' : "";
      return `<span${cls}>${String(n).padStart(3)}  ${escapeHtml(line)}</span>`;
    });
    this.el("program-view").innerHTML = lines.join("\n");
  }

  private renderSolve(): void {
    const box = this.el("solve-result");
    if (!this.lastSolve) {
      box.textContent = "";
      return;
    }
    const s = this.lastSolve;
    const status = s.exhaustive
      ? s.answers.length ? "exhaustive" : "finitely failed"
      : s.floundered ? "floundered" : "budget exhausted";
    const rows = s.answers.map((a) => `<li>${escapeHtml(a.text || "yes")}</li>`).join("");
    box.innerHTML =
      `<div>${escapeHtml(s.goal)}: ${s.answers.length} answer(s), ${status},` +
      ` ${s.expansions} expansions</div><ul>${rows}</ul>`;
  }

  private renderQuestion(): void {
    const card = this.el("question-card");
    const q = this.debug?.question ?? null;
    card.hidden = q === null;
    if (!q) {
      delete card.dataset.subject;
      return;
    }
    card.dataset.subject = q.subject;
    card.dataset.kind = q.kind;
    this.el("question-text").textContent = q.text;
    const answers = this.el("question-answers");
    if (q.answers.length) {
      answers.innerHTML =
        "answers seen: " + q.answers.map((a) => `<code>${escapeHtml(a)}</code>`).join(", ");
    } else {
      answers.textContent = "";
    }
  }

  private renderDiagnosis(): void {
    const panel = this.el("diagnosis");
    const d = this.debug?.diagnosis ?? null;
    if (this.debug?.status === "error") {
      panel.hidden = false;
      panel.className = "diagnosis error";
      panel.textContent = `debugging stopped: ${this.debug.error ?? "unknown error"}`;
      return;
    }
    panel.hidden = d === null;
    if (!d) return;
    panel.className = "diagnosis " + d.kind.replace(/_/g, "-");
    panel.innerHTML = diagnosisHtml(d);
  }

  private renderAnswered(): void {
    const list = this.el("answered");
    const entries = (this.transcript?.questions ?? []).filter((e) => !e.implied);
    list.innerHTML = entries
      .map(
        (e) =>
          `<li><span class="verdict verdict-${e.verdict}">${escapeHtml(e.verdict)}</span> ` +
          `${escapeHtml(e.subject)}${e.kind === "answer_set" ? " (answer set)" : ""}</li>`,
      )
      .join("");
  }

  private renderTree(): void {
    const box = this.el("tree");
    const hidden = this.hiddenByCollapse();
    const depth = this.depthMap();
    const parts: string[] = [];
    for (const node of this.treeNodes) {
      if (hidden.has(node.id)) continue;
      const pad = (depth.get(node.id) ?? 0) * 16;
      if (node.ref !== undefined) {
        parts.push(
          `<div class="tree-row" data-node="${node.id}" style="padding-left:${pad}px">` +
            `<span class="ref">see node ${node.ref}</span></div>`,
        );
        continue;
      }
      const verdict = node.verdict ?? "unknown";
      const hasKids = this.treeNodes.some((n) => n.parent === node.id);
      const twisty = hasKids
        ? `<span class="twisty">${this.collapsed.has(node.id) ? "+" : "-"}</span> `
        : "";
      const selected = this.selectedNode === node.id ? " selected" : "";
      parts.push(
        `<div class="tree-row verdict-${verdict}${selected}" data-node="${node.id}"` +
          ` style="padding-left:${pad}px">${twisty}` +
          `<span class="label">${escapeHtml(node.label ?? "")}</span></div>`,
      );
    }
    box.innerHTML = parts.join("");

    const more = this.el("tree-more") as HTMLButtonElement;
    more.hidden = this.treeNodes.length >= this.treeTotal;
    more.textContent = `load more (${this.treeNodes.length} of ${this.treeTotal})`;

    const detail = this.el("node-detail");
    const chosen = this.treeNodes.find((n) => n.id === this.selectedNode);
    detail.hidden = !chosen;
    if (chosen) {
      const bits: string[] = [`<b>${escapeHtml(chosen.label ?? `node ${chosen.id}`)}</b>`];
      if (chosen.instance) bits.push(`instance: <code>${escapeHtml(chosen.instance)}</code>`);
      if (chosen.clause !== undefined) bits.push(`clause ${chosen.clause}`);
      if (chosen.answers) {
        bits.push(
          chosen.answers.length
            ? "answers: " + chosen.answers.map((a) => `<code>${escapeHtml(a)}</code>`).join(", ")
            : "answers: none",
        );
      }
      bits.push(`verdict: ${escapeHtml(chosen.verdict ?? "unknown")}`);
      detail.innerHTML = bits.join("<br>");
    }
  }

  private depthMap(): Map<number, number> {
    const depth = new Map<number, number>();
    for (const node of this.treeNodes) {
      depth.set(node.id, node.parent === null ? 0 : (depth.get(node.parent) ?? 0) + 1);
    }
    return depth;
  }

  private hiddenByCollapse(): Set<number> {
    const hidden = new Set<number>();
    for (const node of this.treeNodes) {
      if (node.parent === null) continue;
      if (hidden.has(node.parent) || this.collapsed.has(node.parent)) {
        hidden.add(node.id);
      }
    }
    return hidden;
  }
}

function diagnosisHtml(d: DiagnosisPayload): string {
  const asked = d.questions_asked === 1 ? "1 question" : `${d.questions_asked} questions`;
  const where =
    d.clause_index === null
      ? ""
      : d.clause_line === null
        ? ` (clause ${d.clause_index})`
        : ` (clause ${d.clause_index}, line ${d.clause_line})`;
  switch (d.kind) {
    case "goal_inadmissible_no_bug":
      return (
        `<h3>bug elsewhere</h3><p>the goal <code>${escapeHtml(d.subject)}</code> is itself ` +
        `inadmissible, so no bug in this program is implied. Look at the caller that built ` +
        `this goal. (${asked})</p>`
      );
    case "judged_correct_no_bug":
      return `<h3>nothing wrong</h3><p><code>${escapeHtml(d.subject)}</code> was judged correct (${asked})</p>`;
    case "incorrect_clause_instance":
      return (
        `<h3>incorrect clause instance${where}</h3>` +
        `<p><code>${escapeHtml(d.subject)}</code> (${asked})</p>`
      );
    case "inadmissibility_transition":
      return (
        `<h3>inadmissible call introduced${where}</h3>` +
        `<p><code>${escapeHtml(d.subject)}</code> (${asked})</p>`
      );
    case "uncovered_atom":
      return (
        `<h3>uncovered atom${where}</h3><p><code>${escapeHtml(d.subject)}</code>` +
        (d.details ? `, no clause covers <code>${escapeHtml(d.details)}</code>` : "") +
        ` (${asked})</p>`
      );
    default:
      return `<h3>${escapeHtml(d.kind)}</h3><p><code>${escapeHtml(d.subject)}</code> (${asked})</p>`;
  }
}

function describeError(err: unknown): string {
  if (err instanceof ApiError) {
    return err.status === 0 ? `network error: ${err.detail}` : err.detail;
  }
  return String(err);
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
