// Typed client for the session service. Every UI action goes through here;
// the page never computes verdicts or diagnoses on its own.

export interface QuestionPayload {
  kind: string;
  subject: string;
  answers: string[];
  text: string;
}

export interface DiagnosisPayload {
  kind: string;
  predicate: string;
  clause_index: number | null;
  clause_line: number | null;
  subject: string;
  details: string;
  questions_asked: number;
}

export interface DebugPayload {
  session: string;
  version: number;
  status: string;
  question: QuestionPayload | null;
  diagnosis: DiagnosisPayload | null;
  error: string | null;
  questions_asked: number;
}

export interface SessionInfo {
  session: string;
  version: number;
  rule: string;
  budget: number;
  has_interpretation: boolean;
  status: string;
  mode: string | null;
  goal: string | null;
  pending: boolean;
}

export interface CreatedSession {
  session: string;
  version: number;
  predicates: string[];
  warnings: string[];
}

export interface AnswerRow {
  bindings: Record<string, string>;
  text: string;
}

export interface SolvePayload {
  session: string;
  version: number;
  goal: string;
  answers: AnswerRow[];
  exhaustive: boolean;
  floundered: boolean;
  budget_exhausted: boolean;
  finitely_failed: boolean;
  expansions: number;
}

// proof/negation/call rows carry a label; ref rows only point back at an
// earlier row (shared subtree)
export interface TreeNode {
  id: number;
  parent: number | null;
  kind?: string;
  label?: string;
  clause?: number;
  instance?: string;
  answers?: string[];
  verdict?: string | null;
  ref?: number;
}

export interface TreePage {
  session: string;
  version: number;
  total: number;
  offset: number;
  nodes: TreeNode[];
}

export interface TranscriptEntry {
  kind: string;
  subject: string;
  answers: string[];
  verdict: string;
  implied: boolean;
}

export interface TranscriptDocument {
  goal: string;
  mode: string;
  rule: string;
  budget: number;
  target: string | null;
  questions: TranscriptEntry[];
  diagnosis: DiagnosisPayload | null;
}

export interface TranscriptPayload {
  session: string;
  version: number;
  transcript: TranscriptDocument;
}

export interface QuestionPoll {
  session: string;
  version: number;
  status: string;
  question: QuestionPayload | null;
}

export class ApiError extends Error {
  constructor(public status: number, public detail: string) {
    super(`${status}: ${detail}`);
  }
}

export interface CreateSessionRequest {
  program: string;
  interpretation?: string;
  rule?: string;
  budget?: number;
}

export interface StartDebugRequest {
  goal: string;
  mode?: string;
  oracle?: string;
  target?: string;
  rule?: string;
  budget?: number;
}

export interface SolveRequest {
  goal: string;
  rule?: string;
  budget?: number;
  mode?: string;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Api {
  constructor(
    public base: string,
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let res: Response;
    try {
      res = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, String(err));
    }
    const text = await res.text();
    let data: any = null;
    if (text) {
      try {
        data = JSON.parse(text);
      } catch {
        data = { detail: text };
      }
    }
    if (!res.ok) {
      const detail =
        data && data.detail !== undefined ? stringifyDetail(data.detail) : res.statusText;
      throw new ApiError(res.status, detail);
    }
    return data as T;
  }

  createSession(req: CreateSessionRequest): Promise<CreatedSession> {
    return this.request("POST", "/sessions", req);
  }

  getSession(id: string): Promise<SessionInfo> {
    return this.request("GET", `/sessions/${id}`);
  }

  dropSession(id: string): Promise<{ session: string; dropped: boolean }> {
    return this.request("DELETE", `/sessions/${id}`);
  }

  solve(id: string, req: SolveRequest): Promise<SolvePayload> {
    return this.request("POST", `/sessions/${id}/solve`, req);
  }

  startDebug(id: string, req: StartDebugRequest): Promise<DebugPayload> {
    return this.request("POST", `/sessions/${id}/debug`, req);
  }

  answer(id: string, verdict: string): Promise<DebugPayload> {
    return this.request("POST", `/sessions/${id}/answer`, { verdict });
  }

  question(id: string): Promise<QuestionPoll> {
    return this.request("GET", `/sessions/${id}/question`);
  }

  diagnosis(id: string): Promise<DebugPayload> {
    return this.request("GET", `/sessions/${id}/diagnosis`);
  }

  tree(id: string, offset: number, limit: number): Promise<TreePage> {
    return this.request("GET", `/sessions/${id}/tree?offset=${offset}&limit=${limit}`);
  }

  transcript(id: string): Promise<TranscriptPayload> {
    return this.request("GET", `/sessions/${id}/transcript`);
  }
}

function stringifyDetail(detail: unknown): string {
  return typeof detail === "string" ? detail : JSON.stringify(detail);
}
