// In-memory stand-in for the session service, good enough to drive the UI
// through scripted question flows without a real backend.

import type { DiagnosisPayload, TranscriptEntry, TreeNode } from "../src/api.js";

export interface ScriptedQuestion {
  kind: string;
  subject: string;
  answers: string[];
  text: string;
}

export interface FakeScript {
  questions: ScriptedQuestion[];
  diagnosis: (verdicts: string[]) => DiagnosisPayload;
  tree?: TreeNode[];
  /** called after each answer so a test can mutate tree verdicts */
  onAnswer?: (verdict: string, index: number) => void;
}

interface FakeSession {
  id: string;
  version: number;
  debugStarted: boolean;
  goal: string;
  mode: string;
  cursor: number;
  verdicts: string[];
  diagnosis: DiagnosisPayload | null;
}

export class FakeService {
  sessions = new Map<string, FakeSession>();
  askedSubjects: string[] = [];
  treeRequests: Array<{ offset: number; limit: number }> = [];
  answerFailuresLeft = 0;
  private nextId = 1;

  constructor(public script: FakeScript) {}

  fetch = async (input: string, init?: RequestInit): Promise<Response> => {
    const method = init?.method ?? "GET";
    const url = new URL(input, "http://fake");
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    const m = url.pathname.match(/^\/sessions(?:\/([^/]+))?(?:\/([a-z]+))?$/);
    if (!m) return jsonRes(404, { detail: "no such route" });
    const [, id, action] = m;

    if (method === "POST" && !id) {
      const sid = `fake${this.nextId++}`;
      this.sessions.set(sid, {
        id: sid,
        version: 0,
        debugStarted: false,
        goal: "",
        mode: "wrong",
        cursor: 0,
        verdicts: [],
        diagnosis: null,
      });
      return jsonRes(201, { session: sid, version: 0, predicates: ["merge/3"], warnings: [] });
    }

    const sess = id ? this.sessions.get(id) : undefined;
    if (!sess) return jsonRes(404, { detail: `unknown session ${id}` });

    if (method === "DELETE" && !action) {
      this.sessions.delete(sess.id);
      return jsonRes(200, { session: sess.id, dropped: true });
    }
    if (method === "GET" && !action) {
      return jsonRes(200, {
        session: sess.id,
        version: sess.version,
        rule: "leftmost_delay_nonground_negation",
        budget: 10000,
        has_interpretation: false,
        status: this.status(sess),
        mode: sess.debugStarted ? sess.mode : null,
        goal: sess.debugStarted ? sess.goal : null,
        pending: sess.debugStarted && sess.diagnosis === null,
      });
    }
    if (method === "POST" && action === "debug") {
      sess.debugStarted = true;
      sess.goal = body.goal;
      sess.mode = body.mode ?? "wrong";
      sess.cursor = 0;
      sess.verdicts = [];
      sess.diagnosis = null;
      sess.version += 1;
      this.noteAsked(sess);
      return jsonRes(200, this.debugPayload(sess));
    }
    if (method === "POST" && action === "answer") {
      if (!sess.debugStarted || sess.diagnosis !== null) {
        return jsonRes(409, { detail: "no question is pending" });
      }
      if (this.answerFailuresLeft > 0) {
        this.answerFailuresLeft -= 1;
        return jsonRes(409, { detail: "no question is pending" });
      }
      const idx = sess.cursor;
      sess.verdicts.push(body.verdict);
      sess.cursor += 1;
      sess.version += 1;
      this.script.onAnswer?.(body.verdict, idx);
      if (sess.cursor >= this.script.questions.length || body.verdict === "inadmissible") {
        sess.diagnosis = this.script.diagnosis(sess.verdicts);
      } else {
        this.noteAsked(sess);
      }
      return jsonRes(200, this.debugPayload(sess));
    }
    if (method === "GET" && action === "question") {
      return jsonRes(200, {
        session: sess.id,
        version: sess.version,
        status: this.status(sess),
        question: this.pending(sess),
      });
    }
    if (method === "GET" && action === "diagnosis") {
      return jsonRes(200, this.debugPayload(sess));
    }
    if (method === "GET" && action === "tree") {
      const offset = Number(url.searchParams.get("offset") ?? "0");
      const limit = Number(url.searchParams.get("limit") ?? "50");
      this.treeRequests.push({ offset, limit });
      const all = this.script.tree ?? [];
      return jsonRes(200, {
        session: sess.id,
        version: sess.version,
        total: all.length,
        offset,
        nodes: all.slice(offset, offset + limit),
      });
    }
    if (method === "GET" && action === "transcript") {
      if (!sess.debugStarted) return jsonRes(409, { detail: "no debug session was started" });
      const questions: TranscriptEntry[] = sess.verdicts.map((v, i) => ({
        kind: this.script.questions[i].kind,
        subject: this.script.questions[i].subject,
        answers: this.script.questions[i].answers,
        verdict: v,
        implied: false,
      }));
      return jsonRes(200, {
        session: sess.id,
        version: sess.version,
        transcript: {
          goal: sess.goal,
          mode: sess.mode,
          rule: "leftmost_delay_nonground_negation",
          budget: 10000,
          target: null,
          questions,
          diagnosis: sess.diagnosis,
        },
      });
    }
    return jsonRes(404, { detail: "no such route" });
  };

  private status(sess: FakeSession): string {
    if (!sess.debugStarted) return "idle";
    return sess.diagnosis ? "diagnosed" : "awaiting_answer";
  }

  private pending(sess: FakeSession): ScriptedQuestion | null {
    if (!sess.debugStarted || sess.diagnosis !== null) return null;
    return this.script.questions[sess.cursor] ?? null;
  }

  private noteAsked(sess: FakeSession): void {
    const q = this.pending(sess);
    if (q) this.askedSubjects.push(q.subject);
  }

  private debugPayload(sess: FakeSession) {
    return {
      session: sess.id,
      version: sess.version,
      status: this.status(sess),
      question: this.pending(sess),
      diagnosis: sess.diagnosis,
      error: null,
      questions_asked: sess.verdicts.length,
    };
  }
}

export function memStorage(): Storage {
  const m = new Map<string, string>();
  return {
    get length() {
      return m.size;
    },
    clear: () => m.clear(),
    getItem: (k: string) => m.get(k) ?? null,
    key: (i: number) => [...m.keys()][i] ?? null,
    removeItem: (k: string) => void m.delete(k),
    setItem: (k: string, v: string) => void m.set(k, v),
  };
}

function jsonRes(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export function mergeQuestions(): ScriptedQuestion[] {
  return [
    {
      kind: "atom_value",
      subject: "merge([2,3],[2],[2,3,3])",
      answers: [],
      text: "status of merge([2,3],[2],[2,3,3])? [correct/erroneous/inadmissible]",
    },
    {
      kind: "atom_value",
      subject: "merge([3],[2],[3,3])",
      answers: [],
      text: "status of merge([3],[2],[3,3])? [correct/erroneous/inadmissible]",
    },
    {
      kind: "atom_value",
      subject: "merge([3],[],[3])",
      answers: [],
      text: "status of merge([3],[],[3])? [correct/erroneous/inadmissible]",
    },
  ];
}

export function incorrectClauseDiagnosis(): DiagnosisPayload {
  return {
    kind: "incorrect_clause_instance",
    predicate: "merge/3",
    clause_index: 4,
    clause_line: 5,
    subject: "merge([3],[2],[3,3]) :- 3 > 2, merge([3],[],[3])",
    details: "",
    questions_asked: 3,
  };
}

export function inadmissibleGoalDiagnosis(subject: string): DiagnosisPayload {
  return {
    kind: "goal_inadmissible_no_bug",
    predicate: "merge/3",
    clause_index: null,
    clause_line: null,
    subject,
    details: "",
    questions_asked: 1,
  };
}

/** depth-2 fan-out, parents all pointing at earlier rows */
export function bigTree(count: number): TreeNode[] {
  const nodes: TreeNode[] = [];
  for (let i = 0; i < count; i++) {
    nodes.push({
      id: i,
      parent: i === 0 ? null : Math.floor((i - 1) / 3),
      kind: "proof",
      label: `node_${i}(x)`,
      clause: 1,
      instance: `node_${i}(x) :- body`,
      verdict: null,
    });
  }
  return nodes;
}
