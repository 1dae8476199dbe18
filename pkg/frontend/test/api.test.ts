import { describe, expect, it } from "vitest";
import { Api, ApiError } from "../src/api.js";

interface Recorded {
  url: string;
  method: string;
  body: unknown;
}

function recordingApi(status = 200, payload: unknown = {}) {
  const calls: Recorded[] = [];
  const api = new Api("http://svc", async (input, init) => {
    calls.push({
      url: input,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(String(init.body)) : null,
    });
    return new Response(JSON.stringify(payload), { status });
  });
  return { api, calls };
}

describe("api client", () => {
  it("hits the documented routes with the right methods", async () => {
    const { api, calls } = recordingApi();
    await api.createSession({ program: "p." });
    await api.getSession("s1");
    await api.solve("s1", { goal: "p" });
    await api.startDebug("s1", { goal: "p", mode: "wrong" });
    await api.answer("s1", "correct");
    await api.question("s1");
    await api.diagnosis("s1");
    await api.tree("s1", 50, 25);
    await api.transcript("s1");
    await api.dropSession("s1");

    expect(calls.map((c) => `${c.method} ${c.url}`)).toEqual([
      "POST http://svc/sessions",
      "GET http://svc/sessions/s1",
      "POST http://svc/sessions/s1/solve",
      "POST http://svc/sessions/s1/debug",
      "POST http://svc/sessions/s1/answer",
      "GET http://svc/sessions/s1/question",
      "GET http://svc/sessions/s1/diagnosis",
      "GET http://svc/sessions/s1/tree?offset=50&limit=25",
      "GET http://svc/sessions/s1/transcript",
      "DELETE http://svc/sessions/s1",
    ]);
    expect(calls[0].body).toEqual({ program: "p." });
    expect(calls[4].body).toEqual({ verdict: "correct" });
  });

  it("omits optional fields it was not given", async () => {
    const { api, calls } = recordingApi();
    await api.createSession({ program: "p." });
    expect(Object.keys(calls[0].body as object)).toEqual(["program"]);
    await api.startDebug("s1", { goal: "p" });
    expect(Object.keys(calls[1].body as object)).toEqual(["goal"]);
  });

  it("turns error responses into ApiError with the detail string", async () => {
    const { api } = recordingApi(404, { detail: "unknown session s9" });
    const err = await api.getSession("s9").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(404);
    expect(err.detail).toBe("unknown session s9");
  });

  it("keeps structured validation details readable", async () => {
    const { api } = recordingApi(422, { detail: [{ loc: ["body", "goal"], msg: "required" }] });
    const err = await api.startDebug("s1", { goal: "" }).catch((e) => e);
    expect(err.status).toBe(422);
    expect(err.detail).toContain("required");
  });

  it("maps a refused connection to status 0", async () => {
    const api = new Api("http://svc", async () => {
      throw new TypeError("fetch failed");
    });
    const err = await api.getSession("s1").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(0);
  });

  it("survives a non-JSON error body", async () => {
    const api = new Api("http://svc", async () => new Response("gateway blew up", { status: 502 }));
    const err = await api.getSession("s1").catch((e) => e);
    expect(err.status).toBe(502);
    expect(err.detail).toBe("gateway blew up");
  });
});
