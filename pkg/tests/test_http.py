"""The HTTP/JSON session service, driven through the test client."""

import pytest
from fastapi.testclient import TestClient

from trivalog.cli_service import create_app

from helpers import MERGE_TEXT

LAST_BUGGY = "last([X], X).\nlast([X|T], X) :- last(T, Y).\n"
LAST_INTERP = """universe depth=2 ints=1..2 functors=[]/0,./2 lists=flat
pred last/2
default F
T last([1],1).
T last([2],2).
T last([1,2],2).
T last([2,1],1).
T last([1,1],1).
T last([2,2],2).
"""


@pytest.fixture
def client():
    return TestClient(create_app())


def make_session(client, program=MERGE_TEXT, **kw):
    res = client.post("/sessions", json={"program": program, **kw})
    assert res.status_code == 201, res.text
    return res.json()


def test_create_and_snapshot(client):
    created = make_session(client)
    assert created["version"] == 0
    assert created["predicates"] == ["merge/3"]
    assert created["warnings"] == []
    sid = created["session"]
    snap = client.get("/sessions/%s" % sid).json()
    assert snap["status"] == "idle"
    assert snap["has_interpretation"] is False
    assert snap["pending"] is False


def test_create_rejects_bad_input(client):
    assert client.post("/sessions", json={"program": "p :- .\n"}).status_code == 422
    assert client.post("/sessions", json={"program": "p.", "rule": "rightmost"}).status_code == 422
    assert client.post("/sessions", json={"program": "p.", "budget": 0}).status_code == 422


def test_unknown_session_is_404(client):
    assert client.get("/sessions/nope").status_code == 404
    assert client.post("/sessions/nope/solve", json={"goal": "p"}).status_code == 404
    assert client.delete("/sessions/nope").status_code == 404


def test_solve_bumps_the_version(client):
    sid = make_session(client)["session"]
    res = client.post("/sessions/%s/solve" % sid, json={"goal": "merge([1],[2],X)"})
    body = res.json()
    assert res.status_code == 200
    assert body["version"] == 1
    assert [a["text"] for a in body["answers"]] == ["X = [1,2]"]
    assert body["answers"][0]["bindings"] == {"X": "[1,2]"}
    assert body["exhaustive"] is True
    res2 = client.post("/sessions/%s/solve" % sid, json={"goal": "merge([],[],[])"})
    assert res2.json()["version"] == 2


def test_solve_validates(client):
    sid = make_session(client)["session"]
    assert client.post("/sessions/%s/solve" % sid, json={"goal": "merge(("}).status_code == 422
    assert client.post("/sessions/%s/solve" % sid,
                       json={"goal": "p", "rule": "rightmost"}).status_code == 422
    assert client.post("/sessions/%s/solve" % sid,
                       json={"goal": "p", "mode": "some"}).status_code == 422


def test_sessions_are_isolated(client):
    a = make_session(client, program="p.\n")["session"]
    b = make_session(client, program="q.\n")["session"]
    ra = client.post("/sessions/%s/solve" % a, json={"goal": "p"}).json()
    rb = client.post("/sessions/%s/solve" % b, json={"goal": "q"}).json()
    assert ra["answers"] and rb["answers"]
    # a's program does not know q and vice versa
    assert client.post("/sessions/%s/solve" % a, json={"goal": "q"}).json()["finitely_failed"]
    assert client.get("/sessions/%s" % a).json()["version"] == 2
    assert client.get("/sessions/%s" % b).json()["version"] == 1


def test_interactive_debug_flow(client):
    sid = make_session(client, program=LAST_BUGGY)["session"]
    res = client.post("/sessions/%s/debug" % sid,
                      json={"goal": "last([1,2],1)", "mode": "wrong"})
    body = res.json()
    assert res.status_code == 200
    assert body["status"] == "awaiting_answer"
    assert body["question"]["kind"] == "atom_value"
    assert body["question"]["subject"] == "last([1,2],1)"

    # answering before a question exists elsewhere is a conflict
    assert client.post("/sessions/%s/answer" % sid, json={"verdict": "nonsense"}).status_code == 422

    seen = []
    while body["status"] == "awaiting_answer":
        subject = body["question"]["subject"]
        seen.append(subject)
        verdict = "e" if subject == "last([1,2],1)" else "c"
        res = client.post("/sessions/%s/answer" % sid, json={"verdict": verdict})
        assert res.status_code == 200
        body = res.json()

    assert body["status"] == "diagnosed"
    diag = body["diagnosis"]
    assert diag["kind"] == "incorrect_clause_instance"
    assert diag["clause_index"] == 2
    assert diag["questions_asked"] == len(seen)

    # no more questions pending: answering again conflicts
    assert client.post("/sessions/%s/answer" % sid, json={"verdict": "c"}).status_code == 409

    # the question endpoint agrees
    q = client.get("/sessions/%s/question" % sid).json()
    assert q["status"] == "diagnosed" and q["question"] is None


def test_debug_with_interpretation_oracle(client):
    created = make_session(client, program=LAST_BUGGY, interpretation=LAST_INTERP)
    sid = created["session"]
    res = client.post("/sessions/%s/debug" % sid,
                      json={"goal": "last([1,2],1)", "oracle": "interp"})
    body = res.json()
    assert body["status"] == "diagnosed"
    assert body["diagnosis"]["kind"] == "incorrect_clause_instance"
    assert body["diagnosis"]["clause_index"] == 2
    assert body["questions_asked"] >= 1

    doc = client.get("/sessions/%s/transcript" % sid).json()["transcript"]
    assert doc["goal"] == "last([1,2],1)"
    assert doc["diagnosis"]["kind"] == "incorrect_clause_instance"
    assert all({"kind", "subject", "verdict"} <= set(q) for q in doc["questions"])


def test_debug_needs_an_interpretation_for_the_interp_oracle(client):
    sid = make_session(client, program=LAST_BUGGY)["session"]
    res = client.post("/sessions/%s/debug" % sid,
                      json={"goal": "last([1,2],1)", "oracle": "interp"})
    assert res.status_code == 422


def test_tree_pagination(client):
    sid = make_session(client, program=LAST_BUGGY, interpretation=LAST_INTERP)["session"]
    client.post("/sessions/%s/debug" % sid, json={"goal": "last([1,2],1)", "oracle": "interp"})
    full = client.get("/sessions/%s/tree" % sid).json()
    assert full["total"] == len(full["nodes"]) > 1
    page = client.get("/sessions/%s/tree" % sid, params={"offset": 1, "limit": 1}).json()
    assert page["total"] == full["total"]
    assert page["nodes"] == full["nodes"][1:2]
    assert client.get("/sessions/%s/tree" % sid, params={"offset": -1}).status_code == 422
    # verdicts from the finished session are overlaid on the rows
    assert any(r.get("verdict") == "erroneous" for r in full["nodes"])


def test_transcript_conflicts_before_debug(client):
    sid = make_session(client)["session"]
    assert client.get("/sessions/%s/transcript" % sid).status_code == 409


def test_delete_session(client):
    sid = make_session(client)["session"]
    assert client.delete("/sessions/%s" % sid).json()["dropped"] is True
    assert client.get("/sessions/%s" % sid).status_code == 404
