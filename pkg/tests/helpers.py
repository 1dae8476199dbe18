"""Shared fixtures: program texts, combination builder, random generators."""

from __future__ import annotations

import random

from trivalog import (
    BoundedUniverse,
    DisjunctiveProgram,
    Interpretation3,
    parse_program,
    to_disjunctive,
)
from trivalog.interpretations import Table
from trivalog.truth import F, I, T

MERGE_TEXT = """merge([], Bs, Bs).
merge(A.As, [], A.As).
merge(A.As, B.Bs, A.Cs) :- A =< B, merge(As, B.Bs, Cs).
merge(A.As, B.Bs, B.Cs) :- A > B, merge(A.As, Bs, Cs).
"""

SUBS_TEXT = """subs([], L).
subs([H|T], LH) :- select(H, LH, L), subs(T, L), not member(H, T).
select(H, [H|L], L).
select(H, [X|L], [X|LH]) :- select(H, L, LH).
member(X, [X|L]).
member(X, [Y|L]) :- member(X, L).
"""

EO_CLAUSES = {
    "e1": "e1(0). e1(s(s(N))) :- e1(N).",
    "e2": "e2(0). e2(s(N)) :- odd(N).",
    "e3": "e3(0). e3(s(N)) :- not e3(N).",
    "e4": "e4(N) :- not odd(N).",
    "o1": "o1(s(0)). o1(s(s(N))) :- o1(N).",
    "o2": "o2(s(N)) :- even(N).",
    "o3": "o3(s(N)) :- not o3(N).",
    "o4": "o4(N) :- not even(N).",
}

EVENS = ("e1", "e2", "e3", "e4")
ODDS = ("o1", "o2", "o3", "o4")


def combo(e: str, o: str) -> DisjunctiveProgram:
    """Dispatch even/odd through one chosen definition pair."""
    text = "even(N) :- %s(N).\nodd(N) :- %s(N).\n%s\n%s\n" % (e, o, EO_CLAUSES[e], EO_CLAUSES[o])
    return to_disjunctive(parse_program(text))


# tiny signature for randomized cross checks: three propositions plus s/1
RAND_PREDS = (("p", 0), ("q", 0), ("r", 0), ("s", 1))
RAND_UNI = BoundedUniverse((("a", 0), ("b", 0)), None, 0, None, False)


def rand_program(rng: random.Random, allow_negation: bool = True) -> DisjunctiveProgram:
    lines = []
    for name, arity in RAND_PREDS:
        for _ in range(rng.randint(0, 2)):
            head = name if not arity else "%s(%s)" % (name, rng.choice(["X", "a", "b"]))
            body = []
            for _ in range(rng.randint(0, 2)):
                bn, ba = rng.choice(RAND_PREDS)
                atom = bn if not ba else "%s(%s)" % (bn, rng.choice(["X", "a", "b"]))
                negated = allow_negation and rng.random() < 0.35
                body.append(("not " if negated else "") + atom)
            lines.append(head + (" :- " + ", ".join(body) if body else "") + ".")
    if not lines:
        lines.append("p.")
    return to_disjunctive(parse_program("\n".join(lines)))


def rand_interp(rng: random.Random, program: DisjunctiveProgram) -> Interpretation3:
    tables = {}
    for d in program.definitions:
        tables[d.pred] = Table(I, {a: rng.choice([T, F, I]) for a in RAND_UNI.atoms(*d.pred)})
    return Interpretation3(RAND_UNI, tables)
