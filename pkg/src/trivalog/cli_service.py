"""Command-line front end and HTTP/JSON session service.

The CLI exposes the toolkit verb by verb: normalize and complete print
program forms, check runs the model checks against an interpretation,
fixpoint iterates a consequence operator and emits an interpretation
file, solve and enumerate run the search engine, debug drives a
diagnosis session, serve starts the HTTP API the browser UI talks to.

Exit codes: 0 success (or: is a model), 1 check failed or a bug was
diagnosed, 2 usage or parse error, 3 a budget ran out before the
outcome was conclusive.
"""

import argparse
import json
import sys
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .consequence import STEP_FUNCTIONS, all_inadmissible, fitting_lfp
from .debugger import (
    DebugController,
    DebugError,
    Diagnosis,
    InterpretationOracle,
    KIND_INCORRECT_CLAUSE,
    KIND_TRANSITION,
    KIND_UNCOVERED,
    load_transcript,
    normalize_verdict,
    replay_transcript,
    save_transcript,
    transcript_document,
)
from .interpretations import (
    Interpretation3,
    InterpretationError,
    load_interpretation,
    parse_universe_line,
    same_values,
    save_interpretation,
    universe_from_program,
)
from .modelcheck import (
    check_model_completion,
    check_model_definite,
    check_strong_model,
    verify_synopsis,
)
from .normalform import completion, format_completion, format_disjunctive, to_disjunctive
from .slddnf import DEFAULT_BUDGET, DEFAULT_RULE, RULES, Outcome, enumerate_sets, solve
from .syntax import ParseError, parse_goal, parse_program, parse_term
from .kernel_terms import Struct, format_term

BUG_KINDS = (KIND_INCORRECT_CLAUSE, KIND_TRANSITION, KIND_UNCOVERED)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


class CliError(Exception):
    """Carries the exit code alongside the message."""

    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


# --- shared loading helpers ---------------------------------------------------


def _read(path: str) -> str:
    try:
        with open(path, "r") as handle:
            return handle.read()
    except OSError as err:
        raise CliError("cannot read %s: %s" % (path, err)) from None


def _load_program(path: str):
    clausal = parse_program(_read(path))
    for warning in clausal.warnings:
        print("warning: %s" % warning, file=sys.stderr)
    return to_disjunctive(clausal)


def _load_interp(path: str) -> Interpretation3:
    return load_interpretation(_read(path))


def _pick_universe(args, program):
    """Interpretation file beats an inline universe beats a guess."""
    if getattr(args, "interp", None):
        return _load_interp(args.interp).universe
    if getattr(args, "universe", None):
        return parse_universe_line(args.universe)
    return universe_from_program(program.source if program.source else program, depth=args.depth)


def _parse_goal_atom(text: str) -> Struct:
    goal = parse_goal(text)
    if len(goal) != 1 or goal[0].negated:
        raise CliError("expected a single positive atom, got %r" % text)
    return goal[0].atom


# --- subcommands --------------------------------------------------------------


def _cmd_normalize(args) -> int:
    program = _load_program(args.program)
    print(format_disjunctive(program))
    return EXIT_OK


def _cmd_complete(args) -> int:
    program = _load_program(args.program)
    print(format_completion(completion(program)))
    return EXIT_OK


def _violation_record(check: str, violation) -> dict:
    return {
        "check": check,
        "kind": violation.kind,
        "atom": format_term(violation.atom),
        "head_value": str(violation.head_value),
        "body_value": str(violation.body_value),
        "disjunct_index": violation.disjunct_index,
        "clause_index": violation.clause_index,
    }


def _cmd_check(args) -> int:
    program = _load_program(args.program)
    m = _load_interp(args.interp)
    records: List[dict] = []
    collect_all = 10 ** 9   # show one witness per head/body value class below

    definite = program.is_definite()
    res_def = None
    if definite:
        res_def = check_model_definite(program, m, cap=collect_all)
        records.extend(_violation_record("definite", v) for v in res_def.violations)
    res_comp = check_model_completion(program, m, cap=collect_all)
    records.extend(_violation_record("completion", v) for v in res_comp.violations)
    res_strong = check_strong_model(program, m, cap=collect_all)
    records.extend(_violation_record("strong", v) for v in res_strong.violations)

    verdicts = ["model: %s" % ("yes" if res_comp.ok else "no"),
                "strong: %s" % ("yes" if res_strong.ok else "no")]
    if definite:
        verdicts.insert(0, "definite model: %s" % ("yes" if res_def.ok else "no"))
    print(", ".join(verdicts))
    for check, res in (("definite", res_def),
                       ("completion", res_comp), ("strong", res_strong)):
        if res is None or res.ok:
            continue
        classes: Dict[tuple, list] = {}
        for violation in res.violations:
            classes.setdefault((str(violation.head_value), str(violation.body_value)),
                               []).append(violation)
        for (hv, bv), members in sorted(classes.items()):
            print("%s violations, head %s body %s: %d, e.g. %s"
                  % (check, hv, bv, len(members), members[0].describe()))

    synopsis = verify_synopsis(program, m, evidence_cap=args.cap)
    print(synopsis.describe())

    if args.report:
        with open(args.report, "w") as handle:
            for record in records:
                handle.write(json.dumps(record, sort_keys=True) + "\n")
        print("report written to %s (%d records)" % (args.report, len(records)), file=sys.stderr)

    return EXIT_OK if res_comp.ok else EXIT_FAILED


def _cmd_fixpoint(args) -> int:
    program = _load_program(args.program)
    universe = _pick_universe(args, program)

    if args.op == "fitting":
        res = fitting_lfp(program, universe, max_iters=args.iters, mode=args.mode)
        result, iterations, converged = res.interpretation, res.iterations, res.converged
    else:
        step = STEP_FUNCTIONS[args.op]
        current = _load_interp(args.interp) if args.interp else all_inadmissible(program, universe)
        limit = args.iters if args.iters is not None else sum(
            universe.atom_count(d.arity) for d in program.definitions) + 1
        iterations, converged = 0, False
        while iterations < limit:
            nxt = step(program, current)
            iterations += 1
            if same_values(nxt, current):
                converged = True
                current = nxt
                break
            current = nxt
        result = current

    text = save_interpretation(result)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    else:
        print(text, end="")
    status = "stable" if converged else "NOT stable"
    print("%s after %d iteration(s) of %s" % (status, iterations, args.op), file=sys.stderr)
    mapping = result.as_mapping()
    if len(mapping) <= 50:
        for atom in sorted(mapping, key=format_term):
            print("%s: %s" % (format_term(atom), mapping[atom]), file=sys.stderr)
    else:
        counts = {"T": 0, "F": 0, "I": 0}
        for value in mapping.values():
            counts[str(value)] += 1
        print("T: %(T)d, F: %(F)d, I: %(I)d" % counts, file=sys.stderr)
    return EXIT_OK if converged else EXIT_INCONCLUSIVE


def _print_outcome(outcome: Outcome) -> None:
    print(outcome.describe())


def _cmd_solve(args) -> int:
    program = _load_program(args.program)
    goal = parse_goal(args.goal)
    trace = (lambda line: print(line, file=sys.stderr)) if args.trace else None
    mode = "first" if args.first else "all"
    outcome = solve(program, goal, rule=args.rule, budget=args.budget, mode=mode, trace=trace)
    _print_outcome(outcome)
    if outcome.budget_exhausted and not outcome.answers:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    program = _load_program(args.program)
    universe = _pick_universe(args, program)
    preds = None
    if args.pred:
        preds = []
        for spec_text in args.pred:
            name, _, arity = spec_text.rpartition("/")
            if not name:
                raise CliError("--pred wants name/arity, got %r" % spec_text)
            preds.append((name, int(arity)))
    res = enumerate_sets(program, universe, preds, rule=args.rule, budget=args.budget)
    wanted = args.set
    if wanted in ("ss", "all"):
        for atom in res.success:
            print("SS %s." % format_term(atom))
    if wanted in ("ff", "all"):
        for atom in res.finite_failure:
            print("FF %s." % format_term(atom))
    if wanted in ("open", "all"):
        for atom in res.unresolved:
            print("?? %s." % format_term(atom))
    print("ss=%d ff=%d unresolved=%d" % (len(res.success), len(res.finite_failure),
                                         len(res.unresolved)), file=sys.stderr)
    return EXIT_INCONCLUSIVE if res.unresolved else EXIT_OK


def _ask_human(question) -> str:
    print(question.text)
    while True:
        try:
            raw = input("[c]orrect / [e]rroneous / [i]nadmissible? ").strip()
        except EOFError:
            raise CliError("input closed before the session finished") from None
        try:
            return normalize_verdict(raw)
        except DebugError as err:
            print(str(err), file=sys.stderr)


def _debug_exit(diagnosis: Diagnosis) -> int:
    return EXIT_FAILED if diagnosis.kind in BUG_KINDS else EXIT_OK


def _cmd_debug(args) -> int:
    program = _load_program(args.program)

    if args.oracle == "transcript":
        if not args.transcript:
            raise CliError("--oracle transcript needs --transcript FILE")
        doc = load_transcript(args.transcript)
        diagnosis = replay_transcript(program, doc)
        print(diagnosis.describe())
        return _debug_exit(diagnosis)

    oracle = None
    if args.oracle == "interp":
        if not args.interp:
            raise CliError("--oracle interp needs --interp FILE")
        oracle = InterpretationOracle(_load_interp(args.interp))

    goal = _parse_goal_atom(args.goal)
    target = parse_term(args.target) if args.target else None
    ctl = DebugController(program, goal, mode=args.mode, oracle=oracle,
                          target=target, rule=args.rule, budget=args.budget)
    ctl.start()
    while ctl.status == "awaiting_answer":
        ctl.answer(_ask_human(ctl.question))

    for entry in ctl.transcript:
        mark = " (implied)" if entry["implied"] else ""
        print("%s -> %s%s" % (entry["subject"], entry["verdict"], mark))

    if ctl.status == "error":
        print("error: %s" % ctl.error, file=sys.stderr)
        message = ctl.error or ""
        inconclusive = "budget" in message or "exhaustive" in message
        return EXIT_INCONCLUSIVE if inconclusive else EXIT_USAGE

    assert ctl.diagnosis is not None
    print(ctl.diagnosis.describe())
    if args.save_transcript:
        save_transcript(ctl, args.save_transcript)
        print("transcript written to %s" % args.save_transcript, file=sys.stderr)
    return _debug_exit(ctl.diagnosis)


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# --- HTTP session service -----------------------------------------------------


@dataclass
class SessionState:
    """One isolated session: program, settings and debug progress."""

    session_id: str
    program: object
    interpretation: Optional[Interpretation3]
    rule: str
    budget: int
    version: int = 0
    controller: Optional[DebugController] = None
    created: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory session registry; access is serialized."""

    def __init__(self):
        self._sessions: Dict[str, SessionState] = {}
        self._lock = threading.Lock()

    def create(self, state: SessionState) -> None:
        with self._lock:
            self._sessions[state.session_id] = state

    def get(self, session_id: str) -> Optional[SessionState]:
        with self._lock:
            return self._sessions.get(session_id)

    def drop(self, session_id: str) -> bool:
        with self._lock:
            return self._sessions.pop(session_id, None) is not None


def _question_payload(question) -> Optional[dict]:
    if question is None:
        return None
    return {
        "kind": question.kind,
        "subject": question.subject,
        "answers": list(question.answers),
        "text": question.text,
    }


def _debug_payload(state: SessionState) -> dict:
    ctl = state.controller
    payload = {
        "session": state.session_id,
        "version": state.version,
        "status": ctl.status if ctl else "idle",
        "question": _question_payload(ctl.question) if ctl else None,
        "diagnosis": ctl.diagnosis.as_dict() if ctl and ctl.diagnosis else None,
        "error": ctl.error if ctl else None,
        "questions_asked": sum(1 for e in ctl.transcript if not e["implied"]) if ctl else 0,
    }
    return payload


def create_app():
    from fastapi import FastAPI, HTTPException
    from fastapi.middleware.cors import CORSMiddleware
    from pydantic import BaseModel

    class CreateSessionBody(BaseModel):
        program: str
        interpretation: Optional[str] = None
        rule: str = DEFAULT_RULE
        budget: int = DEFAULT_BUDGET

    class SolveBody(BaseModel):
        goal: str
        rule: Optional[str] = None
        budget: Optional[int] = None
        mode: str = "all"

    class DebugBody(BaseModel):
        goal: str
        mode: str = "wrong"
        oracle: str = "human"
        target: Optional[str] = None
        rule: Optional[str] = None
        budget: Optional[int] = None

    class AnswerBody(BaseModel):
        verdict: str

    app = FastAPI(title="three-valued logic program sessions")
    # browser clients load the debug UI from a static file server on a
    # different origin; sessions are unauthenticated and local anyway
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()
    app.state.store = store

    def _session_or_404(session_id: str) -> SessionState:
        state = store.get(session_id)
        if state is None:
            raise HTTPException(status_code=404, detail="unknown session %s" % session_id)
        return state

    def _unprocessable(message: str):
        return HTTPException(status_code=422, detail=message)

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if body.rule not in RULES:
            raise _unprocessable("unknown rule %r (have: %s)" % (body.rule, ", ".join(RULES)))
        if body.budget <= 0:
            raise _unprocessable("budget must be positive")
        try:
            clausal = parse_program(body.program)
            program = to_disjunctive(clausal)
            interpretation = load_interpretation(body.interpretation) if body.interpretation else None
        except (ParseError, InterpretationError) as err:
            raise _unprocessable(str(err)) from None
        state = SessionState(
            session_id=uuid.uuid4().hex,
            program=program,
            interpretation=interpretation,
            rule=body.rule,
            budget=body.budget,
        )
        store.create(state)
        return {
            "session": state.session_id,
            "version": state.version,
            "predicates": ["%s/%d" % p for p in program.predicates()],
            "warnings": list(clausal.warnings),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        state = _session_or_404(session_id)
        with state.lock:
            ctl = state.controller
            return {
                "session": state.session_id,
                "version": state.version,
                "rule": state.rule,
                "budget": state.budget,
                "has_interpretation": state.interpretation is not None,
                "status": ctl.status if ctl else "idle",
                "mode": ctl.mode if ctl else None,
                "goal": format_term(ctl.goal) if ctl else None,
                "pending": bool(ctl and ctl.question is not None),
            }

    @app.delete("/sessions/{session_id}")
    def drop_session(session_id: str):
        if not store.drop(session_id):
            raise HTTPException(status_code=404, detail="unknown session %s" % session_id)
        return {"session": session_id, "dropped": True}

    @app.post("/sessions/{session_id}/solve")
    def run_solve(session_id: str, body: SolveBody):
        state = _session_or_404(session_id)
        if body.mode not in ("all", "first"):
            raise _unprocessable("mode must be all or first")
        rule = body.rule or state.rule
        if rule not in RULES:
            raise _unprocessable("unknown rule %r" % rule)
        budget = body.budget or state.budget
        try:
            goal = parse_goal(body.goal)
        except ParseError as err:
            raise _unprocessable(str(err)) from None
        with state.lock:
            outcome = solve(state.program, goal, rule=rule, budget=budget, mode=body.mode)
            state.version += 1
            return {
                "session": state.session_id,
                "version": state.version,
                "goal": body.goal,
                "answers": [
                    {
                        "bindings": {v.name: format_term(t) for v, t in a.bindings},
                        "text": a.describe(),
                    }
                    for a in outcome.answers
                ],
                "exhaustive": outcome.exhaustive,
                "floundered": outcome.floundered,
                "budget_exhausted": outcome.budget_exhausted,
                "finitely_failed": outcome.finitely_failed,
                "expansions": outcome.expansions,
            }

    @app.post("/sessions/{session_id}/debug")
    def start_debug(session_id: str, body: DebugBody):
        state = _session_or_404(session_id)
        if body.mode not in ("wrong", "missing"):
            raise _unprocessable("mode must be wrong or missing")
        if body.oracle not in ("human", "interp"):
            raise _unprocessable("oracle must be human or interp")
        oracle = None
        if body.oracle == "interp":
            if state.interpretation is None:
                raise _unprocessable("session has no interpretation to answer from")
            oracle = InterpretationOracle(state.interpretation)
        rule = body.rule or state.rule
        if rule not in RULES:
            raise _unprocessable("unknown rule %r" % rule)
        try:
            goal = parse_goal(body.goal)
            target = parse_term(body.target) if body.target else None
        except ParseError as err:
            raise _unprocessable(str(err)) from None
        if len(goal) != 1 or goal[0].negated:
            raise _unprocessable("debug goal must be a single positive atom")
        with state.lock:
            state.controller = DebugController(
                state.program, goal[0].atom, mode=body.mode, oracle=oracle,
                target=target, rule=rule, budget=body.budget or state.budget,
            )
            state.controller.start()
            state.version += 1
            return _debug_payload(state)

    @app.get("/sessions/{session_id}/question")
    def pending_question(session_id: str):
        state = _session_or_404(session_id)
        with state.lock:
            ctl = state.controller
            return {
                "session": state.session_id,
                "version": state.version,
                "status": ctl.status if ctl else "idle",
                "question": _question_payload(ctl.question) if ctl else None,
            }

    @app.post("/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerBody):
        state = _session_or_404(session_id)
        try:
            verdict = normalize_verdict(body.verdict)
        except DebugError as err:
            raise _unprocessable(str(err)) from None
        with state.lock:
            ctl = state.controller
            if ctl is None or ctl.question is None:
                raise HTTPException(status_code=409, detail="no question is pending")
            ctl.answer(verdict)
            state.version += 1
            return _debug_payload(state)

    @app.get("/sessions/{session_id}/diagnosis")
    def get_diagnosis(session_id: str):
        state = _session_or_404(session_id)
        with state.lock:
            return _debug_payload(state)

    @app.get("/sessions/{session_id}/tree")
    def tree_slice(session_id: str, offset: int = 0, limit: int = 50):
        state = _session_or_404(session_id)
        if offset < 0 or limit < 0:
            raise _unprocessable("offset and limit must be non-negative")
        with state.lock:
            ctl = state.controller
            rows = ctl.tree_nodes() if ctl else []
            return {
                "session": state.session_id,
                "version": state.version,
                "total": len(rows),
                "offset": offset,
                "nodes": rows[offset:offset + limit],
            }

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        state = _session_or_404(session_id)
        with state.lock:
            ctl = state.controller
            if ctl is None:
                raise HTTPException(status_code=409, detail="no debug session was started")
            return {
                "session": state.session_id,
                "version": state.version,
                "transcript": transcript_document(ctl),
            }

    return app


# --- argument parsing ----------------------------------------------------------


def _add_engine_flags(sub) -> None:
    sub.add_argument("--rule", choices=RULES, default=DEFAULT_RULE)
    sub.add_argument("--budget", type=int, default=DEFAULT_BUDGET)


def _add_universe_flags(sub) -> None:
    sub.add_argument("--interp", help="interpretation file supplying the universe")
    sub.add_argument("--universe", help="inline universe, e.g. 'depth=2 ints=0..3'")
    sub.add_argument("--depth", type=int, default=2, help="depth for a guessed universe")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trivalog",
        description="three-valued semantics toolkit for pure logic programs",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("normalize", help="print the one-definition-per-predicate form")
    p.add_argument("--program", required=True)
    p.set_defaults(func=_cmd_normalize)

    p = subs.add_parser("complete", help="print the completion")
    p.add_argument("--program", required=True)
    p.set_defaults(func=_cmd_complete)

    p = subs.add_parser("check", help="check model / strong model against an interpretation")
    p.add_argument("--program", required=True)
    p.add_argument("--interp", required=True)
    p.add_argument("--cap", type=int, default=20, help="max violations to collect per check")
    p.add_argument("--report", help="write violations as JSON lines to this file")
    p.set_defaults(func=_cmd_check)

    p = subs.add_parser("fixpoint", help="iterate a consequence operator, emit an interpretation")
    p.add_argument("--program", required=True)
    p.add_argument("--op", choices=("fitting", "t3", "t3plus", "t3minus"), default="fitting")
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--mode", choices=("naive", "seminaive"), default="naive")
    p.add_argument("--out", help="write the resulting interpretation here instead of stdout")
    _add_universe_flags(p)
    p.set_defaults(func=_cmd_fixpoint)

    p = subs.add_parser("solve", help="run the search engine on a goal")
    p.add_argument("--program", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--all", dest="first", action="store_false", default=False,
                   help="search the whole tree (default)")
    p.add_argument("--first", dest="first", action="store_true",
                   help="stop at the first answer")
    p.add_argument("--trace", action="store_true", help="print expansion steps to stderr")
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_solve)

    p = subs.add_parser("enumerate", help="classify ground atoms: SS / FF / unresolved")
    p.add_argument("--program", required=True)
    p.add_argument("--pred", action="append", help="restrict to name/arity (repeatable)")
    p.add_argument("--set", choices=("ss", "ff", "open", "all"), default="all")
    _add_universe_flags(p)
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_enumerate)

    p = subs.add_parser("debug", help="diagnose a wrong or missing answer")
    p.add_argument("--program", required=True)
    p.add_argument("--goal", required=True)
    p.add_argument("--mode", choices=("wrong", "missing"), default="wrong")
    p.add_argument("--oracle", choices=("human", "interp", "transcript"), default="human")
    p.add_argument("--interp", help="interpretation file for --oracle interp")
    p.add_argument("--transcript", help="transcript file for --oracle transcript")
    p.add_argument("--save-transcript", dest="save_transcript",
                   help="write the finished session transcript here")
    p.add_argument("--target", help="for missing mode: the instance that should succeed")
    _add_engine_flags(p)
    p.set_defaults(func=_cmd_debug)

    p = subs.add_parser("serve", help="start the HTTP/JSON session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def cli_main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as err:
        print("error: %s" % err, file=sys.stderr)
        return err.code
    except (ParseError, InterpretationError) as err:
        print("error: %s" % err, file=sys.stderr)
        return EXIT_USAGE
    except DebugError as err:
        message = str(err)
        print("error: %s" % message, file=sys.stderr)
        if "budget" in message or "exhaustive" in message:
            return EXIT_INCONCLUSIVE
        return EXIT_USAGE


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
