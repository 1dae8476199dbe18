"""Declarative diagnosis of wrong and missing answers.

Wrong answers are debugged over proof trees: each node is a proved atom
together with the clause instance that proved it, children are the body
atoms.  A negated body literal appears as a leaf recording the atom
whose finite failure supported it.  Missing answers are debugged over
call trees: each node is a call with the answers the search computed
for it, children are the body calls made under the accumulated answer
bindings (which is why the underlying searches must be exhaustive).

The oracle classifies atoms as correct (true), erroneous (false) or
inadmissible, and call nodes as correct, missing-an-answer (erroneous)
or inadmissible.  Diagnosis descends from an erroneous root to an
erroneous node with no erroneous child:

  * all children correct: the clause instance itself is wrong;
  * some child inadmissible: the clause instance turned an admissible
    call into an inadmissible one;
  * a call node with no erroneous child: the definition fails to cover
    a true instance.

Inadmissible subtrees are never descended into.  A negation bridges the
two modes: a proof leaf "not B" judged wrong becomes a missing-answer
diagnosis of B, and a call on "not B" blocked by a wrong success of B
becomes a wrong-answer diagnosis of B.  Questions are asked once; the
sequence of question/verdict pairs is deterministic and can be replayed
from a transcript.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple, Union

from .interpretations import Interpretation3, _apply_bindings, compare
from .normalform import DisjunctiveProgram, head_instance, rename_disjunct
from .slddnf import DEFAULT_BUDGET, DEFAULT_RULE, solve
from .syntax import BUILTIN_EQ, Literal, format_atom
from .kernel_terms import (
    Constraints,
    Num,
    Struct,
    Term,
    Var,
    format_term,
    fresh_counter,
    is_ground,
    match_ground,
    unify,
    variables_of,
)
from .truth import F, I, T

VERDICTS = ("correct", "erroneous", "inadmissible")

CORRECT = "correct"
ERRONEOUS = "erroneous"
INADMISSIBLE = "inadmissible"

KIND_INCORRECT_CLAUSE = "incorrect_clause_instance"
KIND_TRANSITION = "inadmissibility_transition"
KIND_UNCOVERED = "uncovered_atom"
KIND_GOAL_INADMISSIBLE = "goal_inadmissible_no_bug"
KIND_JUDGED_CORRECT = "judged_correct_no_bug"


class DebugError(ValueError):
    pass


def canon(term: Term) -> str:
    """Format with variables renamed to V1, V2, ... in first occurrence
    order, so alphabetic variants share cache keys."""
    renaming: Dict[Var, Var] = {}
    for v in variables_of(term):
        if v not in renaming:
            renaming[v] = Var("V%d" % (len(renaming) + 1))
    if renaming:
        term = _apply_bindings(term, renaming)
    return format_term(term)


# --- proof trees (wrong answers) ---------------------------------------------


@dataclass
class NegLeaf:
    """A body literal `not B` supported by the finite failure of B."""

    template: Struct
    atom: Optional[Struct] = None


@dataclass
class CompLeaf:
    template: Struct
    atom: Optional[Struct] = None


@dataclass
class ProofNode:
    template: Struct
    clause_index: int                  # 0-based position in the source program
    body: list                         # ProofNode | NegLeaf | CompLeaf, body order
    atom: Optional[Struct] = None      # filled in once the proof is complete

    def instance_text(self) -> str:
        head = format_atom(self.atom if self.atom is not None else self.template)
        parts = []
        for item in self.body:
            a = item.atom if item.atom is not None else item.template
            if isinstance(item, NegLeaf):
                parts.append("not " + format_atom(a))
            else:
                parts.append(format_atom(a))
        if not parts:
            return head
        return "%s :- %s" % (head, ", ".join(parts))


class ProofBudgetError(DebugError):
    pass


class _Prover:
    """Enumerates proof trees for an atom, leftmost-first over the
    program's disjuncts.  Literals that cannot be handled yet (negation
    or comparison on unbound arguments) are postponed; a path where only
    such literals remain is dropped and flagged incomplete."""

    def __init__(self, program: DisjunctiveProgram, rule: str, budget: int):
        self.program = program
        self.rule = rule
        self.budget = budget
        self.steps = 0
        self.counter = fresh_counter()
        self.incomplete = False

    def _tick(self):
        self.steps += 1
        if self.steps > self.budget:
            raise ProofBudgetError("proof search exceeded %d steps" % self.budget)

    def proofs(self, atom: Struct, cons: Constraints):
        self._tick()
        defn = self.program.get(atom.functor, len(atom.args))
        if defn is None or not defn.disjuncts:
            return
        for pairs, rest, dj in head_instance(defn, atom.args, self.counter):
            c = cons.add(list(pairs))
            if not c.satisfiable:
                continue
            pending = tuple(enumerate(rest))
            for c2, done in self._body(pending, c, ()):
                body = [item for _pos, item in sorted(done, key=lambda pi: pi[0])]
                yield c2, ProofNode(atom, dj.clause_index, body)

    def _pickable(self, lit: Literal, cons: Constraints) -> bool:
        if lit.is_comparison():
            a, b = (cons.resolve(x) for x in lit.atom.args)
            return isinstance(a, Num) and isinstance(b, Num)
        if lit.negated:
            return cons.grounds(lit.atom)
        return True

    def _body(self, pending: tuple, cons: Constraints, done: tuple):
        self._tick()
        if not pending:
            yield cons, done
            return
        pick = None
        for k, (_pos, lit) in enumerate(pending):
            if self._pickable(lit, cons):
                pick = k
                break
        if pick is None:
            self.incomplete = True  # only ungrounded negations or comparisons left
            return
        pos, lit = pending[pick]
        rest = pending[:pick] + pending[pick + 1:]
        if lit.is_equality():
            c = cons.add([(lit.atom.args[0], lit.atom.args[1])])
            if c.satisfiable:
                yield from self._body(rest, c, done)
            return
        if lit.is_comparison():
            a, b = (cons.resolve(x) for x in lit.atom.args)
            holds = compare(lit.atom.functor, a, b) is T
            if lit.negated:
                holds = not holds
            if holds:
                yield from self._body(rest, cons, done + ((pos, CompLeaf(lit.atom)),))
            return
        if lit.negated and lit.atom.functor == BUILTIN_EQ and len(lit.atom.args) == 2:
            # fixed semantics, not a questionable call
            a, b = (cons.resolve(x) for x in lit.atom.args)
            if a != b:
                yield from self._body(rest, cons, done + ((pos, CompLeaf(lit.atom)),))
            return
        if lit.negated:
            b = cons.resolve(lit.atom)
            out = solve(self.program, [Literal(b)], rule=self.rule,
                        budget=max(1, self.budget - self.steps), mode="all")
            self.steps += out.expansions
            if out.answers:
                return
            if not out.finitely_failed:
                self.incomplete = True
                return
            yield from self._body(rest, cons, done + ((pos, NegLeaf(b)),))
            return
        for c2, node in self.proofs(lit.atom, cons):
            yield from self._body(rest, c2, done + ((pos, node),))


def _finalize(node, cons: Constraints) -> None:
    node.atom = cons.resolve(node.template)
    if isinstance(node, ProofNode):
        for item in node.body:
            _finalize(item, cons)


def build_proof_tree(
    program: DisjunctiveProgram,
    goal: Struct,
    target: Optional[Struct] = None,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
) -> ProofNode:
    """The proof tree behind an answer to the goal atom.

    Without a target the first proof is taken; with one, proofs are
    enumerated until the proved instance matches it syntactically.
    """
    prover = _Prover(program, rule, budget)
    for cons, root in prover.proofs(goal, Constraints.empty()):
        _finalize(root, cons)
        if target is None or root.atom == target:
            return root
    if target is not None:
        raise DebugError("no proof of %s matches %s" % (format_atom(goal), format_atom(target)))
    raise DebugError("no proof of %s found" % format_atom(goal))


# --- call trees (missing answers) --------------------------------------------


@dataclass
class CallNode:
    call: Struct
    negated: bool
    answers: tuple = ()                # resolved instances; for a negation, ("yes",) or ()
    children: list = field(default_factory=list)
    via_clause: Optional[int] = None   # which clause issued this call
    exhaustive: bool = True
    floundered: bool = False
    key: str = ""

    def answers_text(self) -> tuple:
        if self.negated:
            return self.answers
        return tuple(format_atom(a) for a in self.answers)


class _CallTreeBuilder:
    def __init__(self, program: DisjunctiveProgram, rule: str, budget: int, max_depth: int = 64):
        self.program = program
        self.rule = rule
        self.budget = budget
        self.max_depth = max_depth
        self.counter = fresh_counter()
        self.cache: Dict[str, CallNode] = {}

    def _import_answer(self, cons: Constraints, bindings: tuple) -> Constraints:
        # answer terms may carry search variables from an unrelated
        # renaming sequence; rename them apart before merging
        fresh: Dict[Var, Var] = {}
        pairs = []
        for v, t in bindings:
            for w in variables_of(t):
                if w not in fresh:
                    fresh[w] = Var("_M%d" % next(self.counter))
            pairs.append((v, _apply_bindings(t, fresh) if fresh else t))
        return cons.add(pairs)

    def build(self, call: Struct, negated: bool = False, depth: int = 0) -> CallNode:
        key = ("not " if negated else "") + canon(call)
        if key in self.cache:
            return self.cache[key]
        node = CallNode(call, negated, key=key)
        self.cache[key] = node
        if depth > self.max_depth:
            node.exhaustive = False
            return node
        out = solve(self.program, [Literal(call, negated)], rule=self.rule,
                    budget=self.budget, mode="all")
        node.exhaustive = out.exhaustive
        node.floundered = out.floundered
        if negated:
            node.answers = ("yes",) if out.answers else ()
            # the inner positive call explains the failure or success
            node.children.append(self.build(call, False, depth + 1))
            return node
        seen = set()
        answers = []
        for cons in out.answer_constraints:
            inst = cons.resolve(call)
            text = canon(inst)
            if text not in seen:
                seen.add(text)
                answers.append(inst)
        node.answers = tuple(answers)
        defn = self.program.get(call.functor, len(call.args))
        if defn is None:
            return node
        for pairs, rest, dj in head_instance(defn, call.args, self.counter):
            cons0 = Constraints.empty().add(list(pairs))
            if not cons0.satisfiable:
                continue
            partials = [cons0]
            for lit in rest:
                if lit.is_equality():
                    partials = [c2 for c in partials
                                for c2 in [c.add([(lit.atom.args[0], lit.atom.args[1])])]
                                if c2.satisfiable]
                    continue
                if lit.is_comparison():
                    partials = self._filter_comparison(lit, partials, node)
                    continue
                produced = set()
                survivors = []
                for c in partials:
                    sub = c.resolve(lit.atom)
                    if lit.negated and not is_ground(sub):
                        node.floundered = True
                        continue
                    child = self.build(sub, lit.negated, depth + 1)
                    if child.via_clause is None:
                        child.via_clause = dj.clause_index
                    ck = child.key
                    if ck not in produced:
                        produced.add(ck)
                        node.children.append(child)
                    if lit.negated:
                        inner = solve(self.program, [Literal(sub)], rule=self.rule,
                                      budget=self.budget, mode="all")
                        node.exhaustive = node.exhaustive and (inner.exhaustive or bool(inner.answers))
                        if inner.finitely_failed:
                            survivors.append(c)
                    else:
                        inner = solve(self.program, [Literal(sub)], rule=self.rule,
                                      budget=self.budget, mode="all")
                        node.exhaustive = node.exhaustive and inner.exhaustive
                        for ans in inner.answers:
                            c2 = self._import_answer(c, ans.bindings)
                            if c2.satisfiable:
                                survivors.append(c2)
                partials = survivors
        return node

    def _filter_comparison(self, lit: Literal, partials: list, node: CallNode) -> list:
        kept = []
        for c in partials:
            a, b = (c.resolve(x) for x in lit.atom.args)
            if not (isinstance(a, Num) and isinstance(b, Num)):
                node.floundered = True
                continue
            holds = compare(lit.atom.functor, a, b) is T
            if lit.negated:
                holds = not holds
            if holds:
                kept.append(c)
        return kept


def build_call_answer_tree(
    program: DisjunctiveProgram,
    call: Struct,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
) -> CallNode:
    return _CallTreeBuilder(program, rule, budget).build(call)


# --- questions and oracles ----------------------------------------------------


@dataclass(frozen=True)
class Question:
    kind: str                 # "atom_value" or "answer_set"
    key: tuple
    subject: str
    answers: tuple = ()

    @property
    def text(self) -> str:
        if self.kind == "atom_value":
            return "status of %s? [correct/erroneous/inadmissible]" % self.subject
        shown = ", ".join(self.answers) if self.answers else "(none)"
        return ("the call %s produced: %s. complete and sound? "
                "[correct/erroneous/inadmissible]" % (self.subject, shown))


def atom_question(atom: Struct) -> Question:
    c = canon(atom)
    return Question("atom_value", ("value", c), c)


def answer_set_question(node: CallNode) -> Question:
    c = canon(node.call)
    answers = node.answers_text()
    return Question("answer_set", ("answers", c, answers), c, answers)


class PendingQuestion(Exception):
    def __init__(self, question: Question):
        super().__init__(question.text)
        self.question = question


class InterpretationOracle:
    """Answers questions from an intended interpretation.

    An atom with variables is judged over all its in-universe ground
    instances: the claim is that every instance holds, so any false
    instance makes it erroneous, otherwise any inadmissible instance
    makes it inadmissible.
    """

    def __init__(self, interpretation: Interpretation3):
        self.m = interpretation

    def _instances(self, term: Struct):
        gvars = list(dict.fromkeys(variables_of(term)))
        if not gvars:
            yield term
            return
        for combo in itertools.product(self.m.universe.terms(), repeat=len(gvars)):
            yield _apply_bindings(term, dict(zip(gvars, combo)))

    def atom_value(self, atom: Struct) -> str:
        saw_i = False
        for inst in self._instances(atom):
            v = self.m.truth_of(inst)
            if v is F:
                return ERRONEOUS
            if v is I:
                saw_i = True
        return INADMISSIBLE if saw_i else CORRECT

    def answer_set(self, node: CallNode) -> str:
        if self.find_missing(node) is not None:
            return ERRONEOUS
        saw_admissible = False
        for inst in self._instances(node.call):
            if self.m.truth_of(inst) is not I:
                saw_admissible = True
                break
        return CORRECT if saw_admissible else INADMISSIBLE

    def find_missing(self, node: CallNode) -> Optional[Struct]:
        """First true in-universe instance of the call covered by no
        computed answer, in universe enumeration order."""
        for inst in self._instances(node.call):
            if self.m.truth_of(inst) is not T:
                continue
            if not any(self._covers(a, inst) for a in node.answers):
                return inst
        return None

    @staticmethod
    def _covers(answer: Struct, inst: Struct) -> bool:
        return match_ground(answer, inst, {}) if is_ground(inst) else answer == inst

    def ask(self, question: Question, node=None) -> str:
        if question.kind == "atom_value":
            return self.atom_value(node)
        return self.answer_set(node)


class TranscriptOracle:
    """Replays a recorded question/verdict sequence, verifying that the
    questions arise again in the same order."""

    def __init__(self, entries: Iterable[dict]):
        self.queue = list(entries)
        self.position = 0

    def ask(self, question: Question, node=None) -> str:
        while self.position < len(self.queue) and self.queue[self.position].get("implied"):
            self.position += 1  # implied entries are re-derived, not asked
        if self.position >= len(self.queue):
            raise DebugError("transcript exhausted at question: %s" % question.text)
        entry = self.queue[self.position]
        self.position += 1
        if entry.get("subject") != question.subject or entry.get("kind") != question.kind:
            raise DebugError(
                "transcript diverged: expected %s %r, got %s %r"
                % (entry.get("kind"), entry.get("subject"), question.kind, question.subject)
            )
        return entry["verdict"]

    def find_missing(self, node) -> Optional[Struct]:
        subject = canon(node.call)
        for entry in self.queue:
            if (entry.get("kind") == "missing_instance"
                    and entry.get("subject") == subject and entry.get("answers")):
                return _goal_atom(entry["answers"][0])
        return None

    @property
    def exhausted(self) -> bool:
        return all(e.get("implied") for e in self.queue[self.position:])


# --- diagnosis ----------------------------------------------------------------


@dataclass
class Diagnosis:
    kind: str
    predicate: str = ""
    clause_index: Optional[int] = None    # 1-based clause number in the source
    clause_line: Optional[int] = None
    subject: str = ""
    details: str = ""
    questions_asked: int = 0

    def describe(self) -> str:
        if self.kind == KIND_GOAL_INADMISSIBLE:
            return ("the goal itself is inadmissible: %s; no program bug is implied "
                    "(%s)" % (self.subject, _n_questions(self.questions_asked)))
        if self.kind == KIND_JUDGED_CORRECT:
            return "nothing wrong: %s was judged correct (%s)" % (
                self.subject, _n_questions(self.questions_asked))
        if self.kind == KIND_INCORRECT_CLAUSE:
            where = _clause_ref(self.clause_index, self.clause_line)
            return "incorrect clause instance (%s): %s  [%s]" % (
                where, self.subject, _n_questions(self.questions_asked))
        if self.kind == KIND_TRANSITION:
            where = _clause_ref(self.clause_index, self.clause_line)
            return "inadmissible call introduced (%s): %s  [%s]" % (
                where, self.details or self.subject, _n_questions(self.questions_asked))
        if self.kind == KIND_UNCOVERED:
            extra = " missing: %s" % self.details if self.details else ""
            return "uncovered atom for %s: %s.%s  [%s]" % (
                self.predicate, self.subject, extra, _n_questions(self.questions_asked))
        return "%s: %s" % (self.kind, self.subject)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "predicate": self.predicate,
            "clause_index": self.clause_index,
            "clause_line": self.clause_line,
            "subject": self.subject,
            "details": self.details,
            "questions_asked": self.questions_asked,
        }


def _n_questions(n: int) -> str:
    return "1 question" if n == 1 else "%d questions" % n


def _clause_ref(index: Optional[int], line: Optional[int]) -> str:
    if index is None:
        return "clause unknown"
    if line is not None:
        return "clause %d, line %d" % (index, line)
    return "clause %d" % index


class DebugController:
    """Drives one diagnosis session.

    Questions go through a cache; on a miss they are answered by the
    oracle when one is configured, otherwise the session pauses with
    `question` set and resumes when `answer()` is called.  Descent is
    deterministic, so re-running from the root after each answer always
    replays the same prefix from the cache.
    """

    def __init__(
        self,
        program: DisjunctiveProgram,
        goal: Struct,
        mode: str = "wrong",
        oracle=None,
        target: Optional[Struct] = None,
        rule: str = DEFAULT_RULE,
        budget: int = DEFAULT_BUDGET,
    ):
        if mode not in ("wrong", "missing"):
            raise DebugError("mode must be wrong or missing")
        self.program = program
        self.goal = goal
        self.mode = mode
        self.oracle = oracle
        self.target = target
        self.rule = rule
        self.budget = budget
        self.cache: Dict[tuple, str] = {}
        self.transcript: List[dict] = []
        self.question: Optional[Question] = None
        self.diagnosis: Optional[Diagnosis] = None
        self.error: Optional[str] = None
        self.status = "new"
        self._root = None
        self._nodes_by_key: Dict[tuple, object] = {}

    # -- question plumbing --

    def _ask(self, question: Question, node) -> str:
        if question.key in self.cache:
            return self.cache[question.key]
        self._nodes_by_key.setdefault(question.key, node)
        if self.oracle is None:
            raise PendingQuestion(question)
        verdict = self.oracle.ask(question, node)
        if verdict not in VERDICTS:
            raise DebugError("oracle returned %r" % (verdict,))
        self._record(question, verdict)
        return verdict

    def _record(self, question: Question, verdict: str, implied: bool = False) -> None:
        self.cache[question.key] = verdict
        self.transcript.append({
            "kind": question.kind,
            "subject": question.subject,
            "answers": list(question.answers),
            "verdict": verdict,
            "implied": implied,
        })

    def ask_value(self, atom: Struct) -> str:
        return self._ask(atom_question(atom), atom)

    def ask_answers(self, node: CallNode) -> str:
        return self._ask(answer_set_question(node), node)

    # -- lifecycle --

    def start(self) -> "DebugController":
        self._run()
        return self

    def answer(self, verdict: str) -> None:
        verdict = normalize_verdict(verdict)
        if self.question is None:
            raise DebugError("no question is pending")
        self._record(self.question, verdict)
        self.question = None
        self._run()

    def _run(self) -> None:
        try:
            if self._root is None:
                self._build_root()
            if self.mode == "wrong":
                self.diagnosis = self._diagnose_wrong(self._root)
            else:
                self.diagnosis = self._diagnose_missing(self._root, ())
            self.diagnosis.questions_asked = sum(
                1 for entry in self.transcript if not entry.get("implied"))
            self.status = "diagnosed"
            self.question = None
        except PendingQuestion as p:
            self.question = p.question
            self.status = "awaiting_answer"
        except DebugError as e:
            self.error = str(e)
            self.status = "error"

    def _build_root(self) -> None:
        if self.mode == "wrong":
            self._root = build_proof_tree(self.program, self.goal, self.target,
                                          self.rule, self.budget)
        else:
            self._root = build_call_answer_tree(self.program, self.goal, self.rule, self.budget)
            if not self._root.exhaustive:
                raise DebugError(
                    "the search for %s was not exhaustive; missing-answer "
                    "analysis needs a complete answer set" % format_atom(self.goal))

    # -- wrong answers --

    def _diagnose_wrong(self, root: ProofNode) -> Diagnosis:
        verdict = self.ask_value(root.atom)
        if verdict == CORRECT:
            return Diagnosis(KIND_JUDGED_CORRECT, subject=format_atom(root.atom))
        if verdict == INADMISSIBLE:
            return Diagnosis(KIND_GOAL_INADMISSIBLE, subject=format_atom(root.atom))
        return self._descend_wrong(root)

    def _descend_wrong(self, node: ProofNode) -> Diagnosis:
        inadmissible_seen = False
        for item in node.body:
            if isinstance(item, CompLeaf):
                continue  # fixed semantics, never questioned
            verdict = self.ask_value(item.atom)
            if isinstance(item, NegLeaf):
                # the proof claims item.atom is false
                if verdict == CORRECT:
                    return self._bridge_to_missing(item.atom)
                if verdict == INADMISSIBLE:
                    inadmissible_seen = True
            else:
                if verdict == ERRONEOUS:
                    return self._descend_wrong(item)
                if verdict == INADMISSIBLE:
                    inadmissible_seen = True
        pred = "%s/%d" % (node.atom.functor, len(node.atom.args))
        ci, line = self._clause_of(node.clause_index)
        if inadmissible_seen:
            return Diagnosis(KIND_TRANSITION, pred, ci, line, node.instance_text(),
                             details="admissible head, inadmissible body call")
        return Diagnosis(KIND_INCORRECT_CLAUSE, pred, ci, line, node.instance_text())

    def _bridge_to_missing(self, atom: Struct) -> Diagnosis:
        # a negation was proved by finite failure, but the atom is true:
        # that failure is a missing answer for the atom
        tree = build_call_answer_tree(self.program, atom, self.rule, self.budget)
        if not tree.exhaustive:
            raise DebugError("cannot chase the missing answer for %s: search "
                             "not exhaustive" % format_atom(atom))
        q = answer_set_question(tree)
        if q.key not in self.cache:
            # implied by the verdict that brought us here
            self._record(q, ERRONEOUS, implied=True)
        return self._diagnose_missing(tree, ())

    # -- missing answers --

    def _diagnose_missing(self, root: CallNode, path: tuple) -> Diagnosis:
        verdict = self.ask_answers(root)
        if verdict == CORRECT:
            return Diagnosis(KIND_JUDGED_CORRECT, subject=format_atom(root.call))
        if verdict == INADMISSIBLE:
            return Diagnosis(KIND_GOAL_INADMISSIBLE, subject=format_atom(root.call))
        return self._descend_missing(root, path + (root.key,))

    def _descend_missing(self, node: CallNode, path: tuple) -> Diagnosis:
        inadmissible_via: Optional[int] = None
        for child in node.children:
            if child.key in path:
                continue
            if child.negated:
                verdict = self.ask_value(child.call)
                if verdict == ERRONEOUS and child.answers == ():
                    # `not` failed because the atom wrongly succeeded
                    return self._bridge_to_wrong(child.call)
                if verdict == INADMISSIBLE and inadmissible_via is None:
                    inadmissible_via = child.via_clause
            else:
                verdict = self.ask_answers(child)
                if verdict == ERRONEOUS:
                    return self._descend_missing(child, path + (child.key,))
                if verdict == INADMISSIBLE and inadmissible_via is None:
                    inadmissible_via = child.via_clause
        pred = "%s/%d" % (node.call.functor, len(node.call.args))
        if inadmissible_via is not None:
            ci, line = self._clause_of(inadmissible_via)
            return Diagnosis(KIND_TRANSITION, pred, ci, line,
                             subject=format_atom(node.call),
                             details="a body call of the clause is inadmissible")
        details = ""
        instance = node.call
        if self.oracle is not None and hasattr(self.oracle, "find_missing"):
            missing = self.oracle.find_missing(node)
            if missing is not None:
                details = format_atom(missing)
                instance = missing
                # the chosen instance must survive into the transcript,
                # otherwise a replay cannot reproduce the diagnosis
                subject = canon(node.call)
                q = Question("missing_instance", ("missing", subject), subject, (details,))
                if q.key not in self.cache:
                    self._record(q, ERRONEOUS, implied=True)
        ci, line = self._covering_clause(instance)
        return Diagnosis(KIND_UNCOVERED, pred, ci, line,
                         subject=format_atom(node.call), details=details)

    def _covering_clause(self, instance: Struct) -> Tuple[Optional[int], Optional[int]]:
        # when a single clause head matches the uncovered instance, the
        # gap must sit in that clause's body
        defn = self.program.get(instance.functor, len(instance.args))
        if defn is None:
            return None, None
        counter = fresh_counter()
        hits = []
        for dj in defn.disjuncts:
            renamed = rename_disjunct(dj, counter)
            head = Struct(instance.functor, tuple(renamed.head_patterns))
            if unify(head, instance) is not None:
                hits.append(dj.clause_index)
        if len(hits) == 1:
            return self._clause_of(hits[0])
        return None, None

    def _bridge_to_wrong(self, atom: Struct) -> Diagnosis:
        root = build_proof_tree(self.program, atom, None, self.rule, self.budget)
        q = atom_question(root.atom)
        if q.key not in self.cache:
            self._record(q, ERRONEOUS, implied=True)  # the success is wrong
        return self._descend_wrong(root)

    def _clause_of(self, clause_index: Optional[int]) -> Tuple[Optional[int], Optional[int]]:
        if clause_index is None:
            return None, None
        line = None
        src = self.program.source
        if src is not None and 0 <= clause_index < len(src.clauses):
            line = src.clauses[clause_index].line
        return clause_index + 1, line

    # -- introspection for front ends --

    def tree_nodes(self) -> List[dict]:
        """The tree flattened depth-first, with any cached verdicts."""
        if self._root is None:
            return []
        rows: List[dict] = []
        seen: Dict[int, int] = {}

        def visit(item, parent: Optional[int]) -> None:
            ident = id(item)
            if ident in seen:
                rows.append({"id": len(rows), "parent": parent, "ref": seen[ident]})
                return
            row_id = len(rows)
            seen[ident] = row_id
            row: dict = {"id": row_id, "parent": parent}
            if isinstance(item, ProofNode):
                row["kind"] = "proof"
                row["label"] = format_atom(item.atom if item.atom is not None else item.template)
                row["clause"] = item.clause_index + 1
                row["instance"] = item.instance_text()
                row["verdict"] = self.cache.get(atom_question(item.atom).key)
                rows.append(row)
                for child in item.body:
                    if not isinstance(child, CompLeaf):
                        visit(child, row_id)
            elif isinstance(item, NegLeaf):
                row["kind"] = "negation"
                row["label"] = "not " + format_atom(item.atom)
                row["verdict"] = self.cache.get(atom_question(item.atom).key)
                rows.append(row)
            else:
                row["kind"] = "call"
                row["label"] = ("not " if item.negated else "") + format_atom(item.call)
                row["answers"] = list(item.answers_text())
                key = (atom_question(item.call).key if item.negated
                       else answer_set_question(item).key)
                row["verdict"] = self.cache.get(key)
                if item.via_clause is not None:
                    row["clause"] = item.via_clause + 1
                rows.append(row)
                for child in item.children:
                    visit(child, row_id)

        visit(self._root, None)
        return rows


def _finish(ctl: DebugController) -> Diagnosis:
    if ctl.status == "error":
        raise DebugError(ctl.error)
    if ctl.status != "diagnosed":
        raise DebugError("the oracle left a question unanswered: %s" % ctl.question.text)
    return ctl.diagnosis


def diagnose_wrong_answer(
    program: DisjunctiveProgram,
    tree: ProofNode,
    oracle,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
) -> Diagnosis:
    """Search a proof tree for the buggy node; the oracle must answer
    every question (human sessions go through DebugController)."""
    ctl = DebugController(program, tree.atom, "wrong", oracle, None, rule, budget)
    ctl._root = tree
    ctl.start()
    return _finish(ctl)


def diagnose_missing_answer(
    program: DisjunctiveProgram,
    tree: CallNode,
    oracle,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
) -> Diagnosis:
    if not tree.exhaustive:
        raise DebugError("the call tree is not exhaustive; missing-answer "
                         "analysis needs a complete answer set")
    ctl = DebugController(program, tree.call, "missing", oracle, None, rule, budget)
    ctl._root = tree
    ctl.start()
    return _finish(ctl)


def oracle_session(source: str, interpretation: Optional[Interpretation3] = None,
                   transcript: Optional[Iterable[dict]] = None):
    """An oracle handle: 'interpretation' answers from a truth table,
    'transcript' replays a recorded session, 'human' returns None so the
    controller pauses on each question."""
    if source == "human":
        return None
    if source == "interpretation":
        if interpretation is None:
            raise DebugError("an interpretation oracle needs an interpretation")
        return InterpretationOracle(interpretation)
    if source == "transcript":
        if transcript is None:
            raise DebugError("a transcript oracle needs recorded questions")
        return TranscriptOracle(transcript)
    raise DebugError("oracle source must be human, interpretation or transcript")


def normalize_verdict(text: str) -> str:
    t = text.strip().lower()
    aliases = {
        "c": CORRECT, "correct": CORRECT, "yes": CORRECT, "valid": CORRECT,
        "e": ERRONEOUS, "erroneous": ERRONEOUS, "wrong": ERRONEOUS, "no": ERRONEOUS,
        "i": INADMISSIBLE, "inadmissible": INADMISSIBLE,
    }
    if t not in aliases:
        raise DebugError("verdict must be one of correct/erroneous/inadmissible")
    return aliases[t]


# --- transcripts ---------------------------------------------------------------


def transcript_document(controller: DebugController) -> dict:
    doc = {
        "goal": format_atom(controller.goal),
        "mode": controller.mode,
        "rule": controller.rule,
        "budget": controller.budget,
        "target": format_atom(controller.target) if controller.target is not None else None,
        "questions": controller.transcript,
        "diagnosis": controller.diagnosis.as_dict() if controller.diagnosis else None,
    }
    return doc


def save_transcript(controller: DebugController, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(transcript_document(controller), fh, indent=2, sort_keys=True)
        fh.write("\n")


def replay_transcript(program: DisjunctiveProgram, doc: dict) -> Diagnosis:
    """Re-run a recorded session; raises if the question sequence or the
    final diagnosis deviates from the document."""
    goal = _goal_atom(doc["goal"])
    target = _goal_atom(doc["target"]) if doc.get("target") else None
    oracle = TranscriptOracle(doc["questions"])
    ctl = DebugController(
        program, goal, doc.get("mode", "wrong"), oracle, target,
        doc.get("rule", DEFAULT_RULE), doc.get("budget", DEFAULT_BUDGET),
    ).start()
    if ctl.status == "error":
        raise DebugError("replay failed: %s" % ctl.error)
    if ctl.status != "diagnosed":
        raise DebugError("replay ended in state %s" % ctl.status)
    if not oracle.exhausted:
        raise DebugError("replay used only %d of %d recorded answers"
                         % (oracle.position, len(oracle.queue)))
    if ctl.transcript != list(doc["questions"]):
        raise DebugError("replay asked a different question sequence")
    recorded = doc.get("diagnosis")
    if recorded is not None and ctl.diagnosis.as_dict() != recorded:
        raise DebugError("replay reached a different diagnosis")
    return ctl.diagnosis


def load_transcript(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _goal_atom(text: str) -> Struct:
    from .syntax import parse_goal

    lits = parse_goal(text)
    if len(lits) != 1 or lits[0].negated:
        raise DebugError("a debug goal must be a single positive atom")
    return lits[0].atom
