"""Resolution with negation as failure, floundering-aware.

Goals are conjunctions of literals plus a set of equality constraints.
Expanding a positive atom splices in the body of each disjunct of its
definition, pushing the head equalities into the constraint set, one
child per disjunct.  A negation may only be selected once its atom is
grounded by the constraints; it is resolved by a nested search:

  * the nested search finds a success: the child is a failed node;
  * it fails finitely: the child drops the negation;
  * it is finite but flounders: the child is identical to its parent,
    so a later selection can try a different literal;
  * it is inconclusive within budget: the node becomes an unresolved
    leaf and the whole outcome is flagged budget-exhausted, which is
    never reported as failure.

A node flounders when only non-grounded negations (and comparisons not
yet evaluable) remain.  The identical-child rule is what lets a fair
selection run past a floundering literal; a strict leftmost selection
retries it forever and burns its budget, observably.

Searches are depth-first and deterministic given program, goal, rule
and budget.  Nested negative searches get half of the remaining budget.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .interpretations import Interpretation3, compare
from .normalform import Definition, DisjunctiveProgram, head_instance
from .syntax import BUILTIN_EQ, Literal, format_literal
from .kernel_terms import (
    Constraints,
    Num,
    Struct,
    Term,
    Var,
    format_term,
    fresh_counter,
    is_ground,
    variables_of,
)
from .truth import F, I, T, conj3, not3

RULES = ("leftmost_delay_nonground_negation", "fair_round_robin", "strict_leftmost")
DEFAULT_RULE = "leftmost_delay_nonground_negation"
DEFAULT_BUDGET = 10_000

FAILED = "failed"
SUCCESSFUL = "successful"
FLOUNDERED = "floundered"
OPEN = "open"


@dataclass(frozen=True)
class Node:
    literals: tuple
    constraints: Constraints
    depth: int
    deferred: frozenset = frozenset()
    forced_failed: bool = False

    def describe(self) -> str:
        if self.forced_failed or not self.constraints.satisfiable:
            return "fail"
        parts = [format_literal(l) for l in self.literals]
        return " , ".join(parts) if parts else "true"


@dataclass(frozen=True)
class Answer:
    """A successful leaf projected onto the goal variables."""

    bindings: tuple            # ((Var, Term), ...) in goal-variable order

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def describe(self) -> str:
        if not self.bindings:
            return "yes"
        return ", ".join("%s = %s" % (v.name, format_term(t)) for v, t in self.bindings)


@dataclass
class Outcome:
    answers: List[Answer]
    exhaustive: bool
    floundered: bool
    budget_exhausted: bool
    expansions: int
    goal_vars: tuple
    answer_constraints: list = field(default_factory=list)   # full leaf constraint sets

    @property
    def finitely_failed(self) -> bool:
        return self.exhaustive and not self.answers and not self.floundered

    def describe(self) -> str:
        lines = []
        for a in self.answers:
            lines.append("answer: " + a.describe())
        status = []
        if self.finitely_failed:
            status.append("finitely failed")
        status.append("exhaustive" if self.exhaustive else "not exhaustive")
        if self.floundered:
            status.append("floundered")
        if self.budget_exhausted:
            status.append("budget exhausted")
        lines.append("(%s; %d expansions)" % (", ".join(status), self.expansions))
        return "\n".join(lines)


def _selectable(lit: Literal, cons: Constraints) -> bool:
    if lit.is_comparison() and not lit.negated:
        a, b = (cons.resolve(x) for x in lit.atom.args)
        return isinstance(a, Num) and isinstance(b, Num)
    if lit.negated:
        if lit.is_comparison():
            a, b = (cons.resolve(x) for x in lit.atom.args)
            return isinstance(a, Num) and isinstance(b, Num)
        return cons.grounds(lit.atom)
    return True


def make_node(literals: Iterable[Literal], cons: Constraints, depth: int, deferred: frozenset = frozenset()) -> Node:
    """Build a node, absorbing positive equality literals into the
    constraint set (where failure detection lives)."""
    kept = []
    pairs = []
    for lit in literals:
        if lit.is_equality():
            pairs.append((lit.atom.args[0], lit.atom.args[1]))
        else:
            kept.append(lit)
    if pairs:
        cons = cons.add(pairs)
    return Node(tuple(kept), cons, depth, deferred)


def node_status(node: Node) -> str:
    if node.forced_failed or not node.constraints.satisfiable:
        return FAILED
    if not node.literals:
        return SUCCESSFUL
    if not any(_selectable(l, node.constraints) for l in node.literals):
        return FLOUNDERED
    return OPEN


class Engine:
    def __init__(
        self,
        program: DisjunctiveProgram,
        rule: str = DEFAULT_RULE,
        budget: int = DEFAULT_BUDGET,
        trace: Optional[Callable[[str], None]] = None,
    ):
        if rule not in RULES:
            raise ValueError("unknown selection rule %r" % rule)
        self.program = program
        self.rule = rule
        self.budget = budget
        self.trace = trace
        self.counter = fresh_counter()
        self.used = 0

    # selection -------------------------------------------------------------

    def _pick(self, node: Node) -> Optional[int]:
        sel = [i for i, l in enumerate(node.literals) if _selectable(l, node.constraints)]
        if not sel:
            return None
        if self.rule == "strict_leftmost":
            return sel[0]
        if self.rule == "fair_round_robin":
            return sel[node.depth % len(sel)]
        avail = [i for i in sel if i not in node.deferred]
        return avail[0] if avail else None

    # expansion -------------------------------------------------------------

    def _expand_atom(self, node: Node, idx: int) -> List[Node]:
        lit = node.literals[idx]
        name, arity = lit.pred
        defn = self.program.get(name, arity)
        children: List[Node] = []
        if defn is None or not defn.disjuncts:
            return children  # empty disjunction: the branch fails finitely
        for pairs, rest, _dj in head_instance(defn, lit.atom.args, self.counter):
            lits = node.literals[:idx] + rest + node.literals[idx + 1:]
            cons = node.constraints.add(pairs)
            children.append(make_node(lits, cons, node.depth + 1))
        return children

    def _expand_comparison(self, node: Node, idx: int) -> List[Node]:
        lit = node.literals[idx]
        a, b = (node.constraints.resolve(x) for x in lit.atom.args)
        holds = compare(lit.atom.functor, a, b) is T
        if lit.negated:
            holds = not holds
        rest = node.literals[:idx] + node.literals[idx + 1:]
        if holds:
            return [make_node(rest, node.constraints, node.depth + 1)]
        return [Node(rest, node.constraints, node.depth + 1, forced_failed=True)]

    def _expand_negation(self, node: Node, idx: int, cap: int) -> Tuple[List[Node], bool]:
        """Resolve a grounded negation by a nested positive search.

        Returns (children, inconclusive).  The nested search inherits the
        parent's constraints and gets half of the remaining budget.
        """
        lit = node.literals[idx]
        ground_atom = node.constraints.resolve(lit.atom)
        allot = max(1, (cap - self.used) // 2)
        sub_cap = min(cap, self.used + allot)
        sub_root = make_node((Literal(ground_atom),), node.constraints, node.depth + 1)
        sub = self._search(sub_root, mode="first", cap=sub_cap, goal_vars=())
        rest = node.literals[:idx] + node.literals[idx + 1:]
        if sub.answers:
            return [Node(rest, node.constraints, node.depth + 1, forced_failed=True)], False
        if sub.finitely_failed:
            return [make_node(rest, node.constraints, node.depth + 1)], False
        if sub.exhaustive and sub.floundered:
            # the nested tree is finite but floundered: the child is this
            # very node again; remember the retried literal so a skipping
            # rule can move on
            child = Node(
                node.literals,
                node.constraints,
                node.depth + 1,
                node.deferred | {idx},
            )
            return [child], False
        return [], True  # inconclusive within budget

    # search ----------------------------------------------------------------

    def _search(self, root: Node, mode: str, cap: int, goal_vars: tuple) -> Outcome:
        answers: List[Answer] = []
        answer_cons: list = []
        floundered = False
        budget_hit = False
        stack = [root]
        while stack:
            node = stack.pop()
            status = node_status(node)
            if status is FAILED:
                continue
            if status is SUCCESSFUL:
                sol = node.constraints.solution
                answers.append(Answer(tuple((v, sol.apply(v)) for v in goal_vars)))
                answer_cons.append(node.constraints)
                if mode == "first":
                    break
                continue
            if status is FLOUNDERED:
                floundered = True
                if self.trace:
                    self.trace("%d, ., %s, floundered" % (node.depth, node.describe()))
                continue
            idx = self._pick(node)
            if idx is None:
                # every selectable literal has already floundered under a
                # skipping rule; give the branch up as floundered
                floundered = True
                continue
            if self.used >= cap:
                budget_hit = True
                continue
            self.used += 1
            lit = node.literals[idx]
            inconclusive = False
            if lit.is_comparison():
                children = self._expand_comparison(node, idx)
                action = "holds" if not children[0].forced_failed else "fails"
            elif lit.negated:
                children, inconclusive = self._expand_negation(node, idx, cap)
                if inconclusive:
                    action = "inconclusive"
                elif children[0].forced_failed:
                    action = "negation failed"
                elif children[0].literals == node.literals:
                    action = "identical child"
                else:
                    action = "negation succeeded"
            else:
                children = self._expand_atom(node, idx)
                action = "%d children" % len(children)
            if self.trace:
                polarity = "-" if lit.negated else "+"
                self.trace("%d, %s, %s, %s" % (node.depth, polarity, format_literal(lit), action))
            if inconclusive:
                budget_hit = True
                continue
            stack.extend(reversed(children))
        exhaustive = not stack and not budget_hit
        return Outcome(answers, exhaustive, floundered, budget_hit, self.used, goal_vars, answer_cons)


def solve(
    program: DisjunctiveProgram,
    goal: Iterable[Literal],
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
    mode: str = "all",
    trace: Optional[Callable[[str], None]] = None,
) -> Outcome:
    """Search the tree of the goal; deterministic for fixed inputs.

    mode "all" keeps searching after a success (needed to observe finite
    failure and exhaustiveness), "first" stops at the first answer.
    """
    goal = tuple(goal)
    engine = Engine(program, rule, budget, trace)
    goal_vars = []
    for lit in goal:
        for v in variables_of(lit.atom):
            if v not in goal_vars:
                goal_vars.append(v)
    root = make_node(goal, Constraints.empty(), 0)
    return engine._search(root, mode=mode, cap=budget, goal_vars=tuple(goal_vars))


def expand(
    program: DisjunctiveProgram,
    node: Node,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
) -> List[Node]:
    """One expansion step of an open node under the selection rule.

    Negation is resolved through a nested search on a fresh engine, so
    a single call can cost up to the whole budget.
    """
    if node_status(node) is not OPEN:
        raise ValueError("only open nodes can be expanded")
    engine = Engine(program, rule, budget)
    idx = engine._pick(node)
    if idx is None:
        raise ValueError("the selection rule declined every literal")
    lit = node.literals[idx]
    assert not lit.negated or node.constraints.grounds(lit.atom) or lit.is_comparison()
    if lit.is_comparison():
        return engine._expand_comparison(node, idx)
    if lit.negated:
        children, inconclusive = engine._expand_negation(node, idx, budget)
        if inconclusive:
            raise ValueError("negative subtree inconclusive within budget %d" % budget)
        return children
    return engine._expand_atom(node, idx)


# --- success and finite failure sets -----------------------------------------


@dataclass
class EnumerationResult:
    success: list
    finite_failure: list
    unresolved: list
    outcomes: Dict[Struct, Outcome]


def enumerate_sets(
    program: DisjunctiveProgram,
    universe,
    predicates: Optional[Iterable[tuple]] = None,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
) -> EnumerationResult:
    """Classify every ground atom of the predicates over the universe by
    running its goal: success set, finite failure set, and the
    unresolved remainder (budget or floundering)."""
    preds = list(predicates) if predicates is not None else [d.pred for d in program.definitions]
    success: list = []
    failure: list = []
    unresolved: list = []
    outcomes: Dict[Struct, Outcome] = {}
    for name, arity in preds:
        for atom in universe.atoms(name, arity):
            out = solve(program, [Literal(atom)], rule=rule, budget=budget, mode="all")
            outcomes[atom] = out
            if out.answers:
                success.append(atom)
            elif out.finitely_failed:
                failure.append(atom)
            else:
                unresolved.append(atom)
    return EnumerationResult(success, failure, unresolved, outcomes)


def success_set(
    program: DisjunctiveProgram,
    universe,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
    predicates: Optional[Iterable[tuple]] = None,
) -> Tuple[set, Dict[Struct, Outcome]]:
    res = enumerate_sets(program, universe, predicates, rule, budget)
    return set(res.success), res.outcomes


def finite_failure_set(
    program: DisjunctiveProgram,
    universe,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
    predicates: Optional[Iterable[tuple]] = None,
) -> Tuple[set, Dict[Struct, Outcome]]:
    res = enumerate_sets(program, universe, predicates, rule, budget)
    return set(res.finite_failure), res.outcomes


# --- the three operational guarantees ----------------------------------------


@dataclass
class TheoremReport:
    goal: tuple
    outcome: Outcome
    sound_modulo_inadmissibility: Optional[bool]
    failure_sound: Optional[bool]
    complete_for_true: Optional[bool]
    note: str = ""

    @property
    def ok(self) -> bool:
        return all(v is not False for v in (
            self.sound_modulo_inadmissibility,
            self.failure_sound,
            self.complete_for_true,
        ))


def _instance_value(m: Interpretation3, goal: tuple, assignment: dict):
    values = []
    for lit in goal:
        atom = lit.atom
        if assignment:
            from .interpretations import _apply_bindings

            atom = _apply_bindings(atom, assignment)
        v = m.truth_of(atom)
        values.append(not3(v) if lit.negated else v)
    return conj3(values)


def check_operational_theorems(
    program: DisjunctiveProgram,
    m: Interpretation3,
    goals: Iterable,
    rule: str = DEFAULT_RULE,
    budget: int = DEFAULT_BUDGET,
    assume_model: bool = False,
) -> list:
    """Verify the three operational guarantees against an interpretation.

    For every in-universe ground instance of each goal: an instance
    consistent with a computed answer is never false (soundness modulo
    inadmissibility); if the goal failed finitely no instance is true;
    and for an exhaustive, unfloundered search every true instance is
    consistent with some answer.  The interpretation must be a model of
    the completion for the guarantees to be meaningful; that is checked
    once unless assume_model is set.
    """
    from .modelcheck import check_model_completion

    if not assume_model:
        res = check_model_completion(program, m, cap=1)
        if not res.ok:
            raise ValueError(
                "interpretation is not a model of the completion, so the "
                "guarantees do not apply; first violation: %s"
                % res.violations[0].describe())

    reports = []
    for goal in goals:
        goal = tuple(goal)
        out = solve(program, goal, rule=rule, budget=budget, mode="all")
        gvars = list(out.goal_vars)
        sound = True
        failure_sound: Optional[bool] = None if not out.finitely_failed else True
        complete: Optional[bool] = None
        note = ""
        if out.exhaustive and not out.floundered:
            complete = True
        elif out.floundered:
            note = "floundered: completeness not claimed"

        if gvars:
            assignments = itertools.product(m.universe.terms(), repeat=len(gvars))
        else:
            assignments = [()]
        for combo in assignments:
            assignment = dict(zip(gvars, combo))
            value = _instance_value(m, goal, assignment)
            consistent = False
            for cons in out.answer_constraints:
                trial = cons.add([(v, assignment[v]) for v in gvars]) if gvars else cons
                if trial.satisfiable:
                    consistent = True
                    break
            if consistent and value is F:
                sound = False
            if out.finitely_failed and value is T:
                failure_sound = False
            if complete is not None and value is T and not consistent:
                complete = False
        reports.append(TheoremReport(goal, out, sound, failure_sound, complete, note))
    return reports
