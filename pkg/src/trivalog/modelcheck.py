"""Model checks over bounded universes.

A clause instance is acceptable unless it rests a true head on a
non-true body or a false head on a non-false body.  For a program read
clause-wise (definite programs only) the check forbids false heads with
true or inadmissible bodies.  For the completion the definition is an
equivalence, so both directions are enforced; the strong check requires
the head and body values to coincide exactly.

Every verdict is relative to the finite universe of the interpretation,
which each report states explicitly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .interpretations import (
    Interpretation3,
    InterpretationError,
    _apply_bindings,
    _conj_value,
    body_value,
    body_value_with_witness,
    disjunct_value,
    leq_info,
    same_values,
)
from .consequence import t3, t3_minus, t3_plus
from .normalform import CompletedProgram, Definition, DisjunctiveProgram
from .syntax import format_literal
from .kernel_terms import Struct, format_term, match_ground, variables_of
from .truth import TV, F, I, T, arrow3

STRONG_MISMATCH = "strong mismatch"


@dataclass(frozen=True)
class Violation:
    kind: str                      # "F<-T", "F<-I", "T<-F", "T<-I" or "strong mismatch"
    atom: Struct
    head_value: TV
    body_value: TV
    disjunct_index: Optional[int]  # witnessing disjunct, None when every disjunct is false
    clause_index: Optional[int]    # source clause of that disjunct

    def describe(self) -> str:
        where = (
            "all disjuncts false"
            if self.disjunct_index is None
            else "witness disjunct %d (source clause %d)" % (self.disjunct_index + 1, (self.clause_index or 0) + 1)
        )
        return "%s at %s: head %s, body %s; %s" % (
            self.kind,
            format_term(self.atom),
            self.head_value,
            self.body_value,
            where,
        )


@dataclass
class CheckResult:
    ok: bool
    violations: list
    atoms_checked: int
    bounded_note: str
    truncated: bool = False

    def describe(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        lines = [
            "%s (%d atoms checked within %s)" % (head, self.atoms_checked, self.bounded_note)
        ]
        for v in self.violations:
            lines.append("  " + v.describe())
        if self.truncated:
            lines.append("  ... more violations not shown")
        return "\n".join(lines)


def _scan(
    program: DisjunctiveProgram,
    m: Interpretation3,
    judge: Callable[[TV, TV], Optional[str]],
    cap: int,
) -> CheckResult:
    violations = []
    truncated = False
    checked = 0
    for defn in program.definitions:
        if not m.declares(defn.name, defn.arity):
            raise InterpretationError("interpretation does not cover %s/%d" % (defn.name, defn.arity))
        for atom in m.universe.atoms(defn.name, defn.arity):
            checked += 1
            h = m.truth_of(atom)
            b = body_value(m, defn, atom.args)
            kind = judge(h, b)
            if kind is None:
                continue
            if len(violations) >= cap:
                truncated = True
                continue
            _, carrier = body_value_with_witness(m, defn, atom.args)
            clause = defn.disjuncts[carrier].clause_index if carrier is not None else None
            violations.append(Violation(kind, atom, h, b, carrier, clause))
    return CheckResult(not violations and not truncated, violations, checked, m.universe.describe(), truncated)


def check_model_definite(program: DisjunctiveProgram, m: Interpretation3, cap: int = 20) -> CheckResult:
    """Clause-wise model check; only false heads can be violated."""
    if not program.is_definite():
        raise InterpretationError("the clause-wise model check is only defined for definite programs")

    def judge(h: TV, b: TV) -> Optional[str]:
        if h is F and b is not F:
            return "F<-%s" % b
        return None

    return _scan(program, m, judge, cap)


def check_model_completion(program, m: Interpretation3, cap: int = 20) -> CheckResult:
    """Completion model check: no true head on a non-true body and no
    false head on a non-false body."""
    program = _unwrap(program)

    def judge(h: TV, b: TV) -> Optional[str]:
        if arrow3(h, b) is F:
            return "%s<-%s" % (h, b)
        return None

    return _scan(program, m, judge, cap)


def check_strong_model(program, m: Interpretation3, cap: int = 20) -> CheckResult:
    """Strong model check: head and body must take the same value."""
    program = _unwrap(program)

    def judge(h: TV, b: TV) -> Optional[str]:
        if h is not b:
            return STRONG_MISMATCH
        return None

    return _scan(program, m, judge, cap)


def _unwrap(program) -> DisjunctiveProgram:
    if isinstance(program, CompletedProgram):
        return program.program
    return program


# --- synopsis: the programmer-facing evidence view ---------------------------


@dataclass
class SynopsisReport:
    ok: bool
    lines: list
    atoms_checked: int
    bounded_note: str
    crosschecked: bool

    def describe(self) -> str:
        head = "PASS" if self.ok else "FAIL"
        out = ["synopsis %s (%d atoms within %s)" % (head, self.atoms_checked, self.bounded_note)]
        out.extend("  " + line for line in self.lines)
        return "\n".join(out)


def _witness_assignment(m: Interpretation3, defn: Definition, atom: Struct, wanted: TV):
    """Find a disjunct and local assignment giving the wanted value."""
    for idx, dj in enumerate(defn.disjuncts):
        bindings: dict = {}
        okmatch = True
        for pattern, arg in zip(dj.head_patterns, atom.args):
            if not match_ground(pattern, arg, bindings):
                okmatch = False
                break
        if not okmatch:
            continue
        free = []
        for lit in dj.rest:
            for v in variables_of(lit.atom):
                if v not in bindings and v not in free:
                    free.append(v)
        if not free:
            if _conj_value(m, dj.rest, bindings) is wanted:
                return idx, dict(bindings)
            continue
        for assignment in itertools.product(m.universe.terms(), repeat=len(free)):
            trial = dict(bindings)
            for v, t in zip(free, assignment):
                trial[v] = t
            if _conj_value(m, dj.rest, trial) is wanted:
                return idx, trial
    return None


def verify_synopsis(program, m: Interpretation3, evidence_cap: int = 12) -> SynopsisReport:
    """Check the way a programmer would state it: every true atom has a
    matching clause instance whose body is true, and every matching
    instance of a false atom has a false body.

    The verdict is provably the same as the completion check's; both are
    computed and compared as a guard against drift.
    """
    program = _unwrap(program)
    lines = []
    ok = True
    checked = 0
    for defn in program.definitions:
        for atom in m.universe.atoms(defn.name, defn.arity):
            checked += 1
            h = m.truth_of(atom)
            b = body_value(m, defn, atom.args)
            if h is T:
                if b is T:
                    if len(lines) < evidence_cap:
                        idx, assignment = _witness_assignment(m, defn, atom, T)
                        shown = ", ".join(
                            "%s=%s" % (v.name, format_term(t)) for v, t in sorted(assignment.items(), key=lambda p: p[0].name)
                        )
                        lines.append(
                            "%s: covered by clause %d {%s}" % (format_term(atom), defn.disjuncts[idx].clause_index + 1, shown)
                        )
                else:
                    ok = False
                    lines.append("%s: true but no clause instance proves it (body %s)" % (format_term(atom), b))
            elif h is F:
                if b is not F:
                    ok = False
                    lines.append("%s: false but a clause instance has body %s" % (format_term(atom), b))
    completion_verdict = check_model_completion(program, m, cap=1).ok
    if completion_verdict != ok:
        raise AssertionError("synopsis and completion check disagree; evaluation bug")
    return SynopsisReport(ok, lines, checked, m.universe.describe(), True)


# --- cross-checking the operator characterizations ---------------------------


@dataclass
class CrosscheckReport:
    is_completion_model: bool
    route_direct: bool
    route_fixpoints: bool
    route_information: bool
    definite_routes: Optional[dict] = None

    def describe(self) -> str:
        lines = [
            "completion model: %s" % ("yes" if self.is_completion_model else "no"),
            "  direct check:          %s" % self.route_direct,
            "  t3+/t3- fixpoint:      %s" % self.route_fixpoints,
            "  information ordering:  %s" % self.route_information,
        ]
        if self.definite_routes is not None:
            lines.append("clause-wise model routes (definite program): %s" % self.definite_routes)
        return "\n".join(lines)


def crosscheck_fixpoint_props(program: DisjunctiveProgram, m: Interpretation3) -> CrosscheckReport:
    """Compute the model property three independent ways and insist they
    coincide: the direct completion check, being a common fixpoint of
    t3_plus and t3_minus, and sitting below t3(m) in the information
    ordering.  For definite programs the clause-wise model verdict is
    also compared with the true-set test of t3_plus and the false-set
    growth of t3.
    """
    direct = check_model_completion(program, m, cap=1).ok
    plus = t3_plus(program, m)
    minus = t3_minus(program, m)
    fixpoints = same_values(plus, m) and same_values(minus, m)
    step = t3(program, m)
    info = _leq_info_partial(m, step)
    if not (direct == fixpoints == info):
        raise AssertionError(
            "model characterizations disagree: direct=%s fixpoints=%s information=%s"
            % (direct, fixpoints, info)
        )
    report = CrosscheckReport(direct, direct, fixpoints, info)
    if program.is_definite():
        model_direct = check_model_definite(program, m, cap=1).ok
        tplus_subset = all(
            m.truth_of(a) is T
            for a in plus.all_atoms()
            if plus.truth_of(a) is T
        )
        fset_grows = all(
            step.truth_of(a) is F
            for a in step.all_atoms()
            if m.truth_of(a) is F
        )
        if not (model_direct == tplus_subset == fset_grows):
            raise AssertionError(
                "definite model characterizations disagree: direct=%s t3plus-true-subset=%s t3-false-growth=%s"
                % (model_direct, tplus_subset, fset_grows)
            )
        report.definite_routes = {
            "direct": model_direct,
            "t3plus_true_subset": tplus_subset,
            "t3_false_growth": fset_grows,
        }
    return report


def _leq_info_partial(m: Interpretation3, step: Interpretation3) -> bool:
    """m below step in the information ordering, over the program's atoms."""
    for a in step.all_atoms():
        v = m.truth_of(a)
        if v is not I and step.truth_of(a) is not v:
            return False
    return True
