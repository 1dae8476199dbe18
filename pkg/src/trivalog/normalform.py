"""Disjunctive normal form and Clark completion of clausal programs.

Every predicate is rewritten to a single definition

    p(X0,...,Xn-1) <- D1 \\/ ... \\/ Dk

with one disjunct per source clause.  A disjunct starts with equality
bindings X_i = T_i for every head argument position and keeps the clause
body after them; all other variables are local to the disjunct.  The
completion closes each disjunct existentially over its locals and reads
the definition as an equivalence.  Predicates that are called but never
defined get the empty disjunction (a body that is simply false), with a
warning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import (
    BUILTIN_EQ,
    COMPARISONS,
    ClausalProgram,
    Literal,
    format_literal,
    format_term,
)
from .kernel_terms import Struct, Term, Var, variables_of


@dataclass(frozen=True)
class Disjunct:
    head_patterns: tuple        # one term per head argument position
    rest: tuple                 # the remaining body literals, in clause order
    clause_index: int           # position of the source clause in the program
    locals: tuple = ()          # variables local to this disjunct

    def all_literals(self, head_vars: tuple) -> list:
        eqs = [
            Literal(Struct(BUILTIN_EQ, (v, t))) for v, t in zip(head_vars, self.head_patterns)
        ]
        return eqs + list(self.rest)


@dataclass(frozen=True)
class Definition:
    name: str
    arity: int
    head_vars: tuple
    disjuncts: tuple
    defined: bool = True

    @property
    def pred(self) -> tuple:
        return (self.name, self.arity)


@dataclass(frozen=True)
class DisjunctiveProgram:
    definitions: tuple = ()
    warnings: tuple = ()
    source: Optional[ClausalProgram] = None
    _by_pred: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_pred", {d.pred: d for d in self.definitions})

    def get(self, name: str, arity: int) -> Optional[Definition]:
        return self._by_pred.get((name, arity))

    def predicates(self) -> list:
        return [d.pred for d in self.definitions]

    def is_definite(self) -> bool:
        return not any(
            lit.negated for d in self.definitions for dj in d.disjuncts for lit in dj.rest
        )


@dataclass(frozen=True)
class CompletedProgram:
    """Same definitions, read as equivalences with explicit quantifiers."""

    program: DisjunctiveProgram

    @property
    def definitions(self) -> tuple:
        return self.program.definitions

    def get(self, name: str, arity: int) -> Optional[Definition]:
        return self.program.get(name, arity)


def _user_pred(lit: Literal) -> Optional[tuple]:
    f = lit.atom.functor
    if f == BUILTIN_EQ or f in COMPARISONS:
        return None
    return lit.pred


def head_var_names(arity: int) -> tuple:
    return tuple(Var("X%d" % i) for i in range(arity))


def to_disjunctive(program: ClausalProgram) -> DisjunctiveProgram:
    """Group clauses into one disjunctive definition per predicate."""
    order: list = []
    grouped: dict = {}
    for idx, clause in enumerate(program.clauses):
        key = (clause.head.functor, len(clause.head.args))
        if key not in grouped:
            grouped[key] = []
            order.append(key)
        grouped[key].append((idx, clause))

    called: list = []
    for clause in program.clauses:
        for lit in clause.body:
            key = _user_pred(lit)
            if key and key not in grouped and key not in called:
                called.append(key)

    warnings = list(program.warnings)
    defs = []
    for key in order:
        name, arity = key
        head_vars = head_var_names(arity)
        reserved = {v.name for v in head_vars}
        disjuncts = []
        for idx, clause in grouped[key]:
            renaming = _avoid(clause, reserved)
            patterns = tuple(renaming.get(a, a) if isinstance(a, Var) else _rename_term(a, renaming) for a in clause.head.args)
            rest = tuple(
                Literal(_rename_term(l.atom, renaming), l.negated) for l in clause.body
            )
            local_vars = _locals_of(patterns, rest, head_vars)
            disjuncts.append(Disjunct(patterns, rest, idx, local_vars))
        defs.append(Definition(name, arity, head_vars, tuple(disjuncts)))

    for key in called:
        name, arity = key
        warnings.append("predicate %s/%d is called but has no clauses; it gets the empty disjunction" % key)
        defs.append(Definition(name, arity, head_var_names(arity), (), defined=False))

    return DisjunctiveProgram(tuple(defs), tuple(warnings), program)


def _avoid(clause, reserved: set) -> dict:
    """Rename clause variables that collide with the fresh head variables."""
    renaming = {}
    seen = set()
    for t in (clause.head,) + tuple(l.atom for l in clause.body):
        for v in variables_of(t):
            seen.add(v)
    for v in seen:
        if v.name in reserved:
            fresh = v.name + "_"
            while fresh in reserved or any(w.name == fresh for w in seen):
                fresh += "_"
            renaming[v] = Var(fresh)
    return renaming


def _rename_term(t: Term, renaming: dict) -> Term:
    if not renaming:
        return t
    if isinstance(t, Var):
        return renaming.get(t, t)
    if isinstance(t, Struct) and t.args:
        return Struct(t.functor, tuple(_rename_term(a, renaming) for a in t.args))
    return t


def _locals_of(patterns: tuple, rest: tuple, head_vars: tuple) -> tuple:
    head_set = set(head_vars)
    out = []
    for t in patterns + tuple(l.atom for l in rest):
        for v in variables_of(t):
            if v not in head_set and v not in out:
                out.append(v)
    return tuple(out)


def completion(program: DisjunctiveProgram) -> CompletedProgram:
    """Clark completion; the disjunct structure is preserved as-is."""
    return CompletedProgram(program)


def rename_disjunct(disjunct: Disjunct, counter) -> Disjunct:
    """Rename the disjunct's local variables apart using a monotone counter."""
    if not disjunct.locals:
        return disjunct
    renaming = {v: Var("_G%d" % next(counter)) for v in disjunct.locals}
    patterns = tuple(_rename_term(t, renaming) for t in disjunct.head_patterns)
    rest = tuple(Literal(_rename_term(l.atom, renaming), l.negated) for l in disjunct.rest)
    return Disjunct(patterns, rest, disjunct.clause_index, tuple(renaming[v] for v in disjunct.locals))


def head_instance(defn: Definition, args: tuple, counter=None) -> list:
    """The definition body with head variables replaced by args.

    Returns one (equality_pairs, rest_literals, disjunct) triple per
    disjunct, where equality_pairs binds each arg to the corresponding
    head pattern.  With a counter, locals are renamed apart first; the
    ungrounded-argument case then never captures variables.
    """
    out = []
    for dj in defn.disjuncts:
        renamed = rename_disjunct(dj, counter) if counter is not None else dj
        pairs = tuple(zip(args, renamed.head_patterns))
        out.append((pairs, renamed.rest, dj))
    return out


# --- printing --------------------------------------------------------------


def format_disjunct(defn: Definition, dj: Disjunct) -> str:
    eqs = [
        "%s = %s" % (v.name, format_term(t)) for v, t in zip(defn.head_vars, dj.head_patterns)
    ]
    parts = eqs + [format_literal(l) for l in dj.rest]
    body = ", ".join(parts) if parts else "true"
    if dj.locals:
        return "exists %s: %s" % (",".join(v.name for v in dj.locals), body)
    return body


def format_definition(defn: Definition, arrow: str = "<-") -> str:
    head = defn.name if defn.arity == 0 else "%s(%s)" % (defn.name, ",".join(v.name for v in defn.head_vars))
    if not defn.disjuncts:
        return "%s %s false" % (head, arrow)
    lines = [head + " " + arrow]
    for i, dj in enumerate(defn.disjuncts):
        sep = "      " if i == 0 else "   \\/ "
        lines.append(sep + format_disjunct(defn, dj))
    return "\n".join(lines)


def format_disjunctive(program: DisjunctiveProgram) -> str:
    return "\n".join(format_definition(d) for d in program.definitions) + "\n"


def format_completion(completed: CompletedProgram) -> str:
    return "\n".join(format_definition(d, arrow="<->") for d in completed.definitions) + "\n"
