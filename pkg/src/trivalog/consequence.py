"""Immediate consequence operators and the Fitting-style fixpoint.

t3 gives every head atom the value of its completed body.  t3_plus and
t3_minus keep the inadmissible set fixed and sharpen only the true set:
the plus variant keeps an admissible atom true as long as some body
instance is true or inadmissible, the minus variant only when some body
instance is outright true.  Iterating t3 from the everywhere
inadmissible interpretation climbs the information ordering to its
least fixpoint; the true atoms of that fixpoint are the success set and
the false atoms the finite failure set, within the bounded universe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

from .interpretations import (
    Interpretation3,
    InterpretationError,
    Table,
    body_value,
    leq_info,
)
from .normalform import DisjunctiveProgram
from .kernel_terms import Struct
from .truth import TV, F, I, T

OPERATOR_KINDS = ("t3", "t3plus", "t3minus", "classical_tp")


def _program_predicates(program: DisjunctiveProgram, m: Interpretation3) -> list:
    for defn in program.definitions:
        if not m.declares(defn.name, defn.arity):
            raise InterpretationError(
                "interpretation does not cover %s/%d" % (defn.name, defn.arity)
            )
    return list(program.definitions)


def t3(program: DisjunctiveProgram, m: Interpretation3) -> Interpretation3:
    """One step: each head atom takes its body's value in m."""
    tables: Dict = {}
    for defn in _program_predicates(program, m):
        atoms = {}
        for atom in m.universe.atoms(defn.name, defn.arity):
            atoms[atom] = body_value(m, defn, atom.args)
        tables[defn.pred] = Table(I, atoms)
    return Interpretation3(m.universe, tables)


def t3_plus(program: DisjunctiveProgram, m: Interpretation3) -> Interpretation3:
    """Keep the I-set; an admissible atom stays true unless every body
    instance is false."""
    tables: Dict = {}
    for defn in _program_predicates(program, m):
        atoms = {}
        for atom in m.universe.atoms(defn.name, defn.arity):
            if m.truth_of(atom) is I:
                atoms[atom] = I
            else:
                atoms[atom] = T if body_value(m, defn, atom.args) is not F else F
        tables[defn.pred] = Table(I, atoms)
    return Interpretation3(m.universe, tables)


def t3_minus(program: DisjunctiveProgram, m: Interpretation3) -> Interpretation3:
    """Keep the I-set; an admissible atom is true only when some body
    instance is true."""
    tables: Dict = {}
    for defn in _program_predicates(program, m):
        atoms = {}
        for atom in m.universe.atoms(defn.name, defn.arity):
            if m.truth_of(atom) is I:
                atoms[atom] = I
            else:
                atoms[atom] = T if body_value(m, defn, atom.args) is T else F
        tables[defn.pred] = Table(I, atoms)
    return Interpretation3(m.universe, tables)


def classical_tp(program: DisjunctiveProgram, m: Interpretation3) -> Interpretation3:
    """The two-valued immediate consequence step.

    Only defined for definite programs and interpretations with an empty
    inadmissible set; on that fragment it coincides with all three
    three-valued operators.
    """
    if not program.is_definite():
        raise InterpretationError("classical TP is only defined for definite programs")
    for atom in m.all_atoms():
        if m.truth_of(atom) is I:
            raise InterpretationError("classical TP needs an empty inadmissible set")
    out = t3(program, m)
    for atom in out.all_atoms():
        if out.truth_of(atom) is I:
            raise InterpretationError("classical TP produced a third value; program is not definite")
    return out


STEP_FUNCTIONS = {
    "t3": t3,
    "t3plus": t3_plus,
    "t3minus": t3_minus,
    "classical_tp": classical_tp,
}


@dataclass
class FixpointResult:
    interpretation: Interpretation3
    iterations: int
    converged: bool


def all_inadmissible(program: DisjunctiveProgram, universe) -> Interpretation3:
    tables = {d.pred: Table(I, {}) for d in program.definitions}
    return Interpretation3(universe, tables)


def _ground_atom_count(program: DisjunctiveProgram, universe) -> int:
    return sum(universe.atom_count(d.arity) for d in program.definitions)


def fitting_lfp(
    program: DisjunctiveProgram,
    universe,
    max_iters: Optional[int] = None,
    mode: str = "naive",
) -> FixpointResult:
    """Iterate t3 from the everywhere-I interpretation until it is stable.

    Non-convergence within max_iters (default: one more than the number
    of ground atoms) is reported through the converged flag, never
    raised.  The naive mode re-evaluates everything each pass and is the
    auditable reference; the semi-naive mode skips predicates none of
    whose body predicates changed in the previous pass and must agree
    with it exactly.
    """
    if mode not in ("naive", "seminaive"):
        raise ValueError("mode must be naive or seminaive")
    if max_iters is None:
        max_iters = _ground_atom_count(program, universe) + 1
    current = all_inadmissible(program, universe)
    deps = _body_predicates(program)
    changed_preds = set(d.pred for d in program.definitions)
    iterations = 0
    while iterations < max_iters:
        if mode == "seminaive" and iterations > 0:
            nxt_tables = {}
            now_changed = set()
            for defn in program.definitions:
                if deps[defn.pred] & changed_preds:
                    atoms = {a: body_value(current, defn, a.args) for a in universe.atoms(defn.name, defn.arity)}
                    nxt_tables[defn.pred] = Table(I, atoms)
                    if nxt_tables[defn.pred] != current.tables[defn.pred]:
                        now_changed.add(defn.pred)
                else:
                    nxt_tables[defn.pred] = current.tables[defn.pred]
            nxt = Interpretation3(universe, nxt_tables)
            changed_preds = now_changed
        else:
            nxt = t3(program, current)
            changed_preds = {
                d.pred for d in program.definitions if nxt.tables[d.pred] != current.tables[d.pred]
            }
        iterations += 1
        if not changed_preds:
            return FixpointResult(nxt, iterations, True)
        if not leq_info(current, nxt):
            # the iteration is monotone in the information ordering by
            # construction; failing this indicates an evaluation bug
            raise AssertionError("fixpoint iteration left the information ordering")
        current = nxt
    return FixpointResult(current, iterations, False)


def _body_predicates(program: DisjunctiveProgram) -> Dict:
    deps: Dict = {}
    for defn in program.definitions:
        body_preds = set()
        for dj in defn.disjuncts:
            for lit in dj.rest:
                body_preds.add(lit.pred)
        deps[defn.pred] = body_preds
    return deps
