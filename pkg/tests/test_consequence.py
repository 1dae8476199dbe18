"""Consequence operators and the fixpoint driver."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trivalog.consequence import (
    STEP_FUNCTIONS,
    all_inadmissible,
    classical_tp,
    fitting_lfp,
    t3,
    t3_minus,
    t3_plus,
)
from trivalog.interpretations import (
    Interpretation3,
    InterpretationError,
    Table,
    leq_info,
    same_values,
)
from trivalog.kernel_terms import BoundedUniverse, Struct
from trivalog.normalform import to_disjunctive
from trivalog.syntax import parse_program
from trivalog.truth import F, I, T

from helpers import RAND_UNI, rand_interp, rand_program

PQ = to_disjunctive(parse_program("p :- q.\nq."))
PQ_UNI = BoundedUniverse((), None, 0, None, False)

PATH_TEXT = """edge(a, b).
edge(b, c).
path(X, Y) :- edge(X, Y).
path(X, Z) :- edge(X, Y), path(Y, Z).
"""
PATH_UNI = BoundedUniverse((("a", 0), ("b", 0), ("c", 0)), None, 0, None, False)


def a(name, *args):
    return Struct(name, tuple(Struct(x) for x in args))


def test_t3_single_steps_by_hand():
    m0 = all_inadmissible(PQ, PQ_UNI)
    m1 = t3(PQ, m0)
    # q has an empty body, so it is decided immediately; p still sees I
    assert m1.truth_of(Struct("q")) is T
    assert m1.truth_of(Struct("p")) is I
    m2 = t3(PQ, m1)
    assert m2.truth_of(Struct("p")) is T
    assert same_values(t3(PQ, m2), m2)


def test_fitting_on_two_facts():
    res = fitting_lfp(PQ, PQ_UNI)
    assert res.converged
    assert res.iterations <= 3
    assert res.interpretation.truth_of(Struct("p")) is T
    assert res.interpretation.truth_of(Struct("q")) is T


def test_fitting_self_negation_stays_inadmissible():
    prog = to_disjunctive(parse_program("p :- not p."))
    res = fitting_lfp(prog, PQ_UNI)
    assert res.converged
    assert res.iterations <= 2
    assert res.interpretation.truth_of(Struct("p")) is I


def test_fitting_iteration_budget():
    prog = to_disjunctive(parse_program(PATH_TEXT))
    res = fitting_lfp(prog, PATH_UNI, max_iters=1)
    assert not res.converged
    assert res.iterations == 1


def test_fitting_path_values():
    prog = to_disjunctive(parse_program(PATH_TEXT))
    res = fitting_lfp(prog, PATH_UNI)
    assert res.converged
    m = res.interpretation
    assert m.truth_of(a("path", "a", "c")) is T
    assert m.truth_of(a("path", "c", "a")) is F
    assert m.truth_of(a("edge", "a", "b")) is T
    assert m.truth_of(a("edge", "b", "a")) is F
    # a definite program's fitting fixpoint never needs the third value
    assert all(m.truth_of(atom) is not I for atom in m.all_atoms())


def test_seminaive_agrees_with_naive():
    prog = to_disjunctive(parse_program(PATH_TEXT))
    naive = fitting_lfp(prog, PATH_UNI, mode="naive")
    semi = fitting_lfp(prog, PATH_UNI, mode="seminaive")
    assert naive.converged and semi.converged
    assert same_values(naive.interpretation, semi.interpretation)
    with pytest.raises(ValueError):
        fitting_lfp(prog, PATH_UNI, mode="eager")


def brute_force_tp(clauses, universe):
    """Reference two-valued TP closure, computed straight off ground instances."""
    terms = universe.terms() if universe.functors or universe.int_range else []
    ground = []
    for c in clauses.clauses:
        names = sorted(
            {v.name for t in (c.head, *[l.atom for l in c.body]) for v in _vars(t)}
        )
        for combo in itertools.product(terms, repeat=len(names)):
            s = dict(zip(names, combo))
            ground.append(
                (_subst(c.head, s), [_subst(l.atom, s) for l in c.body])
            )
    true = set()
    while True:
        new = {h for h, body in ground if all(b in true for b in body)}
        if new == true:
            return true
        true = new


def _vars(t):
    from trivalog.kernel_terms import variables_of

    return variables_of(t)


def _subst(t, s):
    from trivalog.kernel_terms import Num, Var

    if isinstance(t, Var):
        return s[t.name]
    if isinstance(t, Struct) and t.args:
        return Struct(t.functor, tuple(_subst(x, s) for x in t.args))
    return t


def test_classical_tp_matches_brute_force():
    clauses = parse_program(PATH_TEXT)
    prog = to_disjunctive(clauses)
    oracle = brute_force_tp(clauses, PATH_UNI)
    all_false = Interpretation3(PATH_UNI, {d.pred: Table(F, {}) for d in prog.definitions})
    m = all_false
    for _ in range(10):
        m = classical_tp(prog, m)
    got = {atom for atom in m.all_atoms() if m.truth_of(atom) is T}
    assert got == oracle


def test_classical_tp_guards():
    with pytest.raises(InterpretationError):
        classical_tp(to_disjunctive(parse_program("p :- not q.\nq.")), all_inadmissible(PQ, PQ_UNI))
    with pytest.raises(InterpretationError):
        classical_tp(PQ, all_inadmissible(PQ, PQ_UNI))


def test_step_function_registry():
    assert set(STEP_FUNCTIONS) == {"t3", "t3plus", "t3minus", "classical_tp"}
    assert STEP_FUNCTIONS["t3"] is t3


# -- properties ----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_t3_variants_preserve_the_inadmissible_set(seed):
    import random

    rng = random.Random(seed)
    prog = rand_program(rng)
    m = rand_interp(rng, prog)
    for op in (t3_plus, t3_minus):
        out = op(prog, m)
        for atom in m.all_atoms():
            assert (m.truth_of(atom) is I) == (out.truth_of(atom) is I)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_fitting_iterates_climb_the_information_order(seed):
    import random

    rng = random.Random(seed)
    prog = rand_program(rng)
    m = all_inadmissible(prog, RAND_UNI)
    for _ in range(6):
        nxt = t3(prog, m)
        assert leq_info(m, nxt)
        m = nxt


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_t3_brackets_between_plus_and_minus(seed):
    import random

    rng = random.Random(seed)
    prog = rand_program(rng)
    m = rand_interp(rng, prog)
    mid, lo, hi = t3(prog, m), t3_minus(prog, m), t3_plus(prog, m)
    # on atoms admissible in m: minus true implies t3 true implies plus true
    for atom in m.all_atoms():
        if m.truth_of(atom) is I:
            continue
        v, vlo, vhi = mid.truth_of(atom), lo.truth_of(atom), hi.truth_of(atom)
        if vlo is T:
            assert v is T
        if v is T:
            assert vhi is T
        if vhi is F:
            assert v is F
        if v is F:
            assert vlo is F
