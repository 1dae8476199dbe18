"""Reader and printer for the clausal language."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trivalog.kernel_terms import NIL, Num, Struct, Var, cons, mklist
from trivalog.syntax import (
    Clause,
    Literal,
    ParseError,
    format_clause,
    format_program,
    format_term,
    parse_goal,
    parse_program,
    parse_term,
)

from helpers import MERGE_TEXT


def test_dot_pairs_and_bracket_lists_agree():
    assert parse_term("A.B") == cons(Var("A"), Var("B"))
    assert parse_term("[A|B]") == parse_term("A.B")
    assert parse_term("[1,2,3]") == parse_term("1.2.3.[]")
    assert parse_term("[1,2|T]") == cons(Num(1), cons(Num(2), Var("T")))
    assert parse_term("[]") == NIL


def test_dot_is_right_associative():
    assert parse_term("A.B.C") == cons(Var("A"), cons(Var("B"), Var("C")))


def test_enddot_disambiguation():
    # a dot before layout ends the clause, a tight dot builds a pair
    p = parse_program("p(A.B).")
    assert p.clauses[0].head == Struct("p", (cons(Var("A"), Var("B")),))
    p2 = parse_program("q(a). q(b).")
    assert len(p2.clauses) == 2
    # dot before a comment also closes the clause
    p3 = parse_program("r(1).% trailing comment")
    assert len(p3.clauses) == 1


def test_merge_program_shape():
    p = parse_program(MERGE_TEXT)
    assert len(p.clauses) == 4
    assert p.predicates() == [("merge", 3)]
    assert p.clauses[0].line == 1
    assert p.clauses[3].line == 4
    c3 = p.clauses[2]
    assert c3.head.functor == "merge"
    assert [lit.pred for lit in c3.body] == [("=<", 2), ("merge", 3)]


def test_anonymous_variables_are_distinct():
    p = parse_program("p(_, _).")
    a, b = p.clauses[0].head.args
    assert isinstance(a, Var) and isinstance(b, Var)
    assert a != b


def test_negation_forms():
    g1 = parse_goal("not member(X, L)")
    g2 = parse_goal("not(member(X, L))")
    assert g1 == g2
    assert g1[0].negated and g1[0].pred == ("member", 2)
    with pytest.raises(ParseError):
        parse_goal("not not p")


def test_comparisons_and_equality():
    g = parse_goal("X =< Y, Y > Z, Z = 1")
    assert [lit.atom.functor for lit in g] == ["=<", ">", "="]
    assert g[2].is_equality()
    assert g[0].is_comparison()
    with pytest.raises(ParseError) as e:
        parse_goal("X <= Y")
    assert "=<" in str(e.value)


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as e:
        parse_program("p(a)\nq(b).")
    assert e.value.line == 2     # error surfaces where q begins
    with pytest.raises(ParseError) as e:
        parse_term("f(1,")
    assert e.value.line == 1
    with pytest.raises(ParseError):
        parse_term("f(1) junk")


def test_impure_constructs_rejected():
    with pytest.raises(ParseError):
        parse_program("p :- !.")
    with pytest.raises(ParseError):
        parse_program("p(X) :- var(X).")
    with pytest.raises(ParseError):
        parse_program("X = 1.")            # equality cannot head a clause


def test_goal_is_single_conjunction():
    assert len(parse_goal("p, q, r")) == 3
    assert len(parse_goal("p(X).")) == 1
    with pytest.raises(ParseError):
        parse_goal("p. q.")


def test_format_roundtrip_on_merge():
    p = parse_program(MERGE_TEXT)
    again = parse_program(format_program(p))
    assert again.clauses == p.clauses


def test_format_uses_list_sugar():
    assert format_term(mklist([Num(1), Num(2)])) == "[1,2]"
    assert format_term(cons(Num(1), Var("T"))) == "[1|T]"
    assert format_term(cons(Num(1), Num(2))) == "[1|2]"
    assert format_clause(Clause(Struct("p"), (Literal(Struct("q"), negated=True),))) == "p :- not q."


# -- properties ----------------------------------------------------------------

ground_terms = st.recursive(
    st.one_of(
        st.integers(min_value=0, max_value=9).map(Num),
        st.sampled_from([Struct("a"), Struct("b"), NIL]),
    ),
    lambda sub: st.one_of(
        st.builds(lambda a, b: cons(a, b), sub, sub),
        st.builds(lambda a: Struct("s", (a,)), sub),
        st.builds(lambda a, b: Struct("f", (a, b)), sub, sub),
    ),
    max_leaves=10,
)


@given(ground_terms)
def test_term_print_parse_roundtrip(t):
    assert parse_term(format_term(t)) == t
