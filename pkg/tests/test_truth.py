"""Truth value kernel: tables are frozen here, independently of the module."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trivalog.truth import F, I, T, TV, and3, arrow3, conj3, exists3, leq_info, not3, or3, parse_tv

# conjunction and disjunction are min/max in the order F < I < T;
# every entry spelled out rather than derived
AND_TABLE = {
    (T, T): T, (T, F): F, (T, I): I,
    (F, T): F, (F, F): F, (F, I): F,
    (I, T): I, (I, F): F, (I, I): I,
}
OR_TABLE = {
    (T, T): T, (T, F): T, (T, I): T,
    (F, T): T, (F, F): F, (F, I): I,
    (I, T): T, (I, F): I, (I, I): I,
}
NOT_TABLE = {T: F, F: T, I: I}
# head <- body, two-valued: false exactly when a false-or-true head
# pairs with a body that would force it up
ARROW_TABLE = {
    (T, T): T, (T, F): F, (T, I): F,
    (F, T): F, (F, F): T, (F, I): F,
    (I, T): T, (I, F): T, (I, I): T,
}

VALUES = (T, F, I)


def test_and_table_bit_exact():
    for pair, want in AND_TABLE.items():
        assert and3(*pair) is want


def test_or_table_bit_exact():
    for pair, want in OR_TABLE.items():
        assert or3(*pair) is want


def test_not_table_bit_exact():
    for v, want in NOT_TABLE.items():
        assert not3(v) is want


def test_arrow_table_bit_exact():
    for (head, body), want in ARROW_TABLE.items():
        assert arrow3(head, body) is want


def test_table_sizes():
    assert len(AND_TABLE) == len(OR_TABLE) == len(ARROW_TABLE) == 9
    assert len(NOT_TABLE) == 3


def test_conj3_empty_is_true():
    assert conj3([]) is T


def test_exists3_empty_is_false():
    assert exists3([]) is F


def test_conj3_mixed():
    assert conj3([T, I, T]) is I
    assert conj3([T, I, F]) is F


def test_exists3_mixed():
    assert exists3([I, T]) is T
    assert exists3([F, F]) is F
    assert exists3([F, I]) is I


def test_parse_tv():
    assert parse_tv("T") is T and parse_tv("F") is F and parse_tv("I") is I
    with pytest.raises(ValueError):
        parse_tv("Q")


def _leq(a: TV, b: TV) -> bool:
    # single-value information order: I below everything, T and F final
    return a is I or a is b


def test_leq_info_on_mappings():
    assert leq_info({"p": I, "q": T}, {"p": F, "q": T})
    assert not leq_info({"p": T}, {"p": F})
    assert not leq_info({"p": T}, {"p": I})
    with pytest.raises(ValueError):
        leq_info({"p": T}, {"q": T})


tv = st.sampled_from(VALUES)


@given(tv, tv)
def test_and_or_commute(a, b):
    assert and3(a, b) is and3(b, a)
    assert or3(a, b) is or3(b, a)


@given(tv, tv)
def test_de_morgan(a, b):
    assert not3(and3(a, b)) is or3(not3(a), not3(b))
    assert not3(or3(a, b)) is and3(not3(a), not3(b))


@given(tv, tv, tv, tv)
def test_connectives_monotone_in_information_order(a, b, a2, b2):
    # replacing I by a classical value never flips a decided result
    if _leq(a, a2) and _leq(b, b2):
        assert _leq(and3(a, b), and3(a2, b2))
        assert _leq(or3(a, b), or3(a2, b2))
        assert _leq(not3(a), not3(a2))


@given(st.lists(tv, max_size=6))
def test_conj_exists_agree_with_folds(vs):
    folded_and = T
    for v in vs:
        folded_and = and3(folded_and, v)
    assert conj3(vs) is folded_and
    folded_or = F
    for v in vs:
        folded_or = or3(folded_or, v)
    assert exists3(vs) is folded_or
