"""Truth values and connectives for Kleene's strong three-valued logic.

The third value is called "inadmissible" (I): it marks atoms that fall
outside the intended use of a predicate, for which the programmer makes
no commitment either way.  Conjunction, disjunction and negation are
Kleene's strong connectives.  The implication used for clause checking
is two-valued: a clause instance is acceptable unless a true head rests
on a false or inadmissible body, or vice versa.
"""

from __future__ import annotations

from enum import Enum
from typing import Iterable, Mapping


class TV(Enum):
    TRUE = "T"
    FALSE = "F"
    INADMISSIBLE = "I"

    def __str__(self) -> str:
        return self.value

    def __repr__(self) -> str:
        return self.value


T = TV.TRUE
F = TV.FALSE
I = TV.INADMISSIBLE


def parse_tv(text: str) -> TV:
    try:
        return TV(text.strip())
    except ValueError:
        raise ValueError("truth value must be one of T, F, I, got %r" % text)


# Connective tables, written out row by row so they can be audited
# against any presentation of the strong Kleene system.

_AND = {
    (T, T): T, (T, F): F, (T, I): I,
    (F, T): F, (F, F): F, (F, I): F,
    (I, T): I, (I, F): F, (I, I): I,
}

_OR = {
    (T, T): T, (T, F): T, (T, I): T,
    (F, T): T, (F, F): F, (F, I): I,
    (I, T): T, (I, F): I, (I, I): I,
}

_NOT = {T: F, F: T, I: I}

# arrow3(head, body): two-valued acceptability of "head <- body".
# False exactly when a true head has a non-true body or a false head
# has a non-false body; an inadmissible head accepts anything.

_ARROW = {
    (T, T): T, (T, F): F, (T, I): F,
    (F, T): F, (F, F): T, (F, I): F,
    (I, T): T, (I, F): T, (I, I): T,
}


def and3(a: TV, b: TV) -> TV:
    return _AND[(a, b)]


def or3(a: TV, b: TV) -> TV:
    return _OR[(a, b)]


def not3(a: TV) -> TV:
    return _NOT[a]


def arrow3(head: TV, body: TV) -> TV:
    return _ARROW[(head, body)]


def conj3(values: Iterable[TV]) -> TV:
    """Fold and3 over values; the empty conjunction is true."""
    out = T
    for v in values:
        out = _AND[(out, v)]
        # F is absorbing, no later conjunct can change it
        if out is F:
            return F
    return out


def exists3(values: Iterable[TV]) -> TV:
    """Existential quantification over a multiset of instance values.

    True if some instance is true, false if every instance is false,
    inadmissible otherwise.  An empty multiset counts as false, the
    vacuous existential: it matches the empty-disjunction completion
    of a predicate with no clauses.
    """
    saw_i = False
    for v in values:
        if v is T:
            return T
        if v is I:
            saw_i = True
    return I if saw_i else F


def leq_info(m1: Mapping, m2: Mapping) -> bool:
    """Information ordering on truth assignments over one atom domain.

    m1 <= m2 iff every atom true in m1 is true in m2 and every atom
    false in m1 is false in m2 (inadmissible atoms may be refined).
    Raises ValueError when the domains differ.
    """
    if set(m1.keys()) != set(m2.keys()):
        raise ValueError("information ordering needs identical atom domains")
    for atom, v in m1.items():
        if v is T and m2[atom] is not T:
            return False
        if v is F and m2[atom] is not F:
            return False
    return True
