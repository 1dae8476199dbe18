"""First-order terms, unification and bounded ground-term universes.

Terms are immutable values: variables, integers, and structures (a
functor with a tuple of argument terms; constants are 0-ary structures).
Lists use the usual './2' and '[]' encoding.  Unification always runs
the occurs check and produces an idempotent most general unifier.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __repr__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Struct:
    functor: str
    args: tuple = ()

    def __repr__(self) -> str:
        return format_term(self)


Term = Union[Var, Num, Struct]

NIL = Struct("[]")
CONS = "."


def cons(head: Term, tail: Term) -> Struct:
    return Struct(CONS, (head, tail))


def mklist(items: Sequence[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(items):
        out = cons(item, out)
    return out


def as_list(term: Term) -> Optional[list]:
    """Return the elements of a proper list, or None if term is not one."""
    items = []
    while True:
        if term == NIL:
            return items
        if isinstance(term, Struct) and term.functor == CONS and len(term.args) == 2:
            items.append(term.args[0])
            term = term.args[1]
        else:
            return None


def is_ground(term: Term) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            return False
        if isinstance(t, Struct):
            stack.extend(t.args)
    return True


def variables_of(term: Term) -> list:
    """Variables in term, in left-to-right first-occurrence order."""
    seen = set()
    order = []
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t not in seen:
                seen.add(t)
                order.append(t)
        elif isinstance(t, Struct):
            stack.extend(reversed(t.args))
    return order


def term_depth(term: Term) -> int:
    """Constants and variables have depth 0, f(ts) has 1 + max depth of ts."""
    if isinstance(t := term, Struct) and t.args:
        return 1 + max(term_depth(a) for a in t.args)
    return 0


def format_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Num):
        return str(term.value)
    if term == NIL:
        return "[]"
    items = as_list(term)
    if items is not None:
        return "[" + ",".join(format_term(i) for i in items) + "]"
    if term.functor == CONS and len(term.args) == 2:
        # improper or open-tailed list
        parts = []
        t = term
        while isinstance(t, Struct) and t.functor == CONS and len(t.args) == 2:
            parts.append(format_term(t.args[0]))
            t = t.args[1]
        return "[" + ",".join(parts) + "|" + format_term(t) + "]"
    if not term.args:
        return term.functor
    return "%s(%s)" % (term.functor, ",".join(format_term(a) for a in term.args))


# --- substitutions ---------------------------------------------------------


class Substitution:
    """An idempotent mapping from variables to terms."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Optional[dict] = None):
        self._map = dict(mapping) if mapping else {}

    def __bool__(self) -> bool:
        return bool(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Substitution) and self._map == other._map

    def __repr__(self) -> str:
        inner = ", ".join(
            "%s=%s" % (v.name, format_term(t)) for v, t in sorted(self._map.items(), key=lambda p: p[0].name)
        )
        return "{" + inner + "}"

    def items(self):
        return self._map.items()

    def domain(self):
        return set(self._map.keys())

    def get(self, var: Var) -> Optional[Term]:
        return self._map.get(var)

    def apply(self, term: Term) -> Term:
        m = self._map
        if not m:
            return term

        def go(t: Term) -> Term:
            if isinstance(t, Var):
                got = m.get(t)
                return t if got is None else got
            if isinstance(t, Struct) and t.args:
                return Struct(t.functor, tuple(go(a) for a in t.args))
            return t

        return go(term)

    def restrict(self, variables: Iterable[Var]) -> "Substitution":
        keep = set(variables)
        return Substitution({v: t for v, t in self._map.items() if v in keep})

    def compose(self, other: "Substitution") -> "Substitution":
        """self then other, kept idempotent for the usual mgu compositions."""
        out = {v: other.apply(t) for v, t in self._map.items()}
        for v, t in other._map.items():
            if v not in out:
                out[v] = t
        return Substitution(out)


EMPTY_SUBST = Substitution()


def _occurs(var: Var, term: Term, bindings: dict) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        while isinstance(t, Var) and t in bindings:
            t = bindings[t]
        if t == var:
            return True
        if isinstance(t, Struct):
            stack.extend(t.args)
    return False


def _solve(pairs: Iterable, bindings: dict) -> bool:
    """Extend bindings with an mgu of the pairs; False on clash or occurs."""
    stack = list(pairs)
    while stack:
        a, b = stack.pop()
        while isinstance(a, Var) and a in bindings:
            a = bindings[a]
        while isinstance(b, Var) and b in bindings:
            b = bindings[b]
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a, b, bindings):
                return False
            bindings[a] = b
        elif isinstance(b, Var):
            if _occurs(b, a, bindings):
                return False
            bindings[b] = a
        elif isinstance(a, Struct) and isinstance(b, Struct):
            if a.functor != b.functor or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
        else:
            return False
    return True


def _resolved(bindings: dict) -> Substitution:
    """Fully dereference a triangular binding set into an idempotent mgu."""

    def deref(t: Term) -> Term:
        while isinstance(t, Var) and t in bindings:
            t = bindings[t]
        if isinstance(t, Struct) and t.args:
            return Struct(t.functor, tuple(deref(a) for a in t.args))
        return t

    return Substitution({v: deref(t) for v, t in bindings.items()})


def unify(t1: Term, t2: Term) -> Optional[Substitution]:
    """Most general unifier with occurs check, or None."""
    bindings: dict = {}
    if not _solve([(t1, t2)], bindings):
        return None
    return _resolved(bindings)


def match_ground(pattern: Term, ground: Term, bindings: dict) -> bool:
    """One-sided match of a pattern against a ground term.

    Extends bindings (a plain dict, mutated) mapping pattern variables to
    ground subterms.  Equivalent to unification when one side is ground,
    but without the occurs-check bookkeeping; used in the hot evaluation
    paths.
    """
    stack = [(pattern, ground)]
    while stack:
        p, g = stack.pop()
        if isinstance(p, Var):
            seen = bindings.get(p)
            if seen is None:
                bindings[p] = g
            elif seen != g:
                return False
        elif isinstance(p, Num):
            if p != g:
                return False
        else:
            if not (isinstance(g, Struct) and g.functor == p.functor and len(g.args) == len(p.args)):
                return False
            stack.extend(zip(p.args, g.args))
    return True


# --- constraint sets -------------------------------------------------------


class Constraints:
    """A set of equality atoms with cached satisfiability and solution.

    Two views of the same thing: the accumulated equations (for printing
    and for inheriting into negative subtrees) and the solving idempotent
    substitution (for groundedness tests and answer extraction).
    """

    __slots__ = ("eqs", "satisfiable", "solution")

    def __init__(self, eqs: tuple = (), satisfiable: bool = True, solution: Substitution = EMPTY_SUBST):
        self.eqs = eqs
        self.satisfiable = satisfiable
        self.solution = solution

    @classmethod
    def empty(cls) -> "Constraints":
        return cls()

    @classmethod
    def from_pairs(cls, pairs: Sequence) -> "Constraints":
        return cls().add(pairs)

    def add(self, pairs: Sequence) -> "Constraints":
        """A new constraint set with the extra equations solved in."""
        pairs = tuple(pairs)
        eqs = self.eqs + pairs
        if not self.satisfiable:
            return Constraints(eqs, False, None)
        bindings = dict(self.solution.items())
        if not _solve(pairs, bindings):
            return Constraints(eqs, False, None)
        return Constraints(eqs, True, _resolved(bindings))

    def grounds(self, term: Term) -> bool:
        """Does the solving substitution make term ground?"""
        return self.satisfiable and is_ground(self.solution.apply(term))

    def resolve(self, term: Term) -> Term:
        return self.solution.apply(term) if self.satisfiable else term

    def __repr__(self) -> str:
        if not self.satisfiable:
            return "unsat{%s}" % ", ".join("%s=%s" % (format_term(a), format_term(b)) for a, b in self.eqs)
        return repr(self.solution)


def grounded_under(term: Term, constraints: Constraints) -> bool:
    return constraints.grounds(term)


# --- bounded universes -----------------------------------------------------


@dataclass(frozen=True)
class BoundedUniverse:
    """A finite, subterm-closed slice of the ground terms over a signature.

    Enumeration is deterministic: by depth, then functor (integers first,
    in numeric order, then functors by name), then argument order.  With
    flat_lists set, './2' builds only proper lists whose elements are
    non-list terms; the depth bound then reads as a length bound, which
    keeps list universes at a workable size.
    """

    functors: tuple = ()            # (name, arity) pairs
    int_range: Optional[tuple] = None  # inclusive (lo, hi)
    max_depth: int = 0
    max_count: Optional[int] = None
    flat_lists: bool = False
    _terms: list = field(default=None, compare=False, repr=False, hash=False)
    _terms_set: set = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "functors", tuple(sorted(set(self.functors))))

    def constants(self) -> list:
        out: list = []
        if self.int_range is not None:
            lo, hi = self.int_range
            out.extend(Num(i) for i in range(lo, hi + 1))
        out.extend(Struct(name) for name, arity in sorted(self.functors) if arity == 0)
        return out

    def terms(self) -> list:
        if self._terms is not None:
            return self._terms
        by_depth = [self.constants()]
        if not by_depth[0]:
            raise ValueError("universe has no constants, no ground terms exist")
        compound = sorted((n, a) for n, a in self.functors if a > 0)
        for depth in range(1, self.max_depth + 1):
            upto = [t for level in by_depth for t in level]
            level = []
            for name, arity in compound:
                if self.flat_lists and name == CONS:
                    heads = [t for t in upto if not _is_listish(t)]
                    tails = [t for t in upto if _is_proper_list(t)]
                    for h in heads:
                        for t in tails:
                            c = cons(h, t)
                            if term_depth(c) == depth:
                                level.append(c)
                    continue
                for args in itertools.product(upto, repeat=arity):
                    if 1 + max(term_depth(a) for a in args) == depth:
                        level.append(Struct(name, args))
            by_depth.append(level)
        flat = [t for level in by_depth for t in level]
        if self.max_count is not None and len(flat) > self.max_count:
            raise ValueError(
                "universe enumerates %d terms, above the configured cap %d" % (len(flat), self.max_count)
            )
        object.__setattr__(self, "_terms", flat)
        object.__setattr__(self, "_terms_set", set(flat))
        return flat

    def __len__(self) -> int:
        return len(self.terms())

    def contains(self, term: Term) -> bool:
        if self._terms_set is None:
            self.terms()
        return term in self._terms_set

    def atoms(self, name: str, arity: int) -> Iterator[Struct]:
        """All ground atoms of one predicate over this universe, in order."""
        if arity == 0:
            yield Struct(name)
            return
        for args in itertools.product(self.terms(), repeat=arity):
            yield Struct(name, args)

    def atom_count(self, arity: int) -> int:
        return len(self.terms()) ** arity if arity else 1

    def describe(self) -> str:
        parts = ["depth=%d" % self.max_depth]
        if self.int_range is not None:
            parts.append("ints=%d..%d" % self.int_range)
        if self.functors:
            parts.append("functors=" + ",".join("%s/%d" % f for f in self.functors))
        if self.flat_lists:
            parts.append("lists=flat")
        return " ".join(parts)


def _is_listish(t: Term) -> bool:
    return t == NIL or (isinstance(t, Struct) and t.functor == CONS and len(t.args) == 2)


def _is_proper_list(t: Term) -> bool:
    return as_list(t) is not None


def fresh_counter():
    """Monotone counter shared by anything that renames variables apart."""
    return itertools.count(1)
