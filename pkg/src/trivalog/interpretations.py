"""Three-valued interpretations over bounded universes.

An interpretation assigns one of T, F, I to every ground atom of its
declared predicates, with arguments drawn from a finite term universe.
For table-backed predicates, atoms outside the universe are a hard
error rather than a silent default, so every claim a check makes is
explicitly "within bound".  Registry-backed predicates are total
decision procedures; for them the universe only bounds enumeration.

Predicates are backed either by an explicit table (a default value plus
exceptions) or by a named decision procedure from the registry; the
registry carries executable versions of the intended interpretations
used by the shipped example programs.

Equality is fixed: a ground equation is true iff both sides are the
same term.  The comparisons =< and > are fixed and two-valued: false
whenever either argument is not an integer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, Optional, Tuple

from . import truth
from .normalform import Definition, DisjunctiveProgram
from .syntax import BUILTIN_EQ, BUILTIN_GT, BUILTIN_LE, Literal, format_term, parse_term
from .kernel_terms import (
    CONS,
    BoundedUniverse,
    Num,
    Struct,
    Term,
    Var,
    as_list,
    is_ground,
    match_ground,
    mklist,
    variables_of,
)
from .truth import TV, F, I, T, and3, exists3, not3, or3

PredKey = Tuple[str, int]


class InterpretationError(ValueError):
    pass


@dataclass
class Table:
    """Explicit finite table: a default plus differing atoms."""

    default: TV
    atoms: Dict[Struct, TV]

    def __post_init__(self):
        # canonical form: never store an atom at the default value
        self.atoms = {a: v for a, v in self.atoms.items() if v is not self.default}

    def lookup(self, atom: Struct) -> TV:
        return self.atoms.get(atom, self.default)

    def __eq__(self, other):
        return isinstance(other, Table) and self.default is other.default and self.atoms == other.atoms


@dataclass
class SpecTable:
    """Registry-backed table, evaluated on demand."""

    spec_name: str
    fn: Callable[[Struct], TV]

    def lookup(self, atom: Struct) -> TV:
        return self.fn(atom)

    def __eq__(self, other):
        return isinstance(other, SpecTable) and self.spec_name == other.spec_name


class Interpretation3:
    """Total three-valued interpretation of declared predicates."""

    def __init__(self, universe: BoundedUniverse, tables: Dict[PredKey, object]):
        self.universe = universe
        self.tables = dict(tables)

    def __eq__(self, other):
        return (
            isinstance(other, Interpretation3)
            and self.universe == other.universe
            and self.tables == other.tables
        )

    def predicates(self) -> list:
        return sorted(self.tables.keys())

    def declares(self, name: str, arity: int) -> bool:
        return (name, arity) in self.tables

    def truth_of(self, atom: Struct) -> TV:
        """Value of a ground atom; errors outside the declared slice."""
        f, n = atom.functor, len(atom.args)
        if f == BUILTIN_EQ and n == 2:
            a, b = atom.args
            if not (is_ground(a) and is_ground(b)):
                raise InterpretationError("equality queried on non-ground atom %s" % format_term(atom))
            return T if a == b else F
        if f in (BUILTIN_LE, BUILTIN_GT) and n == 2:
            return compare(f, atom.args[0], atom.args[1])
        table = self.tables.get((f, n))
        if table is None:
            raise InterpretationError("predicate %s/%d is not covered by this interpretation" % (f, n))
        for arg in atom.args:
            if not is_ground(arg):
                raise InterpretationError("truth_of needs a ground atom, got %s" % format_term(atom))
            # spec functions are total, so only enumerated tables are pinned to the universe
            if isinstance(table, Table) and not self.universe.contains(arg):
                raise InterpretationError(
                    "%s is outside the bounded universe (%s)" % (format_term(arg), self.universe.describe())
                )
        return table.lookup(atom)

    def atoms_of(self, name: str, arity: int) -> Iterator[Struct]:
        return self.universe.atoms(name, arity)

    def all_atoms(self) -> Iterator[Struct]:
        for name, arity in self.predicates():
            yield from self.universe.atoms(name, arity)

    def as_mapping(self) -> Dict[Struct, TV]:
        return {a: self.truth_of(a) for a in self.all_atoms()}

    def value_set(self, value: TV) -> set:
        return {a for a in self.all_atoms() if self.truth_of(a) is value}

    def materialize(self) -> "Interpretation3":
        """Expand registry-backed predicates into explicit tables."""
        tables: Dict[PredKey, object] = {}
        for key, table in self.tables.items():
            if isinstance(table, Table):
                tables[key] = Table(table.default, dict(table.atoms))
            else:
                atoms = {a: table.lookup(a) for a in self.universe.atoms(*key)}
                tables[key] = Table(I, atoms)
        return Interpretation3(self.universe, tables)


def compare(op: str, a: Term, b: Term) -> TV:
    """Fixed two-valued comparison; false on any non-integer argument."""
    if isinstance(a, Num) and isinstance(b, Num):
        if op == BUILTIN_LE:
            return T if a.value <= b.value else F
        return T if a.value > b.value else F
    return F


def same_values(m1: Interpretation3, m2: Interpretation3) -> bool:
    """Pointwise agreement over the shared universe and predicates."""
    if m1.universe != m2.universe or set(m1.tables) != set(m2.tables):
        return False
    return all(m1.truth_of(a) == m2.truth_of(a) for a in m1.all_atoms())


def leq_info(m1: Interpretation3, m2: Interpretation3) -> bool:
    """Information ordering: both the true and the false set may only grow."""
    if m1.universe != m2.universe or set(m1.tables) != set(m2.tables):
        raise InterpretationError("information ordering needs identical universe and predicates")
    for a in m1.all_atoms():
        v = m1.truth_of(a)
        if v is not I and m2.truth_of(a) is not v:
            return False
    return True


# --- evaluating definition bodies ------------------------------------------


def _apply_bindings(t: Term, bindings: dict) -> Term:
    if isinstance(t, Var):
        return bindings.get(t, t)
    if isinstance(t, Struct) and t.args:
        return Struct(t.functor, tuple(_apply_bindings(a, bindings) for a in t.args))
    return t


def disjunct_value(m: Interpretation3, dj, args: tuple) -> TV:
    """Value of one existentially closed disjunct at a ground head.

    The head equalities are solved by matching; the remaining free
    locals range over the universe.  True if some instantiation makes
    the whole conjunction true, false if all fail, inadmissible
    otherwise.
    """
    bindings: dict = {}
    for pattern, arg in zip(dj.head_patterns, args):
        if not match_ground(pattern, arg, bindings):
            return F
    if not dj.rest:
        return T
    free: list = []
    for lit in dj.rest:
        for v in _literal_vars(lit):
            if v not in bindings and v not in free:
                free.append(v)
    if not free:
        return _conj_value(m, dj.rest, bindings)
    universe = m.universe.terms()
    saw_i = False
    for assignment in itertools.product(universe, repeat=len(free)):
        for v, t in zip(free, assignment):
            bindings[v] = t
        v = _conj_value(m, dj.rest, bindings)
        if v is T:
            return T
        if v is I:
            saw_i = True
    for v in free:
        bindings.pop(v, None)
    return I if saw_i else F


def _literal_vars(lit: Literal) -> list:
    return variables_of(lit.atom)


def _conj_value(m: Interpretation3, lits: tuple, bindings: dict) -> TV:
    out = T
    for lit in lits:
        atom = _apply_bindings(lit.atom, bindings)
        v = m.truth_of(atom)
        if lit.negated:
            v = not3(v)
        out = and3(out, v)
        if out is F:
            return F
    return out


def body_value(m: Interpretation3, defn: Definition, args: tuple) -> TV:
    """Value of the completed definition body at a ground head.

    The empty disjunction (an undefined predicate) is false; quantifiers
    distribute over the disjuncts, so this is the fold of the per
    disjunct values.
    """
    out = F
    for dj in defn.disjuncts:
        v = disjunct_value(m, dj, args)
        if v is T:
            return T
        out = or3(out, v)
    return out


def body_value_with_witness(m: Interpretation3, defn: Definition, args: tuple):
    """Like body_value but also reports which disjunct carried the value."""
    out = F
    carrier: Optional[int] = None
    for idx, dj in enumerate(defn.disjuncts):
        v = disjunct_value(m, dj, args)
        if v is T:
            return T, idx
        if v is I and out is F:
            carrier = idx
        out = or3(out, v)
    return out, carrier


# --- model algebra ----------------------------------------------------------


def _require_same_shape(m1: Interpretation3, m2: Interpretation3):
    if m1.universe != m2.universe or set(m1.tables) != set(m2.tables):
        raise InterpretationError("operation needs identical universe and predicates")


def intersect_true(m1: Interpretation3, m2: Interpretation3) -> Interpretation3:
    """Intersection of true sets; both sides must share the I-set."""
    _require_same_shape(m1, m2)
    tables: Dict[PredKey, object] = {}
    for key in m1.tables:
        atoms = {}
        for a in m1.universe.atoms(*key):
            v1, v2 = m1.truth_of(a), m2.truth_of(a)
            if (v1 is I) != (v2 is I):
                raise InterpretationError(
                    "inadmissible sets differ at %s (%s vs %s)" % (format_term(a), v1, v2)
                )
            atoms[a] = I if v1 is I else (T if v1 is T and v2 is T else F)
        tables[key] = Table(I, atoms)
    return Interpretation3(m1.universe, tables)


def intersect_inadmissible(m1: Interpretation3, m2: Interpretation3) -> Interpretation3:
    """Intersection of I-sets; both sides must share the true set."""
    _require_same_shape(m1, m2)
    tables: Dict[PredKey, object] = {}
    for key in m1.tables:
        atoms = {}
        for a in m1.universe.atoms(*key):
            v1, v2 = m1.truth_of(a), m2.truth_of(a)
            if (v1 is T) != (v2 is T):
                raise InterpretationError(
                    "true sets differ at %s (%s vs %s)" % (format_term(a), v1, v2)
                )
            atoms[a] = T if v1 is T else (I if v1 is I and v2 is I else F)
        tables[key] = Table(I, atoms)
    return Interpretation3(m1.universe, tables)


def repartition(m: Interpretation3, new_true: Iterable[Struct], new_inadmissible: Iterable[Struct]) -> Interpretation3:
    """Redistribute the non-false atoms into new true and I sets."""
    new_true = set(new_true)
    new_inadmissible = set(new_inadmissible)
    old = {a for a in m.all_atoms() if m.truth_of(a) is not F}
    if new_true & new_inadmissible:
        raise InterpretationError("repartition sets overlap")
    if new_true | new_inadmissible != old:
        raise InterpretationError("repartition must cover exactly the non-false atoms")
    tables: Dict[PredKey, object] = {}
    for key in m.tables:
        atoms = {}
        for a in m.universe.atoms(*key):
            if a in new_true:
                atoms[a] = T
            elif a in new_inadmissible:
                atoms[a] = I
            else:
                atoms[a] = F
        tables[key] = Table(I, atoms)
    return Interpretation3(m.universe, tables)


def from_mapping(universe: BoundedUniverse, predicates: Iterable[PredKey], mapping: Dict[Struct, TV]) -> Interpretation3:
    tables: Dict[PredKey, object] = {}
    for key in predicates:
        atoms = {a: mapping[a] for a in universe.atoms(*key)}
        tables[key] = Table(I, atoms)
    return Interpretation3(universe, tables)


# --- the registry of executable intended interpretations --------------------


def _int_list(t: Term) -> Optional[list]:
    items = as_list(t)
    if items is None:
        return None
    out = []
    for item in items:
        if not isinstance(item, Num):
            return None
        out.append(item.value)
    return out


def _sorted_int_list(t: Term) -> Optional[list]:
    vals = _int_list(t)
    if vals is None:
        return None
    if all(a <= b for a, b in zip(vals, vals[1:])):
        return vals
    return None


def _as_num_list_term(values: list) -> Term:
    return mklist([Num(v) for v in values])


def spec_merge_sorted_numbers(atom: Struct) -> TV:
    """merge(As,Bs,Cs): admissible when As and Bs are sorted number lists;
    then true iff Cs is the ordered multiset union of the two."""
    a, b, c = atom.args
    av, bv = _sorted_int_list(a), _sorted_int_list(b)
    if av is None or bv is None:
        return I
    return T if c == _as_num_list_term(sorted(av + bv)) else F


def spec_merge_third_sorted(atom: Struct) -> TV:
    """Variant that also admits atoms whose third argument is sorted,
    supporting the backwards mode of use."""
    a, b, c = atom.args
    av, bv, cv = _sorted_int_list(a), _sorted_int_list(b), _sorted_int_list(c)
    if av is not None and bv is not None:
        return T if c == _as_num_list_term(sorted(av + bv)) else F
    if cv is not None:
        return F  # inputs are not both sorted lists, so the relation cannot hold
    return I


_EVEN_SIDE = {"even", "e1", "e2", "e3", "e4"}
_ODD_SIDE = {"odd", "o1", "o2", "o3", "o4"}


def _numeral_value(t: Term) -> Optional[int]:
    n = 0
    while isinstance(t, Struct) and t.functor == "s" and len(t.args) == 1:
        n += 1
        t = t.args[0]
    if isinstance(t, Num) and t.value == 0:
        return n
    return None


def spec_even_odd_numerals(atom: Struct) -> TV:
    """Parity of successor numerals; anything else is inadmissible."""
    n = _numeral_value(atom.args[0])
    if n is None:
        return I
    if atom.functor in _EVEN_SIDE:
        return T if n % 2 == 0 else F
    if atom.functor in _ODD_SIDE:
        return T if n % 2 == 1 else F
    raise InterpretationError("even_odd_numerals does not cover %s" % atom.functor)


def spec_member_listsecond(atom: Struct) -> TV:
    """member(X,L): admissible when L is a list; true iff X occurs in it."""
    x, l = atom.args
    items = as_list(l)
    if items is None:
        return I
    return T if any(item == x for item in items) else F


def spec_subset_lists(atom: Struct) -> TV:
    """subset / notsubset over lists; inadmissible unless both are lists."""
    l, m_ = atom.args
    li, mi = as_list(l), as_list(m_)
    if li is None or mi is None:
        return I
    missing = any(x not in mi for x in li)
    if atom.functor == "subset":
        return F if missing else T
    if atom.functor == "notsubset":
        return T if missing else F
    raise InterpretationError("subset_lists does not cover %s" % atom.functor)


def spec_subs_dupfree(atom: Struct) -> TV:
    """subs(L,M): admissible when M is a list; true iff L is a duplicate
    free list whose elements all occur in M."""
    l, m_ = atom.args
    mi = as_list(m_)
    if mi is None:
        return I
    li = as_list(l)
    if li is None:
        return F
    seen = []
    for x in li:
        if x in seen or x not in mi:
            return F
        seen.append(x)
    return T


def spec_select_listsecond(atom: Struct) -> TV:
    """select(E,L,M): admissible when L is a list; true iff deleting one
    occurrence of E from L yields M."""
    e, l, m_ = atom.args
    li = as_list(l)
    if li is None:
        return I
    for i, x in enumerate(li):
        if x == e and m_ == mklist(li[:i] + li[i + 1 :]):
            return T
    return F


REGISTRY: Dict[str, Callable[[Struct], TV]] = {
    "merge_sorted_numbers": spec_merge_sorted_numbers,
    "merge_third_sorted": spec_merge_third_sorted,
    "even_odd_numerals": spec_even_odd_numerals,
    "member_listsecond": spec_member_listsecond,
    "subset_lists": spec_subset_lists,
    "subs_dupfree": spec_subs_dupfree,
    "select_listsecond": spec_select_listsecond,
}


def registry_table(spec_name: str) -> SpecTable:
    fn = REGISTRY.get(spec_name)
    if fn is None:
        raise InterpretationError("unknown registry entry %r" % spec_name)
    return SpecTable(spec_name, fn)


# --- file format -------------------------------------------------------------


def parse_universe_line(line: str) -> BoundedUniverse:
    fields = line.split()
    depth = 0
    int_range = None
    functors: list = []
    flat = False
    max_count = None
    for fieldtext in fields:
        if "=" not in fieldtext:
            raise InterpretationError("bad universe field %r" % fieldtext)
        key, value = fieldtext.split("=", 1)
        if key == "depth":
            depth = int(value)
        elif key == "ints":
            lo, hi = value.split("..", 1)
            int_range = (int(lo), int(hi))
        elif key == "functors":
            for part in value.split(","):
                if not part:
                    continue
                name, arity = part.rsplit("/", 1)
                functors.append((name, int(arity)))
        elif key == "lists":
            if value != "flat":
                raise InterpretationError("lists=%s is not supported" % value)
            flat = True
        elif key == "count":
            max_count = int(value)
        else:
            raise InterpretationError("unknown universe field %r" % key)
    return BoundedUniverse(tuple(functors), int_range, depth, max_count, flat)


def load_interpretation(text: str) -> Interpretation3:
    universe: Optional[BoundedUniverse] = None
    tables: Dict[PredKey, object] = {}
    current: Optional[PredKey] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("universe "):
                universe = parse_universe_line(line[len("universe "):])
            elif line.startswith("pred "):
                name, arity = line[len("pred "):].strip().rsplit("/", 1)
                current = (name, int(arity))
                tables[current] = Table(I, {})
            elif line.startswith("default "):
                if current is None:
                    raise InterpretationError("default outside a pred section")
                table = tables[current]
                value = truth.parse_tv(line[len("default "):])
                tables[current] = Table(value, dict(table.atoms))
            elif line.startswith("spec "):
                decl, spec = line[len("spec "):].split("builtin:", 1)
                name, arity = decl.strip().rsplit("/", 1)
                tables[(name, int(arity))] = registry_table(spec.strip())
                current = None
            elif line[0] in "TFI" and line[1:2] == " ":
                if current is None:
                    raise InterpretationError("atom line outside a pred section")
                value = truth.parse_tv(line[0])
                atom_text = line[2:].strip()
                atom = parse_term(atom_text)
                if not isinstance(atom, Struct):
                    raise InterpretationError("expected a ground atom, got %s" % atom_text)
                if (atom.functor, len(atom.args)) != current:
                    raise InterpretationError(
                        "atom %s does not belong to pred %s/%d" % (atom_text, current[0], current[1])
                    )
                if not is_ground(atom):
                    raise InterpretationError("atom %s is not ground" % atom_text)
                table = tables[current]
                table.atoms[atom] = value
                tables[current] = Table(table.default, table.atoms)
            else:
                raise InterpretationError("unrecognized line %r" % line)
        except ValueError as err:
            raise InterpretationError("line %d: %s" % (lineno, err)) from None

    if universe is None:
        raise InterpretationError("missing universe line")
    m = Interpretation3(universe, tables)
    # every explicitly tabled atom must be inside the universe
    for key, table in tables.items():
        if isinstance(table, Table):
            for atom in table.atoms:
                for arg in atom.args:
                    if not universe.contains(arg):
                        raise InterpretationError(
                            "%s is outside the bounded universe (%s)" % (format_term(atom), universe.describe())
                        )
    return m


def save_interpretation(m: Interpretation3) -> str:
    lines = ["universe " + m.universe.describe()]
    for key in sorted(m.tables.keys()):
        table = m.tables[key]
        if isinstance(table, SpecTable):
            lines.append("spec %s/%d builtin:%s" % (key[0], key[1], table.spec_name))
        else:
            lines.append("pred %s/%d" % key)
            lines.append("default %s" % table.default)
            for atom in sorted(table.atoms, key=format_term):
                lines.append("%s %s." % (table.atoms[atom], format_term(atom)))
    return "\n".join(lines) + "\n"


def universe_from_program(program, depth: int = 2) -> BoundedUniverse:
    """Universe built from the functors and constants a program mentions.

    A stand-in for commands that need some universe but were given none;
    real work should declare one.  Programs without any constant get a
    fresh one so compound predicates still have ground instances.
    """
    functors: set = set()
    ints: list = []

    def walk(t: Term) -> None:
        if isinstance(t, Num):
            ints.append(t.value)
        elif isinstance(t, Struct):
            functors.add((t.functor, len(t.args)))
            for sub in t.args:
                walk(sub)

    if not hasattr(program, "clauses") and getattr(program, "source", None) is not None:
        program = program.source
    clauses = program.clauses if hasattr(program, "clauses") else []
    max_arity = 0
    for cl in clauses:
        max_arity = max(max_arity, len(cl.head.args))
        for arg in cl.head.args:
            walk(arg)
        for lit in cl.body:
            max_arity = max(max_arity, len(lit.atom.args))
            for arg in lit.atom.args:
                walk(arg)

    int_range = (min(ints), max(ints)) if ints else None
    has_constant = int_range is not None or any(a == 0 for _, a in functors)
    if not has_constant and (max_arity > 0 or any(a > 0 for _, a in functors)):
        name = next(n for n in ("a", "b", "c", "u1") if (n, 0) not in functors)
        functors.add((name, 0))
    flat = (CONS, 2) in functors
    return BoundedUniverse(tuple(sorted(functors)), int_range, depth, None, flat)
