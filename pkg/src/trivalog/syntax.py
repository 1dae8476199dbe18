"""Reader and printer for pure logic programs.

The accepted language is deliberately small: facts and rules built from
atoms, integers, variables and lists, with `not` for negation and the
two-valued builtins `=`, `=<` and `>`.  Both bracket lists `[H|T]` and
infix dot pairs `H.T` are read; the printer always emits brackets.
Impure constructs (cut, var/1, assert and friends) are rejected with a
position-annotated error, as is anything else the engine could not give
a declarative reading.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .kernel_terms import CONS, NIL, Num, Struct, Term, Var, cons, format_term, mklist

BUILTIN_EQ = "="
BUILTIN_LE = "=<"
BUILTIN_GT = ">"
COMPARISONS = (BUILTIN_LE, BUILTIN_GT)
IMPURE = {"!", "var", "nonvar", "assert", "asserta", "assertz", "retract", "is"}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__("%s (line %d, column %d)" % (message, line, col))
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Literal:
    atom: Struct
    negated: bool = False

    def __repr__(self) -> str:
        return format_literal(self)

    @property
    def pred(self) -> tuple:
        return (self.atom.functor, len(self.atom.args))

    def is_equality(self) -> bool:
        return not self.negated and self.atom.functor == BUILTIN_EQ and len(self.atom.args) == 2

    def is_comparison(self) -> bool:
        return self.atom.functor in COMPARISONS and len(self.atom.args) == 2


@dataclass(frozen=True)
class Clause:
    head: Struct
    body: tuple = ()          # of Literal
    line: int = 0

    def __repr__(self) -> str:
        return format_clause(self)


@dataclass(frozen=True)
class ClausalProgram:
    clauses: tuple = ()
    warnings: tuple = ()

    def predicates(self) -> list:
        seen = []
        for c in self.clauses:
            key = (c.head.functor, len(c.head.args))
            if key not in seen:
                seen.append(key)
        return seen


# --- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[_A-Z][A-Za-z0-9_]*)
  | (?P<neck>:-)
  | (?P<le><=|=<)
  | (?P<punct>[()\[\],|=>.!])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(source: str) -> list:
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if not m:
            raise ParseError("unexpected character %r" % source[pos], line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "ws":
            for i, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        elif kind == "comment":
            pass
        elif kind == "le" and text == "<=":
            raise ParseError("use =< for at-most comparison", line, col)
        else:
            if kind == "punct" and text == ".":
                # A dot followed by layout or end of input closes a clause,
                # otherwise it is the infix pair constructor.
                nxt = source[pos + 1] if pos + 1 < n else ""
                kind = "enddot" if (nxt == "" or nxt.isspace() or nxt == "%") else "dot"
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, n - line_start + 1))
    return tokens


# --- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list):
        self.tokens = tokens
        self.pos = 0
        self.fresh = 0
        self.warnings: list = []

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind and not (kind == "punct" and tok.kind == "punct"):
            raise ParseError("expected %s, found %r" % (what, tok.text or "end of input"), tok.line, tok.col)
        return tok

    def expect_punct(self, text: str):
        tok = self.next()
        if tok.text != text:
            raise ParseError("expected %r, found %r" % (text, tok.text or "end of input"), tok.line, tok.col)

    def fail(self, message: str, tok: Token):
        raise ParseError(message, tok.line, tok.col)

    # terms

    def term(self) -> Term:
        left = self.primary()
        if self.peek().kind == "dot":
            self.next()
            right = self.term()  # right associative: A.B.C == A.(B.C)
            return cons(left, right)
        return left

    def primary(self) -> Term:
        tok = self.next()
        if tok.kind == "int":
            return Num(int(tok.text))
        if tok.kind == "var":
            if tok.text == "_":
                self.fresh += 1
                return Var("_A%d" % self.fresh)
            return Var(tok.text)
        if tok.kind == "name":
            if self.peek().text == "(":
                self.next()
                args = self.term_list()
                self.expect_punct(")")
                return Struct(tok.text, tuple(args))
            return Struct(tok.text)
        if tok.text == "[":
            return self.list_tail()
        if tok.text == "(":
            inner = self.term()
            self.expect_punct(")")
            return inner
        if tok.text == "!":
            self.fail("cut is not part of the pure language", tok)
        self.fail("expected a term, found %r" % (tok.text or "end of input"), tok)

    def term_list(self) -> list:
        items = [self.term()]
        while self.peek().text == ",":
            self.next()
            items.append(self.term())
        return items

    def list_tail(self) -> Term:
        if self.peek().text == "]":
            self.next()
            return NIL
        items = [self.term()]
        while self.peek().text == ",":
            self.next()
            items.append(self.term())
        tail: Term = NIL
        if self.peek().text == "|":
            self.next()
            tail = self.term()
        self.expect_punct("]")
        return mklist(items, tail)

    # literals and clauses

    def literal(self, under_not: bool = False) -> Literal:
        tok = self.peek()
        if tok.kind == "name" and tok.text == "not" and self.tokens[self.pos + 1].text != "(":
            # `not` applied without parentheses: not p(X)
            self.next()
            inner = self.literal(under_not=True)
            if inner.negated:
                self.fail("doubled negation is not supported", tok)
            return Literal(inner.atom, negated=True)
        if tok.kind == "name" and tok.text == "not" and self.tokens[self.pos + 1].text == "(":
            # could be not(p) or not (X =< Y); parse as term then reinterpret
            self.next()
            self.expect_punct("(")
            inner = self.literal(under_not=True)
            self.expect_punct(")")
            if inner.negated:
                self.fail("doubled negation is not supported", tok)
            return Literal(inner.atom, negated=True)

        left = self.term()
        op = self.peek()
        if op.text in (BUILTIN_EQ, BUILTIN_LE, BUILTIN_GT) and op.kind in ("punct", "le"):
            self.next()
            right = self.term()
            atom = Struct(op.text if op.text != "<=" else BUILTIN_LE, (left, right))
            if under_not and atom.functor in COMPARISONS:
                self.warnings.append(
                    "line %d: comparison %s under not; allowed, evaluated two-valued when ground" % (op.line, atom.functor)
                )
            return Literal(atom)
        if isinstance(left, Struct) and left.functor not in (CONS, "[]"):
            if left.functor in IMPURE:
                self.fail("%s/%d is not part of the pure language" % (left.functor, len(left.args)), tok)
            return Literal(left)
        self.fail("expected a predicate call", tok)

    def clause(self) -> Clause:
        tok = self.peek()
        head_lit = self.literal()
        if head_lit.negated or head_lit.is_equality() or head_lit.is_comparison():
            self.fail("clause heads must be plain atoms", tok)
        body: list = []
        nxt = self.next()
        if nxt.kind == "neck":
            body.append(self.literal())
            while self.peek().text == ",":
                self.next()
                body.append(self.literal())
            nxt = self.next()
        if nxt.kind != "enddot":
            self.fail("expected '.' to end the clause, found %r" % (nxt.text or "end of input"), nxt)
        return Clause(head_lit.atom, tuple(body), line=tok.line)

    def program(self) -> ClausalProgram:
        clauses = []
        while self.peek().kind != "eof":
            clauses.append(self.clause())
        return ClausalProgram(tuple(clauses), tuple(self.warnings))

    def goal(self) -> list:
        lits = [self.literal()]
        while self.peek().text == ",":
            self.next()
            lits.append(self.literal())
        tok = self.next()
        if tok.kind not in ("eof", "enddot"):
            self.fail("unexpected input after goal: %r" % tok.text, tok)
        if tok.kind == "enddot" and self.peek().kind != "eof":
            self.fail("a goal is a single conjunction", self.peek())
        return lits


def parse_program(source: str) -> ClausalProgram:
    return _Parser(tokenize(source)).program()


def parse_goal(source: str) -> list:
    """Parse a conjunction of literals, e.g. "merge([1],[2],X)"."""
    return _Parser(tokenize(source)).goal()


def parse_term(source: str) -> Term:
    parser = _Parser(tokenize(source))
    t = parser.term()
    tok = parser.next()
    if tok.kind not in ("eof", "enddot"):
        raise ParseError("unexpected input after term: %r" % tok.text, tok.line, tok.col)
    return t


# --- printing --------------------------------------------------------------


def format_atom(atom: Struct) -> str:
    if atom.functor in (BUILTIN_EQ, BUILTIN_LE, BUILTIN_GT) and len(atom.args) == 2:
        return "%s %s %s" % (format_term(atom.args[0]), atom.functor, format_term(atom.args[1]))
    return format_term(atom)


def format_literal(lit: Literal) -> str:
    body = format_atom(lit.atom)
    if lit.negated:
        if lit.is_comparison():
            return "not (%s)" % body
        return "not %s" % body
    return body


def format_clause(clause: Clause) -> str:
    head = format_atom(clause.head)
    if not clause.body:
        return head + "."
    return "%s :- %s." % (head, ", ".join(format_literal(l) for l in clause.body))


def format_program(program: ClausalProgram) -> str:
    return "\n".join(format_clause(c) for c in program.clauses) + ("\n" if program.clauses else "")
