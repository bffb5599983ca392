"""Parser for the rule language.

Grammar (comments run from % to end of line):

    program  :=  clause*
    clause   :=  literal annots? (":-" body)? "."
    body     :=  disj ("," disj)*
    disj     :=  goal ("|" goal)*
    goal     :=  "not" goal  |  "(" body ")"  |  literal  |  builtin
    literal  :=  "~"? name ("(" term ("," term)* ")")?
    builtin  :=  term ("=" | "\\==" | "<" | ">" | "=<" | ">=") expr
    expr     :=  term (("+" | "-") term)*
    annots   :=  "[" annot ("," annot)* "]"     annot := priority(int) | source(name)

Variables start with an uppercase letter or underscore; each bare "_" is a
fresh anonymous variable.  "~" marks strong negation and is also accepted
inside term positions, where it wraps its argument in a "~"/1 compound.
"""

from __future__ import annotations

from typing import Iterator, List, Optional, Tuple

from .errors import AbduciblePredicateConflict, ParseError, TomRestrictionViolated
from .terms import (
    Builtin,
    Clause,
    Conj,
    Disj,
    Goal,
    Lit,
    Naf,
    Struct,
    Term,
    Var,
    term_to_lit,
)

_PUNCT = (":-", "\\==", "=<", ">=", "=", "<", ">", "(", ")", "[", "]", ",", ".", "|", "~", "+", "-")
_BUILTIN_OPS = ("=", "\\==", "<", ">", "=<", ">=")


class _Token(Tuple[str, str, int, int]):
    __slots__ = ()

    @property
    def kind(self):
        return self[0]

    @property
    def value(self):
        return self[1]

    @property
    def line(self):
        return self[2]

    @property
    def col(self):
        return self[3]


def _tokenize(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "%":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and text[i].isdigit():
                i += 1
            tok = _Token(("int", text[start:i], line, col))
            col += i - start
            yield tok
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
            word = text[start:i]
            kind = "var" if (word[0].isupper() or word[0] == "_") else "name"
            tok = _Token((kind, word, line, col))
            col += i - start
            yield tok
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                yield _Token(("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(line, col, f"a token (got {ch!r})")
    yield _Token(("eof", "", line, col))


class _Parser:
    def __init__(self, text: str):
        self.tokens: List[_Token] = list(_tokenize(text))
        self.pos = 0
        self.fresh_anon = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> _Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != value:
            raise ParseError(tok.line, tok.col, f'"{value}"')
        return self.next()

    def at_punct(self, *values: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.value in values

    # -- terms --------------------------------------------------------------

    def parse_term(self) -> Term:
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "~":
            self.next()
            return Struct("~", (self.parse_term(),))
        if tok.kind == "int":
            self.next()
            return int(tok.value)
        if tok.kind == "var":
            self.next()
            if tok.value == "_":
                self.fresh_anon += 1
                return Var(f"_Anon{self.fresh_anon}")
            return Var(tok.value)
        if tok.kind == "name":
            self.next()
            if self.at_punct("("):
                self.next()
                args = [self.parse_term()]
                while self.at_punct(","):
                    self.next()
                    args.append(self.parse_term())
                self.expect(")")
                return Struct(tok.value, tuple(args))
            return tok.value
        raise ParseError(tok.line, tok.col, "a term")

    def parse_expr(self) -> Term:
        left = self.parse_term()
        while self.at_punct("+", "-"):
            op = self.next().value
            right = self.parse_term()
            left = Struct(op, (left, right))
        return left

    # -- goals --------------------------------------------------------------

    def parse_goal(self) -> Goal:
        tok = self.peek()
        if tok.kind == "name" and tok.value == "not":
            self.next()
            return Naf(self.parse_goal())
        if self.at_punct("("):
            self.next()
            inner = self.parse_body()
            self.expect(")")
            return inner if len(inner.items) > 1 else inner.items[0]
        term = self.parse_term()
        if self.at_punct(*_BUILTIN_OPS):
            op = self.next().value
            rhs = self.parse_expr()
            return Builtin(op, term, rhs)
        try:
            return term_to_lit(term)
        except TypeError:
            raise ParseError(tok.line, tok.col, "a literal or builtin") from None

    def parse_disj(self) -> Goal:
        first = self.parse_goal()
        if not self.at_punct("|"):
            return first
        items = [first]
        while self.at_punct("|"):
            self.next()
            items.append(self.parse_goal())
        return Disj(tuple(items))

    def parse_body(self) -> Conj:
        items = [self.parse_disj()]
        while self.at_punct(","):
            self.next()
            items.append(self.parse_disj())
        return Conj(tuple(items))

    # -- clauses ------------------------------------------------------------

    def parse_head(self) -> Lit:
        tok = self.peek()
        neg = False
        if self.at_punct("~"):
            self.next()
            neg = True
        tok = self.peek()
        if tok.kind != "name":
            raise ParseError(tok.line, tok.col, "a predicate name")
        self.next()
        args: tuple = ()
        if self.at_punct("("):
            self.next()
            lst = [self.parse_term()]
            while self.at_punct(","):
                self.next()
                lst.append(self.parse_term())
            self.expect(")")
            args = tuple(lst)
        return Lit(tok.value, args, not neg)

    def parse_annots(self) -> Tuple[Optional[int], Optional[str]]:
        priority: Optional[int] = None
        source: Optional[str] = None
        self.expect("[")
        while True:
            tok = self.peek()
            if tok.kind != "name" or tok.value not in ("priority", "source"):
                raise ParseError(tok.line, tok.col, "priority(...) or source(...)")
            name = self.next().value
            self.expect("(")
            arg = self.peek()
            if name == "priority":
                if arg.kind != "int":
                    raise ParseError(arg.line, arg.col, "an integer priority")
                priority = int(self.next().value)
            else:
                if arg.kind != "name":
                    raise ParseError(arg.line, arg.col, "a source name")
                source = self.next().value
            self.expect(")")
            if self.at_punct("]"):
                self.next()
                return priority, source
            self.expect(",")

    def parse_clause(self) -> Clause:
        head = self.parse_head()
        priority, source = (None, None)
        if self.at_punct("["):
            priority, source = self.parse_annots()
        body: tuple = ()
        if self.at_punct(":-"):
            self.next()
            body = self.parse_body().items
        self.expect(".")
        return Clause(head, body, priority, source)

    def parse_program(self) -> List[Clause]:
        clauses = []
        while self.peek().kind != "eof":
            clauses.append(self.parse_clause())
        return clauses


def _positive_literal_goals(goals) -> Iterator[Lit]:
    """Literal goals not guarded by negation-as-failure."""
    for g in goals:
        if isinstance(g, Lit):
            yield g
        elif isinstance(g, (Conj, Disj)):
            yield from _positive_literal_goals(g.items)


def check_tom_restriction(clause: Clause) -> None:
    """knows(Ag, F) :- Body requires F to recur as a goal of Body.

    The fact argument must therefore be something the owner of the program
    can itself establish; knows/2 can never smuggle in new object-level
    facts.  Occurrence under "not" does not count.
    """
    if clause.head.key != ("knows", 2, True):
        return
    try:
        fact = term_to_lit(clause.head.args[1])
    except TypeError:
        raise TomRestrictionViolated(f"knows/2 fact argument is not a literal: {clause!r}")
    for lit in _positive_literal_goals(clause.body):
        if lit == fact:
            return
    raise TomRestrictionViolated(
        f"fact {fact!r} does not occur in the body of: {clause!r}"
    )


def check_abducible_conflicts(clauses) -> None:
    """No declared abducible predicate may head an ordinary clause."""
    inner_keys = set()
    for c in clauses:
        if c.head.key == ("abducible", 1, True):
            try:
                inner_keys.add(term_to_lit(c.head.args[0]).key)
            except TypeError:
                continue
    if not inner_keys:
        return
    for c in clauses:
        if c.head.key == ("abducible", 1, True):
            continue
        if c.head.key in inner_keys:
            raise AbduciblePredicateConflict(c.head.pred)


def parse_program(text: str) -> List[Clause]:
    """Parse a whole source text, validating knows/2 and abducible/1 use."""
    clauses = _Parser(text).parse_program()
    for c in clauses:
        check_tom_restriction(c)
    check_abducible_conflicts(clauses)
    return clauses


def parse_clause(text: str) -> Clause:
    """Parse exactly one clause (convenience for tests and diagnostics)."""
    clauses = parse_program(text)
    if len(clauses) != 1:
        raise ValueError(f"expected exactly one clause, got {len(clauses)}")
    return clauses[0]
