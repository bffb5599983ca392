"""Term, literal, goal and clause representation plus unification.

Terms are plain Python values where possible: constants are `str`, integers
are `int`, and the structured cases (variables, skolem constants, compounds)
are small named tuples.  Everything is immutable and hashable so terms can
live in sets and serve as dict keys.

Strong negation is carried on the literal (`Lit.pos`); inside a term position
a strong-negated fact is wrapped as a unary compound with functor "~", and
`term_to_lit` / `lit_to_term` convert between the two encodings.
"""

from __future__ import annotations

from typing import Iterator, NamedTuple, Optional, Union


class Var(NamedTuple):
    name: str

    def __repr__(self) -> str:
        return self.name


class Skolem(NamedTuple):
    id: int

    def __repr__(self) -> str:
        return f"sk#{self.id}"


class Struct(NamedTuple):
    functor: str
    args: tuple

    def __repr__(self) -> str:
        inner = ",".join(map(repr, self.args))
        return f"{self.functor}({inner})"


Term = Union[str, int, Var, Skolem, Struct]

NEG_FUNCTOR = "~"


class Lit(NamedTuple):
    """A (possibly strong-negated) predicate applied to terms."""

    pred: str
    args: tuple
    pos: bool = True

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> tuple:
        """Predicate index key: (name, arity, sign)."""
        return (self.pred, len(self.args), self.pos)

    def negate(self) -> "Lit":
        return Lit(self.pred, self.args, not self.pos)

    def __repr__(self) -> str:
        sign = "" if self.pos else NEG_FUNCTOR
        if not self.args:
            return f"{sign}{self.pred}"
        return f"{sign}{self.pred}({','.join(map(repr, self.args))})"


class Naf(NamedTuple):
    """Negation as failure over a goal."""

    goal: "Goal"

    def __repr__(self) -> str:
        return f"not {self.goal!r}"


class Conj(NamedTuple):
    items: tuple

    def __repr__(self) -> str:
        return "(" + ", ".join(map(repr, self.items)) + ")"


class Disj(NamedTuple):
    items: tuple

    def __repr__(self) -> str:
        return "(" + " | ".join(map(repr, self.items)) + ")"


class Builtin(NamedTuple):
    """Comparison or unification builtin: lhs OP rhs.

    op is one of "=", "\\==", "<", ">", "=<", ">=".  The rhs may be an
    arithmetic expression tree built from "+"/"-" compounds over integers.
    """

    op: str
    lhs: Term
    rhs: Term

    def __repr__(self) -> str:
        return f"{self.lhs!r}{self.op}{self.rhs!r}"


Goal = Union[Lit, Naf, Conj, Disj, Builtin]


class Clause(NamedTuple):
    head: Lit
    body: tuple  # tuple of Goal, conjunction implied; () for facts
    priority: Optional[int] = None
    source: Optional[str] = None

    @property
    def is_fact(self) -> bool:
        return not self.body


# ---------------------------------------------------------------------------
# Substitutions and unification
# ---------------------------------------------------------------------------


def walk(term: Term, bind: dict) -> Term:
    """Follow variable bindings until a non-variable or free variable."""
    while isinstance(term, Var):
        bound = bind.get(term)
        if bound is None:
            return term
        term = bound
    return term


def resolve(term: Term, bind: dict) -> Term:
    """Deep-apply bindings through the whole term."""
    term = walk(term, bind)
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(resolve(a, bind) for a in term.args))
    return term


def occurs(var: Var, term: Term, bind: dict) -> bool:
    term = walk(term, bind)
    if term == var:
        return True
    if isinstance(term, Struct):
        return any(occurs(var, a, bind) for a in term.args)
    return False


def unify_terms(a: Term, b: Term, bind: dict, trail: list) -> bool:
    """Unify with occurs check, extending bind in place.

    New bindings are pushed onto trail so callers can undo on backtrack.
    Skolem constants behave as fresh constants: a skolem unifies only with
    itself or with a variable.
    """
    a = walk(a, bind)
    b = walk(b, bind)
    if a == b:
        return True
    if isinstance(a, Var):
        if occurs(a, b, bind):
            return False
        bind[a] = b
        trail.append(a)
        return True
    if isinstance(b, Var):
        if occurs(b, a, bind):
            return False
        bind[b] = a
        trail.append(b)
        return True
    if isinstance(a, Struct) and isinstance(b, Struct):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return False
        for x, y in zip(a.args, b.args):
            if not unify_terms(x, y, bind, trail):
                return False
        return True
    return False


def undo(bind: dict, trail: list, mark: int) -> None:
    while len(trail) > mark:
        del bind[trail.pop()]


class Subst:
    """An immutable substitution snapshot.

    apply() resolves bindings all the way down, so applying a Subst twice
    yields the same result as applying it once.
    """

    __slots__ = ("_map",)

    def __init__(self, mapping: dict):
        self._map = dict(mapping)

    def apply(self, term: Term) -> Term:
        return resolve(term, self._map)

    def apply_lit(self, lit: Lit) -> Lit:
        return Lit(lit.pred, tuple(resolve(a, self._map) for a in lit.args), lit.pos)

    def apply_goal(self, goal: Goal) -> Goal:
        return subst_goal(goal, self._map)

    def get(self, var: Var) -> Optional[Term]:
        return self._map.get(var)

    def items(self):
        return self._map.items()

    def as_dict(self) -> dict:
        return dict(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subst) and self._map == other._map

    def __repr__(self) -> str:
        inner = ", ".join(f"{k!r}={v!r}" for k, v in sorted(self._map.items()))
        return "{" + inner + "}"


EMPTY_SUBST = Subst({})


def unify(a: Term, b: Term) -> Optional[Subst]:
    """Public most-general-unifier over two terms, or None."""
    bind: dict = {}
    if unify_terms(a, b, bind, []):
        return Subst({v: resolve(t, bind) for v, t in bind.items()})
    return None


def unify_lits(a: Lit, b: Lit) -> Optional[Subst]:
    if a.pred != b.pred or len(a.args) != len(b.args) or a.pos != b.pos:
        return None
    return unify(Struct(a.pred, a.args), Struct(b.pred, b.args))


def subst_goal(goal: Goal, bind: dict) -> Goal:
    if isinstance(goal, Lit):
        return Lit(goal.pred, tuple(resolve(a, bind) for a in goal.args), goal.pos)
    if isinstance(goal, Naf):
        return Naf(subst_goal(goal.goal, bind))
    if isinstance(goal, Conj):
        return Conj(tuple(subst_goal(g, bind) for g in goal.items))
    if isinstance(goal, Disj):
        return Disj(tuple(subst_goal(g, bind) for g in goal.items))
    if isinstance(goal, Builtin):
        return Builtin(goal.op, resolve(goal.lhs, bind), resolve(goal.rhs, bind))
    raise TypeError(f"not a goal: {goal!r}")


# ---------------------------------------------------------------------------
# Inspection helpers
# ---------------------------------------------------------------------------


def term_vars(term: Term) -> Iterator[Var]:
    if isinstance(term, Var):
        yield term
    elif isinstance(term, Struct):
        for a in term.args:
            yield from term_vars(a)


def lit_vars(lit: Lit) -> Iterator[Var]:
    for a in lit.args:
        yield from term_vars(a)


def goal_vars(goal: Goal) -> Iterator[Var]:
    if isinstance(goal, Lit):
        yield from lit_vars(goal)
    elif isinstance(goal, Naf):
        yield from goal_vars(goal.goal)
    elif isinstance(goal, (Conj, Disj)):
        for g in goal.items:
            yield from goal_vars(g)
    elif isinstance(goal, Builtin):
        yield from term_vars(goal.lhs)
        yield from term_vars(goal.rhs)


def term_skolems(term: Term) -> Iterator[Skolem]:
    if isinstance(term, Skolem):
        yield term
    elif isinstance(term, Struct):
        for a in term.args:
            yield from term_skolems(a)


def lit_skolems(lit: Lit) -> Iterator[Skolem]:
    for a in lit.args:
        yield from term_skolems(a)


def is_ground(term: Term) -> bool:
    """Ground means variable-free; skolem constants count as ground."""
    if isinstance(term, Var):
        return False
    if isinstance(term, Struct):
        return all(is_ground(a) for a in term.args)
    return True


def lit_is_ground(lit: Lit) -> bool:
    return all(is_ground(a) for a in lit.args)


def goal_is_ground(goal: Goal) -> bool:
    return not any(True for _ in goal_vars(goal))


# ---------------------------------------------------------------------------
# Literal <-> term conversion (for knows/2 and abducible/1 payloads)
# ---------------------------------------------------------------------------


def term_to_lit(term: Term) -> Lit:
    """Read a term as a literal; a "~"/1 wrapper flips the sign."""
    pos = True
    while isinstance(term, Struct) and term.functor == NEG_FUNCTOR and len(term.args) == 1:
        pos = not pos
        term = term.args[0]
    if isinstance(term, Struct):
        return Lit(term.functor, term.args, pos)
    if isinstance(term, str):
        return Lit(term, (), pos)
    raise TypeError(f"term does not encode a literal: {term!r}")


def lit_to_term(lit: Lit) -> Term:
    base: Term = Struct(lit.pred, lit.args) if lit.args else lit.pred
    return base if lit.pos else Struct(NEG_FUNCTOR, (base,))


# ---------------------------------------------------------------------------
# Canonical ordering
# ---------------------------------------------------------------------------


def term_key(term: Term) -> tuple:
    if isinstance(term, int):
        return ("i", term)
    if isinstance(term, str):
        return ("c", term)
    if isinstance(term, Skolem):
        return ("s", term.id)
    if isinstance(term, Var):
        return ("v", term.name)
    return ("f", term.functor, tuple(term_key(a) for a in term.args))


def lit_key(lit: Lit) -> tuple:
    return (lit.pred, len(lit.args), not lit.pos, tuple(term_key(a) for a in lit.args))


# ---------------------------------------------------------------------------
# Rendering in rule-language syntax
# ---------------------------------------------------------------------------


def term_text(term: Term) -> str:
    if isinstance(term, Struct):
        if term.functor in ("+", "-") and len(term.args) == 2:
            return f"{term_text(term.args[0])}{term.functor}{term_text(term.args[1])}"
        if term.functor == NEG_FUNCTOR and len(term.args) == 1:
            return f"~{term_text(term.args[0])}"
        return f"{term.functor}({','.join(term_text(a) for a in term.args)})"
    if isinstance(term, Skolem):
        return f"sk#{term.id}"
    if isinstance(term, Var):
        return term.name
    return str(term)


def lit_text(lit: Lit) -> str:
    sign = "" if lit.pos else "~"
    if not lit.args:
        return f"{sign}{lit.pred}"
    return f"{sign}{lit.pred}({','.join(term_text(a) for a in lit.args)})"


def goal_text(goal: Goal) -> str:
    if isinstance(goal, Lit):
        return lit_text(goal)
    if isinstance(goal, Naf):
        return f"not {goal_text(goal.goal)}"
    if isinstance(goal, Conj):
        return "(" + ", ".join(goal_text(g) for g in goal.items) + ")"
    if isinstance(goal, Disj):
        return "(" + " | ".join(goal_text(g) for g in goal.items) + ")"
    if isinstance(goal, Builtin):
        return f"{term_text(goal.lhs)}{goal.op}{term_text(goal.rhs)}"
    raise TypeError(f"not a goal: {goal!r}")


def clause_text(clause: Clause) -> str:
    head = lit_text(clause.head)
    annots = []
    if clause.priority is not None:
        annots.append(f"priority({clause.priority})")
    if clause.source is not None:
        annots.append(f"source({clause.source})")
    if annots:
        head += " [" + ", ".join(annots) + "]"
    if not clause.body:
        return head + "."
    return head + " :- " + ", ".join(goal_text(g) for g in clause.body) + "."
