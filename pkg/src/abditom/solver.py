"""SLDNF resolution over a knowledge base.

Goals are selected left to right and clauses tried in the order they were
loaded, with chronological backtracking, so solution order is deterministic.
Negation as failure requires its goal to be ground when reached (skolem
constants count as ground) and raises FlounderedNaf otherwise.  Resolution
depth is capped; exceeding the cap raises DepthExceeded rather than looping
forever on left-recursive programs.

Builtins: "=" unifies, evaluating the right side first when it contains
+/- arithmetic; "\\==" is syntactic disequality over ground operands; the
four comparisons evaluate both sides as integer arithmetic.

Ground facts are resolved by positional matching against bare argument
tuples (see KnowledgeBase.resolution_entries); only rule clauses pay for
variable renaming.  The abductive and widening engines in sibling modules
subclass the engine base here so they share that fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from typing import Dict, Iterable, Iterator, Optional

from .errors import BuiltinTypeError, DepthExceeded, FlounderedNaf, NonGroundBuiltin
from .terms import (
    Builtin,
    Clause,
    Conj,
    Disj,
    Goal,
    Lit,
    Naf,
    Skolem,
    Struct,
    Subst,
    Term,
    Var,
    goal_vars,
    is_ground,
    lit_is_ground,
    resolve,
    subst_goal,
    undo,
    unify_terms,
    walk,
)

DEFAULT_MAX_DEPTH = 10_000


@dataclass(frozen=True)
class SolveLimits:
    max_depth: int = DEFAULT_MAX_DEPTH


_DEFAULT_LIMITS = SolveLimits()

# Per-clause variable lists, computed once; clauses are immutable.
_clause_vars_cache: Dict[Clause, tuple] = {}


def _clause_vars(clause: Clause) -> tuple:
    cached = _clause_vars_cache.get(clause)
    if cached is None:
        seen = dict.fromkeys(_term_vars_of_clause(clause))
        cached = tuple(seen)
        _clause_vars_cache[clause] = cached
    return cached


def _term_vars_of_clause(clause: Clause):
    for a in clause.head.args:
        yield from _term_vars(a)
    for g in clause.body:
        yield from goal_vars(g)


def _term_vars(term: Term):
    if isinstance(term, Var):
        yield term
    elif isinstance(term, Struct):
        for a in term.args:
            yield from _term_vars(a)


def _rename_term(term: Term, mapping: dict) -> Term:
    if isinstance(term, Var):
        return mapping.get(term, term)
    if isinstance(term, Struct):
        return Struct(term.functor, tuple(_rename_term(a, mapping) for a in term.args))
    return term


def _rename_goal(goal: Goal, mapping: dict) -> Goal:
    if isinstance(goal, Lit):
        return Lit(goal.pred, tuple(_rename_term(a, mapping) for a in goal.args), goal.pos)
    if isinstance(goal, Naf):
        return Naf(_rename_goal(goal.goal, mapping))
    if isinstance(goal, Conj):
        return Conj(tuple(_rename_goal(g, mapping) for g in goal.items))
    if isinstance(goal, Disj):
        return Disj(tuple(_rename_goal(g, mapping) for g in goal.items))
    if isinstance(goal, Builtin):
        return Builtin(goal.op, _rename_term(goal.lhs, mapping), _rename_term(goal.rhs, mapping))
    raise TypeError(f"not a goal: {goal!r}")


class _EngineBase:
    """Shared resolution machinery: goal dispatch plus kb entry matching."""

    __slots__ = ("kb", "bind", "trail", "fresh")

    def __init__(self, kb):
        self.kb = kb
        self.bind: dict = {}
        self.trail: list = []
        self.fresh = count(1)

    def solve_goal(self, goal: Goal, depth: int) -> Iterator[None]:
        if isinstance(goal, Lit):
            yield from self.solve_lit(goal, depth)
        elif isinstance(goal, Conj):
            yield from self.solve_seq(goal.items, 0, depth)
        elif isinstance(goal, Disj):
            for item in goal.items:
                yield from self.solve_goal(item, depth)
        elif isinstance(goal, Naf):
            yield from self.solve_naf(goal, depth)
        elif isinstance(goal, Builtin):
            yield from self.solve_builtin(goal)
        else:
            raise TypeError(f"not a goal: {goal!r}")

    def solve_seq(self, items: tuple, i: int, depth: int) -> Iterator[None]:
        if i == len(items):
            yield None
            return
        for _ in self.solve_goal(items[i], depth):
            yield from self.solve_seq(items, i + 1, depth)

    def _kb_entries(self, current: Lit, depth: int) -> Iterator[None]:
        """One solution per matching kb entry, in load order."""
        bind = self.bind
        trail = self.trail
        goal_args = current.args
        mark = len(trail)
        for entry in self.kb.resolution_entries(current.key):
            if type(entry) is tuple:
                ok = True
                for g, f in zip(goal_args, entry):
                    g = walk(g, bind)
                    if type(g) is Var:
                        bind[g] = f
                        trail.append(g)
                    elif g == f:
                        continue
                    elif isinstance(g, (Struct, Skolem)) or isinstance(f, Struct):
                        if not unify_terms(g, f, bind, trail):
                            ok = False
                            break
                    else:
                        ok = False
                        break
                if ok:
                    yield None
                undo(bind, trail, mark)
            else:
                cvars = _clause_vars(entry)
                if cvars:
                    mapping = {v: Var(f"_R{next(self.fresh)}") for v in cvars}
                    head_args = tuple(_rename_term(a, mapping) for a in entry.head.args)
                else:
                    mapping = None
                    head_args = entry.head.args
                ok = True
                for ca, ga in zip(head_args, goal_args):
                    if not unify_terms(ca, ga, bind, trail):
                        ok = False
                        break
                if ok:
                    if not entry.body:
                        yield None
                    else:
                        body = entry.body
                        if mapping:
                            body = tuple(_rename_goal(g, mapping) for g in body)
                        yield from self.solve_seq(body, 0, depth - 1)
                undo(bind, trail, mark)

    # Subclasses provide solve_lit / solve_naf / solve_builtin.


class _Engine(_EngineBase):
    __slots__ = ("max_depth",)

    def __init__(self, kb, limits: SolveLimits):
        super().__init__(kb)
        self.max_depth = limits.max_depth

    # Each literal resolution step costs one unit of depth.
    def solve_lit(self, goal: Lit, depth: int) -> Iterator[None]:
        if depth <= 0:
            raise DepthExceeded(f"while proving {goal!r}")
        current = Lit(
            goal.pred,
            tuple(resolve(a, self.bind) for a in goal.args),
            goal.pos,
        )
        # Ground goal that is a stored fact: one empty solution suffices.
        if lit_is_ground(current) and self.kb.has_ground_fact(current):
            yield None
            return
        yield from self._kb_entries(current, depth)

    def solve_naf(self, goal: Naf, depth: int) -> Iterator[None]:
        inner = subst_goal(goal.goal, self.bind)
        for _v in goal_vars(inner):
            raise FlounderedNaf(f"non-ground goal under not: {inner!r}")
        mark = len(self.trail)
        proved = False
        for _ in self.solve_goal(inner, depth):
            proved = True
            break
        undo(self.bind, self.trail, mark)
        if not proved:
            yield None

    def solve_builtin(self, goal: Builtin) -> Iterator[None]:
        op = goal.op
        if op == "=":
            rhs = goal.rhs
            if _has_arith(rhs):
                rhs = _eval_arith(resolve(rhs, self.bind))
            mark = len(self.trail)
            if unify_terms(goal.lhs, rhs, self.bind, self.trail):
                yield None
            undo(self.bind, self.trail, mark)
            return
        lhs = resolve(goal.lhs, self.bind)
        rhs = resolve(goal.rhs, self.bind)
        if op == "\\==":
            if not (is_ground(lhs) and is_ground(rhs)):
                raise NonGroundBuiltin(f"{lhs!r} \\== {rhs!r}")
            if lhs != rhs:
                yield None
            return
        a, b = _eval_arith(lhs), _eval_arith(rhs)
        if (
            (op == "<" and a < b)
            or (op == ">" and a > b)
            or (op == "=<" and a <= b)
            or (op == ">=" and a >= b)
        ):
            yield None


def _has_arith(term: Term) -> bool:
    if isinstance(term, Struct):
        if term.functor in ("+", "-") and len(term.args) == 2:
            return True
        return any(_has_arith(a) for a in term.args)
    return False


def _eval_arith(term: Term) -> int:
    if isinstance(term, int):
        return term
    if isinstance(term, Struct) and term.functor in ("+", "-") and len(term.args) == 2:
        a = _eval_arith(term.args[0])
        b = _eval_arith(term.args[1])
        return a + b if term.functor == "+" else a - b
    if isinstance(term, Var):
        raise NonGroundBuiltin(f"unbound variable in arithmetic: {term!r}")
    raise BuiltinTypeError(f"not an integer: {term!r}")


def solve(kb, goal: Goal, limits: SolveLimits = _DEFAULT_LIMITS) -> Iterator[Subst]:
    """Enumerate solutions of goal as substitution snapshots.

    Each yielded Subst binds exactly the variables of the query that got
    values.  The sequence is lazy; consuming it further resumes the search.
    """
    qvars = list(dict.fromkeys(goal_vars(goal)))
    engine = _Engine(kb, limits)
    for _ in engine.solve_goal(goal, limits.max_depth):
        out = {}
        for v in qvars:
            val = resolve(v, engine.bind)
            if val != v:
                out[v] = val
        yield Subst(out)


def entails(kb, goal: Goal, limits: SolveLimits = _DEFAULT_LIMITS) -> bool:
    if isinstance(goal, Lit) and lit_is_ground(goal) and kb.has_ground_fact(goal):
        return True
    for _ in solve(kb, goal, limits):
        return True
    return False


IMP = Lit("imp", ())


def violates_imp(kb, extra: Iterable[Lit], limits: SolveLimits = _DEFAULT_LIMITS) -> bool:
    """True when kb plus the extra facts derives the impossibility marker."""
    return entails(kb.extended(extra), IMP, limits)
