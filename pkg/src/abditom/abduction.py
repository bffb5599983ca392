"""Abductive query answering.

An abductive theory is the knowledge base plus a set of ground candidate
literals (the abducibles).  abduce() runs SLDNF resolution in which a
positive or strong-negated subgoal may, besides resolving against program
clauses and previously assumed facts, be satisfied by assuming an abducible
it unifies with.  The assumptions gathered along a successful derivation
form one candidate explanation.

Candidates then pass four filters: negation-as-failure goals that were
checked mid-derivation are re-checked against the final assumption set (a
later assumption may have broken an earlier "not"); assumption sets that
make the impossibility marker derivable are dropped; duplicates are merged;
and any strict superset of another surviving explanation is dropped.  The
result is deterministic: explanations are returned in lexicographic order
of their canonically sorted literals.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from .errors import (
    DepthExceeded,
    ExplanationLimitExceeded,
    FlounderedNaf,
    NonGroundAbducible,
)
from .solver import SolveLimits, _Engine, entails, violates_imp
from .terms import (
    Goal,
    Lit,
    Naf,
    Var,
    goal_vars,
    lit_is_ground,
    lit_key,
    resolve,
    subst_goal,
    term_to_lit,
    undo,
    unify_terms,
)

Explanation = FrozenSet[Lit]


@dataclass(frozen=True)
class AbduceLimits:
    max_depth: int = 10_000
    max_candidates: int = 10_000


_DEFAULT_LIMITS = AbduceLimits()


class AbducibleSet:
    """Ground literals an agent may assume, with a per-predicate index."""

    __slots__ = ("members", "_member_set", "_by_key")

    def __init__(self, members: Sequence[Lit]):
        ordered = sorted(set(members), key=lit_key)
        self.members: Tuple[Lit, ...] = tuple(ordered)
        self._member_set = frozenset(ordered)
        self._by_key: Dict[tuple, List[Lit]] = {}
        for lit in ordered:
            self._by_key.setdefault(lit.key, []).append(lit)

    def __contains__(self, lit: Lit) -> bool:
        return lit in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def members_for(self, key: tuple) -> Sequence[Lit]:
        return self._by_key.get(key, ())

    def keys(self):
        return self._by_key.keys()


def abducible_set(kb, limits: Optional[SolveLimits] = None) -> AbducibleSet:
    """All ground facts F with kb |= abducible(F)."""
    from .solver import solve  # local import keeps module load order simple

    fvar = Var("AbducibleFact")
    query = Lit("abducible", (fvar,))
    found: List[Lit] = []
    for sol in solve(kb, query, limits or SolveLimits()):
        term = sol.get(fvar)
        if term is None:
            raise NonGroundAbducible("abducible/1 yielded an unbound fact")
        lit = term_to_lit(term)
        if not lit_is_ground(lit):
            raise NonGroundAbducible(f"abducible fact is not ground: {lit!r}")
        found.append(lit)
    return AbducibleSet(found)


class _AbductiveEngine(_Engine):
    """SLDNF with an assumption branch for abducible subgoals.

    Inherits clause resolution and builtins; a literal that resolution
    cannot close may instead match an already-assumed fact or, failing
    that, a fresh abducible, growing the assumption set delta.
    """

    __slots__ = ("abducibles", "delta", "nafs", "violates")

    def __init__(self, kb, abducibles: AbducibleSet, max_depth: int,
                 violates=violates_imp):
        super().__init__(kb, SolveLimits(max_depth=max_depth))
        self.abducibles = abducibles
        self.delta: List[Lit] = []
        self.nafs: List[Goal] = []
        self.violates = violates

    def solve_lit(self, goal: Lit, depth: int) -> Iterator[None]:
        if depth <= 0:
            raise DepthExceeded(f"while abducing {goal!r}")
        current = Lit(goal.pred, tuple(resolve(a, self.bind) for a in goal.args), goal.pos)
        if lit_is_ground(current) and self.kb.has_ground_fact(current):
            # Already known: assuming it anyway could only produce a
            # superset explanation, which minimality would drop.
            yield None
            return
        yield from self._kb_entries(current, depth)
        mark = len(self.trail)
        key = current.key
        # Facts already assumed on this branch.
        for lit in list(self.delta):
            if lit.key != key:
                continue
            if self._unify_lit(current, lit):
                yield None
            undo(self.bind, self.trail, mark)
        # Fresh assumptions.
        for cand in self.abducibles.members_for(key):
            if cand in self.delta:
                continue
            if self._unify_lit(current, cand):
                # Early consistency pruning; sound because the shipped imp
                # bodies are monotone in added facts.
                if not self.violates(self.kb, self.delta + [cand]):
                    self.delta.append(cand)
                    yield None
                    self.delta.pop()
            undo(self.bind, self.trail, mark)

    def _unify_lit(self, goal: Lit, fact: Lit) -> bool:
        for ga, fa in zip(goal.args, fact.args):
            if not unify_terms(ga, fa, self.bind, self.trail):
                return False
        return True

    def solve_naf(self, goal: Naf, depth: int) -> Iterator[None]:
        inner = subst_goal(goal.goal, self.bind)
        for _v in goal_vars(inner):
            raise FlounderedNaf(f"non-ground goal under not: {inner!r}")
        # The inner proof may use current assumptions but never add new ones.
        view = self.kb.extended(self.delta)
        if not entails(view, inner, SolveLimits(max_depth=depth)):
            self.nafs.append(inner)
            yield None
            self.nafs.pop()


def abduce(
    kb,
    abducibles: AbducibleSet,
    query: Goal,
    limits: AbduceLimits = _DEFAULT_LIMITS,
    violates=violates_imp,
) -> List[Explanation]:
    """Minimal consistent explanations for query from the abducibles.

    violates may be swapped for a checker specialised to the installed
    ruleset; it must agree with the default on whether kb plus a set of
    ground facts derives the impossibility marker.
    """
    engine = _AbductiveEngine(kb, abducibles, limits.max_depth, violates)
    candidates: List[Tuple[FrozenSet[Lit], Tuple[Goal, ...]]] = []
    for _ in engine.solve_goal(query, limits.max_depth):
        candidates.append((frozenset(engine.delta), tuple(engine.nafs)))
        if len(candidates) > limits.max_candidates:
            raise ExplanationLimitExceeded(f"more than {limits.max_candidates} candidates")

    survivors: List[Explanation] = []
    seen = set()
    for delta, nafs in candidates:
        if delta in seen:
            continue
        # Assumptions added after a "not" was checked may have broken it.
        view = kb.extended(delta)
        if any(entails(view, g) for g in nafs):
            continue
        if violates(kb, delta):
            continue
        seen.add(delta)
        survivors.append(delta)

    # Subset minimality among survivors.
    survivors.sort(key=len)
    minimal: List[Explanation] = []
    for delta in survivors:
        if not any(kept < delta for kept in minimal):
            minimal.append(delta)

    minimal.sort(key=lambda d: tuple(sorted(lit_key(l) for l in d)))
    return minimal


def explanation_text(delta: Explanation) -> str:
    from .terms import lit_text

    return "{" + ", ".join(lit_text(l) for l in sorted(delta, key=lit_key)) + "}"
