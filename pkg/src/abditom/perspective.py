"""Building another agent's reasoning program from one's own.

shift_perspective asks the source program what a target agent knows, via
the knows/2 predicate, and assembles a fresh program for the target: every
derived knows(target, F) fact becomes a percept fact of the target, and the
shared rule base (everything except the source's private percepts, private
constraint conclusions, and assumptions) is copied across.  Static ontology
facts such as player rosters are shared too.

Chained shifts model nested attribution: shift_chain(kb, ["b", "c"]) builds
what the owner thinks b thinks c's program is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import NonGroundKnowledge
from .kb import KnowledgeBase
from .solver import SolveLimits, solve
from .terms import Lit, Var, is_ground, term_to_lit

_PRIVATE_TAGS = frozenset(("percept", "aic", "assumed"))


@dataclass(frozen=True)
class PerspectiveProgram:
    kb: KnowledgeBase
    provenance: Tuple[str, ...]  # chain of owners, source first


def shift_perspective(
    kb,
    target: str,
    limits: Optional[SolveLimits] = None,
    _provenance: Optional[Tuple[str, ...]] = None,
) -> PerspectiveProgram:
    """Program attributed to target, from the owner's point of view."""
    fvar = Var("KnownFact")
    query = Lit("knows", (target, fvar))
    facts: List[Lit] = []
    seen = set()
    for sol in solve(kb, query, limits or SolveLimits()):
        term = sol.get(fvar)
        if term is None or not is_ground(term):
            raise NonGroundKnowledge(f"knows({target}, F) derived non-ground F: {term!r}")
        lit = term_to_lit(term)
        if lit not in seen:
            seen.add(lit)
            facts.append(lit)

    shifted = KnowledgeBase(owner=target)
    for clause, tag in kb.all_entries():
        if tag in _PRIVATE_TAGS:
            continue
        if clause.is_fact and tag != "ontology":
            continue
        shifted.assert_clause(clause, tag)
    for lit in facts:
        shifted.assert_fact(lit, tag="percept")

    owner = getattr(kb, "owner", None) or "?"
    chain = (_provenance or (owner,)) + (target,)
    return PerspectiveProgram(kb=shifted, provenance=chain)


def shift_chain(
    kb,
    targets: Sequence[str],
    limits: Optional[SolveLimits] = None,
) -> PerspectiveProgram:
    """Fold shift_perspective along a sequence of attribution targets."""
    if not targets:
        raise ValueError("shift_chain needs at least one target")
    current = kb
    chain: Optional[Tuple[str, ...]] = None
    result: Optional[PerspectiveProgram] = None
    for target in targets:
        result = shift_perspective(current, target, limits, _provenance=chain)
        current = result.kb
        chain = result.provenance
    assert result is not None
    return result
