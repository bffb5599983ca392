"""Turning explanations into standing integrity constraints.

After abducing why a teammate acted, the observer keeps the disjunction of
surviving explanations as a constraint: at least one of them must be true.
The constraint is stored as a program clause for the impossibility marker,

    imp :- <E1 refuted>, <E2 refuted>, ..., <En refuted>.

where an explanation counts as refuted when at least one of its literals
has a derivable strong negation.  The clause therefore makes imp derivable
exactly when every explanation has been contradicted, which the action
selector treats as an inconsistent completion and prunes.

refine() is applied before installation whenever the observer's knowledge
has moved on since abduction: literals that are now known are removed, and
explanations that are now impossible are dropped.  If some explanation is
entirely entailed the observation is already accounted for and nothing is
installed.  update_aics() retracts constraints that later observations
made vacuous the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from .errors import EmptyDnf
from .solver import IMP, entails, violates_imp
from .terms import Clause, Disj, Goal, Lit, lit_key, lit_text

Explanation = FrozenSet[Lit]

_SLOT_PREDS = frozenset(("has_card_colour", "has_card_rank"))


@dataclass
class AicRecord:
    seq: int
    origin: str
    dnf: Tuple[Tuple[Lit, ...], ...]  # canonical: disjuncts sorted, literals sorted
    clause: Clause


def _canon_disjunct(delta: Iterable[Lit]) -> Tuple[Lit, ...]:
    return tuple(sorted(delta, key=lit_key))


def _canon_dnf(explanations: Sequence[Iterable[Lit]]) -> Tuple[Tuple[Lit, ...], ...]:
    return tuple(sorted((_canon_disjunct(d) for d in explanations),
                        key=lambda d: tuple(lit_key(l) for l in d)))


def refine(kb, explanations: Sequence[Explanation],
           violates=violates_imp) -> List[Explanation]:
    """Re-ground raw explanations against the observer's current knowledge."""
    out: List[Explanation] = []
    seen = set()
    for delta in explanations:
        remaining = frozenset(l for l in delta if not entails(kb, l))
        if not remaining:
            # Fully entailed: the action is already explained, so a
            # disjunction over the leftovers would over-constrain.
            return []
        if violates(kb, remaining):
            continue
        if remaining in seen:
            continue
        seen.add(remaining)
        out.append(remaining)
    out.sort(key=lambda d: tuple(sorted(lit_key(l) for l in d)))
    return out


def build_aic(explanations: Sequence[Explanation], seq: int, origin: str) -> AicRecord:
    """Constraint clause asserting that some explanation must hold."""
    if not explanations:
        raise EmptyDnf(f"no explanations left for {origin}")
    dnf = _canon_dnf(explanations)
    body: List[Goal] = []
    for disjunct in dnf:
        refuted = sorted((l.negate() for l in disjunct), key=lit_key)
        body.append(refuted[0] if len(refuted) == 1 else Disj(tuple(refuted)))
    clause = Clause(head=IMP, body=tuple(body), source="abduction")
    return AicRecord(seq=seq, origin=origin, dnf=dnf, clause=clause)


def install_aic(kb, record: AicRecord) -> bool:
    """Assert the constraint unless an identical one is already installed."""
    for existing in kb.aic_records:
        if existing.dnf == record.dnf:
            return False
    kb.assert_clause(record.clause, "aic")
    kb.aic_records.append(record)
    return True


def update_aics(kb, new_facts=None) -> int:
    """Retract constraints whose disjunction of explanations is now entailed.

    Once some explanation is outright derivable the constraint can never
    fire again, so keeping it adds nothing.  new_facts, when given, is the
    set of ground literals asserted since the last sweep; it is advisory
    (the check re-derives each explanation either way) and exists so call
    sites can document what triggered the sweep.
    """
    stale = set()
    for record in kb.aic_records:
        if any(all(entails(kb, l) for l in disjunct) for disjunct in record.dnf):
            stale.add(id(record.clause))
    if not stale:
        return 0
    return kb.retract_where(lambda tag, cl: tag == "aic" and id(cl) in stale)


def drop_refuted_aics(kb) -> int:
    """Retract constraints every explanation of which is strongly refuted.

    Such a constraint's body already holds, so imp is derivable from the
    base knowledge alone and every later consistency check would fail.
    The wrong guess is abandoned instead: the observed action simply goes
    unexplained.  Kept separate from update_aics because it handles belief
    revision after a contradiction, not routine confirmation.
    """
    stale = set()
    for record in kb.aic_records:
        if all(any(entails(kb, l.negate()) for l in disjunct)
               for disjunct in record.dnf):
            stale.add(id(record.clause))
    if not stale:
        return 0
    return kb.retract_where(lambda tag, cl: tag == "aic" and id(cl) in stale)


def remap_aic_slots(kb, player, removed_slot: int) -> Tuple[int, int]:
    """Renumber constraint literals after the player lost a hand slot.

    Literals about higher slots shift down one; constraints naming the
    removed slot are about a card no longer in the hand and are retracted.
    Returns (remapped, retracted) counts.
    """
    doomed = set()
    rewrites: List[Tuple[AicRecord, AicRecord]] = []
    for record in kb.aic_records:
        hit_removed = False
        changed = False
        new_dnf: List[Tuple[Lit, ...]] = []
        for disjunct in record.dnf:
            new_lits: List[Lit] = []
            for lit in disjunct:
                if lit.pred in _SLOT_PREDS and lit.args[0] == player:
                    slot = lit.args[1]
                    if slot == removed_slot:
                        hit_removed = True
                        break
                    if isinstance(slot, int) and slot > removed_slot:
                        lit = Lit(lit.pred, (lit.args[0], slot - 1) + lit.args[2:], lit.pos)
                        changed = True
                new_lits.append(lit)
            if hit_removed:
                break
            new_dnf.append(tuple(new_lits))
        if hit_removed:
            doomed.add(id(record.clause))
        elif changed:
            replacement = build_aic([frozenset(d) for d in new_dnf], record.seq, record.origin)
            rewrites.append((record, replacement))
    retracted = 0
    if doomed:
        retracted = kb.retract_where(lambda tag, cl: tag == "aic" and id(cl) in doomed)
    for old, new in rewrites:
        kb.retract_where(lambda tag, cl: tag == "aic" and cl is old.clause)
        install_aic(kb, new)
    return len(rewrites), retracted


def aic_line(record: AicRecord) -> str:
    """One-line diagnostic rendering of an installed constraint."""
    dnf_text = " | ".join(
        "{" + ", ".join(lit_text(l) for l in disjunct) + "}" for disjunct in record.dnf
    )
    return f"AIC {record.seq} from {record.origin} :: DNF={dnf_text}"
