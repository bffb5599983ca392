"""Packaged rule files and their installation into a knowledge base.

The four files load in a fixed order so clause order, and with it
resolution order, stays reproducible: vocabulary and integrity
constraints first, then knowledge attribution, then the assumption
vocabulary, then the turn policy.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, List, Tuple

from .abduction import AbducibleSet
from .errors import MissingFallbackRule, UnannotatedActionRule
from .kb import KnowledgeBase
from .parser import check_abducible_conflicts, parse_program
from .terms import Clause, Lit, Struct

RULE_FILES = ("ontology.lp", "tom.lp", "abducibles.lp", "strategy.lp")

_RULES_DIR = Path(__file__).resolve().parent / "rules"


def rule_text(filename: str) -> str:
    """Source text of one packaged rule file."""
    try:
        from importlib import resources

        return (resources.files(__package__) / "rules" / filename).read_text(
            encoding="utf-8")
    except Exception:
        return (_RULES_DIR / filename).read_text(encoding="utf-8")


def tag_for(clause: Clause) -> str:
    """Provenance tag a packaged clause is stored under."""
    pred = clause.head.pred
    if pred == "abducible":
        return "abducible-def"
    if pred == "action":
        if clause.priority is None:
            raise UnannotatedActionRule(
                f"action rule without a priority annotation: {clause!r}")
        return "action-rule"
    if pred == "knows":
        return "tom"
    return "ontology"


def load_rulebase() -> Dict[str, List[Clause]]:
    """Parse every packaged rule file, keyed by filename.

    Each file is checked on its own by the parser; the abducible
    conflict check runs again over the union, since a predicate declared
    assumable in one file must not be defined by clauses in another.
    """
    programs = {name: parse_program(rule_text(name)) for name in RULE_FILES}
    check_abducible_conflicts([c for name in RULE_FILES for c in programs[name]])
    return programs


def install_rulebase(kb: KnowledgeBase) -> int:
    """Assert all packaged rules into kb, returning the clause count."""
    programs = load_rulebase()
    n = 0
    for name in RULE_FILES:
        for clause in programs[name]:
            kb.assert_clause(clause, tag_for(clause))
            n += 1
    return n


def strategy_rules(kb: KnowledgeBase) -> List[Clause]:
    """The action rules currently installed, in assertion order."""
    return [clause for clause, tag in kb.all_entries() if tag == "action-rule"]


def validate() -> None:
    """Static sanity of the packaged rulebase; raises on the first defect.

    Beyond what loading already enforces, every action rule must carry a
    priority and some rule must propose hint_fallback, the catch-all
    that keeps a turn from ever going unanswered.
    """
    programs = load_rulebase()
    fallback = False
    for name in RULE_FILES:
        for clause in programs[name]:
            tag_for(clause)
            head = clause.head
            if head.pred == "action" and len(head.args) == 2:
                inner = head.args[1]
                if isinstance(inner, Struct) and inner.functor == "hint_fallback":
                    fallback = True
    if not fallback:
        raise MissingFallbackRule("no action rule proposes hint_fallback")


# ---------------------------------------------------------------------------
# Read-off equivalents of the hot logic queries
# ---------------------------------------------------------------------------
#
# Both functions below are specialised to the packaged rule files and are
# interchangeable with their generic counterparts on bases built from
# them: assumable_card_facts with abducible_set, fast_violates with
# violates_imp. The generic versions resolve by SLDNF; these read the
# ground facts straight, which is what makes a per-completion filter and
# a per-event assumption vocabulary affordable inside full games.

_CARD_PREDS = ("has_card_colour", "has_card_rank")
_CARD_DOMAINS = (("has_card_colour", "colour"), ("has_card_rank", "rank"))


def _card_maps(kb, extras: Iterable[Lit] = ()) -> Tuple[dict, dict]:
    """Positive and negative card values, keyed by (pred, player, slot)."""
    pos: dict = {}
    neg: dict = {}
    for pred in _CARD_PREDS:
        for args in kb.ground_facts((pred, 3, True)):
            pos.setdefault((pred, args[0], args[1]), set()).add(args[2])
        for args in kb.ground_facts((pred, 3, False)):
            neg.setdefault((pred, args[0], args[1]), set()).add(args[2])
    for lit in extras:
        if lit.pred in _CARD_PREDS and len(lit.args) == 3:
            side = pos if lit.pos else neg
            side.setdefault((lit.pred, lit.args[0], lit.args[1]), set()).add(lit.args[2])
    return pos, neg


def assumable_card_facts(kb) -> AbducibleSet:
    """What abducible_set finds for the packaged assumption vocabulary.

    A value is assumable at a card unless a strong negative excludes it
    or a settled different value crowds it out; a settled value itself
    stays assumable.
    """
    players = [args[0] for args in kb.ground_facts(("player", 1, True))]
    slots = [args[0] for args in kb.ground_facts(("slot", 1, True))]
    pos, neg = _card_maps(kb)
    members: List[Lit] = []
    for pred, domain_pred in _CARD_DOMAINS:
        domain = [args[0] for args in kb.ground_facts((domain_pred, 1, True))]
        if len(domain) < 2:
            continue  # the clause needs a distinct alternative value to exist
        for p in players:
            for s in slots:
                known = pos.get((pred, p, s), ())
                excluded = neg.get((pred, p, s), ())
                for v in domain:
                    if known and (v not in known or len(known) > 1):
                        continue
                    if v in excluded:
                        continue
                    members.append(Lit(pred, (p, s, v)))
    return AbducibleSet(members)


def _refuted(lit: Lit, pos: dict, neg: dict) -> bool:
    if lit.pred not in _CARD_PREDS or len(lit.args) != 3:
        return False
    at = (lit.pred, lit.args[0], lit.args[1])
    if lit.args[2] in neg.get(at, ()):
        return True
    known = pos.get(at, ())
    return bool(known) and lit.args[2] not in known


def fast_violates(kb, extras: Iterable[Lit] = ()) -> bool:
    """What violates_imp decides for the packaged integrity constraints.

    A violation is a card with two settled values, a value both asserted
    and excluded, or an installed assumption constraint all of whose
    explanations are refuted.
    """
    pos, neg = _card_maps(kb, extras)
    for at, values in pos.items():
        if len(values) > 1:
            return True
        if values & neg.get(at, set()):
            return True
    for record in kb.aic_records:
        if all(any(_refuted(l, pos, neg) for l in d) for d in record.dnf):
            return True
    return False
