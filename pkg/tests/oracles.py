"""Independent reference implementations the tests compare against.

Everything here recomputes results by a different route than the package:
entailment by bottom-up fixpoint iteration instead of top-down search,
explanations by exhaustive subset enumeration instead of proof-guided
assumption, action choice by spelling out whole belief completions.  Any
disagreement is treated as a defect in the package, not in these oracles,
so the code favours the obvious algorithm over speed.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from abditom.hanabi import (
    COLOURS,
    MAX_LIVES,
    MAX_TOKENS,
    RANK_COUNTS,
    RANKS,
    GameState,
    apply_action,
    legal_actions,
    new_game,
    observe,
)
from abditom.prng import SplitMix64, scramble
from abditom.selection import ordered_rules
from abditom.solver import IMP, solve, violates_imp
from abditom.terms import Clause, Conj, Lit, lit_is_ground, lit_key


# ---------------------------------------------------------------------------
# Bottom-up entailment for ground programs
# ---------------------------------------------------------------------------


def fixpoint_atoms(clauses: Sequence[Clause]) -> Set[Lit]:
    """Least set of ground literals closed under the clauses.

    Bodies must be tuples of ground literals; a clause fires once every
    body literal is already derived.  Iterates to a fixed point, so it is
    indifferent to clause order and to cycles.
    """
    derived: Set[Lit] = set()
    changed = True
    while changed:
        changed = False
        for cl in clauses:
            if cl.head in derived:
                continue
            if all(g in derived for g in cl.body):
                derived.add(cl.head)
                changed = True
    return derived


def random_ground_program(rng) -> Tuple[List[Clause], List[Lit]]:
    """A random ground definite program and its whole query vocabulary.

    Clause bodies draw only on atoms that come strictly earlier in a
    shuffled atom order, so top-down search terminates on every query
    while the bottom-up result is unaffected.  Returns (clauses, atoms);
    the atoms double as the exhaustive query set.
    """
    n_preds = rng.randint(1, 3)
    consts = tuple(f"c{i}" for i in range(rng.randint(1, 8)))
    atoms: List[Lit] = []
    for p in range(n_preds):
        arity = rng.choice((0, 1, 1, 2))
        for args in itertools.product(consts, repeat=arity):
            atoms.append(Lit(f"p{p}", args))
    if len(atoms) > 48:
        # Querying hundreds of atoms per program adds time, not coverage.
        atoms = rng.sample(atoms, 48)
    rng.shuffle(atoms)
    clauses: List[Clause] = []
    for _ in range(rng.randint(1, 15)):
        k = rng.randrange(len(atoms))
        n_body = rng.randint(0, min(3, k))
        body = tuple(atoms[rng.randrange(k)] for _ in range(n_body))
        clauses.append(Clause(atoms[k], body))
    return clauses, atoms


# ---------------------------------------------------------------------------
# Brute-force abduction
# ---------------------------------------------------------------------------


def random_alp_theory(rng) -> Tuple[List[Clause], List[Lit], Tuple[Lit, ...]]:
    """A ground program, candidate assumptions, and a query to explain.

    Assumable predicates never head a clause, mirroring the loader's
    discipline, and constraint clauses usually mention an assumable atom
    so consistency pruning actually bites.
    """
    consts = tuple("abcd"[: rng.randint(2, 4)])
    assumable = [Lit(p, (c,)) for p in ("ha", "hb") for c in consts]
    abducibles = rng.sample(assumable, rng.randint(1, min(8, len(assumable))))
    atoms = [Lit(p, (c,)) for p in ("p", "q", "r") for c in consts]
    rng.shuffle(atoms)
    clauses: List[Clause] = []
    for _ in range(rng.randint(1, 12)):
        k = rng.randrange(len(atoms))
        body: List[Lit] = []
        for _ in range(rng.randint(0, 3)):
            if k and rng.random() < 0.5:
                body.append(atoms[rng.randrange(k)])
            else:
                body.append(rng.choice(assumable))
        clauses.append(Clause(atoms[k], tuple(body)))
    for _ in range(rng.randint(0, 3)):
        if len(clauses) >= 15:
            break
        body = [rng.choice(assumable if rng.random() < 0.7 else atoms)]
        if rng.random() < 0.5:
            body.append(rng.choice(atoms))
        clauses.append(Clause(IMP, tuple(body)))
    pool = atoms + assumable
    query = tuple(rng.choice(pool) for _ in range(rng.randint(1, 3)))
    return clauses, abducibles, query


def brute_force_explanations(
    clauses: Sequence[Clause],
    abducibles: Sequence[Lit],
    query: Sequence[Lit],
) -> Set[FrozenSet[Lit]]:
    """Subset-minimal assumption sets that consistently entail the query.

    Enumerates every subset of the abducibles, keeps those whose fixpoint
    covers the query without deriving imp, then drops any with a kept
    proper subset.
    """
    candidates = sorted(set(abducibles), key=lit_key)
    base = list(clauses)
    qualifying: List[FrozenSet[Lit]] = []
    for k in range(len(candidates) + 1):
        for combo in itertools.combinations(candidates, k):
            facts = fixpoint_atoms(base + [Clause(l, ()) for l in combo])
            if IMP in facts:
                continue
            if all(g in facts for g in query):
                qualifying.append(frozenset(combo))
    return {d for d in qualifying if not any(o < d for o in qualifying)}


# ---------------------------------------------------------------------------
# Game-state audits
# ---------------------------------------------------------------------------


def full_deck() -> List[Tuple[str, int]]:
    return sorted((c, r) for c in COLOURS for r in RANKS for _ in range(RANK_COUNTS[r]))


def state_cards(state: GameState) -> List[Tuple[str, int]]:
    """Every card the state accounts for: deck, hands, discards, played."""
    held = [(hc.colour, hc.rank) for hand in state.hands for hc in hand]
    played = [(c, r) for c in COLOURS for r in range(1, state.stacks[c] + 1)]
    return sorted(list(state.deck) + held + list(state.discards) + played)


def state_violations(state: GameState) -> List[str]:
    """Bounds and conservation defects of one state, as readable strings."""
    bad: List[str] = []
    if not 0 <= state.info_tokens <= MAX_TOKENS:
        bad.append(f"info tokens out of range: {state.info_tokens}")
    if not 0 <= state.lives <= MAX_LIVES:
        bad.append(f"lives out of range: {state.lives}")
    for c, h in state.stacks.items():
        if not 0 <= h <= 5:
            bad.append(f"stack {c} out of range: {h}")
    if state.score() > 25:
        bad.append(f"score above 25: {state.score()}")
    if state_cards(state) != full_deck():
        bad.append("card conservation broken")
    return bad


def observation_violations(state: GameState, seat: int) -> List[str]:
    """Percept facts that are untrue in the state or leak hidden identity."""
    me = state.names[seat]
    bad: List[str] = []

    def card(name: str, slot: int):
        hand = state.hands[state.seat(name)]
        if not 1 <= slot <= len(hand):
            return None
        return hand[slot - 1]

    for lit in observe(state, seat):
        pred, args = lit.pred, lit.args
        if pred in ("has_card_colour", "has_card_rank"):
            name, slot, value = args
            hc = card(name, slot)
            if hc is None:
                bad.append(f"no such card: {lit}")
                continue
            actual = hc.colour if pred == "has_card_colour" else hc.rank
            if lit.pos and actual != value:
                bad.append(f"untrue: {lit}")
            if not lit.pos and actual == value:
                bad.append(f"untrue negative: {lit}")
            if name == me and lit.pos:
                known = hc.known_colour if pred == "has_card_colour" else hc.known_rank
                if known != value:
                    bad.append(f"own identity leaked without a hint: {lit}")
            if name == me and not lit.pos:
                marks = hc.not_colours if pred == "has_card_colour" else hc.not_ranks
                if value not in marks:
                    bad.append(f"own exclusion without a hint: {lit}")
        elif pred in ("hinted_colour", "hinted_rank"):
            name, slot, value = args
            hc = card(name, slot)
            known = hc and (hc.known_colour if pred == "hinted_colour" else hc.known_rank)
            if known != value:
                bad.append(f"hint mark without a hint: {lit}")
        elif pred in ("hinted_not_colour", "hinted_not_rank"):
            name, slot, value = args
            hc = card(name, slot)
            marks = hc and (hc.not_colours if pred == "hinted_not_colour" else hc.not_ranks)
            if not marks or value not in marks:
                bad.append(f"exclusion mark without a hint: {lit}")
        elif pred == "stack":
            if state.stacks.get(args[0]) != args[1]:
                bad.append(f"untrue: {lit}")
        elif pred == "discarded":
            c, r, n = args
            if state.discards.count((c, r)) != n:
                bad.append(f"untrue: {lit}")
        elif pred == "info_tokens":
            if args[0] != state.info_tokens:
                bad.append(f"untrue: {lit}")
        elif pred == "lives":
            if args[0] != state.lives:
                bad.append(f"untrue: {lit}")
        elif pred == "deck_size":
            if args[0] != len(state.deck):
                bad.append(f"untrue: {lit}")
        elif pred == "player_turn":
            if args[0] != state.current_player():
                bad.append(f"untrue: {lit}")
        elif pred == "hand_slot":
            if card(args[0], args[1]) is None:
                bad.append(f"untrue: {lit}")
        else:
            bad.append(f"unaudited percept predicate: {lit}")
    return bad


def random_reachable_state(seed: int, steps: Optional[int] = None,
                           n_players: Optional[int] = None) -> GameState:
    """A state reached from a fresh deal by seeded random legal play."""
    rng = SplitMix64(scramble(seed))
    state = new_game(n_players or 2 + rng.randrange(4), seed)
    limit = rng.randrange(40) if steps is None else steps
    for _ in range(limit):
        if state.over:
            break
        seat = state.turn
        apply_action(state, seat, rng.choice(legal_actions(state, seat)))
    return state


# ---------------------------------------------------------------------------
# Whole-completion action choice
# ---------------------------------------------------------------------------


def enumerated_choice(kb, abducibles, rules, violates=violates_imp) -> Optional[Lit]:
    """Priority-first pick over explicitly enumerated belief completions.

    Groups the assumable facts by the card they describe, takes every way
    of choosing one value per group, keeps the combinations the
    constraints accept, and fires a rule only when all of them plus all
    their body solutions agree on one ground action.  Exponential; use on
    states with very few unknown values.
    """
    groups: Dict[tuple, List[Lit]] = {}
    for lit in abducibles:
        groups.setdefault((lit.pred, lit.args[0], lit.args[1]), []).append(lit)
    keys = sorted(groups, key=lambda k: (k[0], str(k[1]), str(k[2])))
    completions = []
    for combo in itertools.product(*(groups[k] for k in keys)):
        extra = frozenset(combo)
        if not violates(kb, extra):
            completions.append(extra)
    for _, rule in ordered_rules(rules):
        heads = set()
        every_completion_proves = bool(completions)
        for extra in completions:
            view = kb.extended(extra)
            found = {sol.apply_lit(rule.head) for sol in solve(view, Conj(rule.body))}
            if not found:
                every_completion_proves = False
                break
            heads |= found
        if every_completion_proves and len(heads) == 1:
            head = next(iter(heads))
            if lit_is_ground(head):
                return head
    return None
