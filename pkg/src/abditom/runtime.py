"""Game loop wiring: per-seat reasoners, events, and whole-game runs.

Every seat keeps its own knowledge base. A turn unfolds as: the seat to
move picks an action over the consistent completions of its beliefs, the
engine executes it, and every seat (the actor included) assimilates the
public event record. Assimilating another seat's hint runs abduction
from the hinting seat's attributed program, so what lands in the base is
the reason the hint made sense, not just the hint marks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .abduction import AbduceLimits, abduce
from .assimilation import (
    AicRecord,
    aic_line,
    build_aic,
    drop_refuted_aics,
    install_aic,
    refine,
    remap_aic_slots,
    update_aics,
)
from .errors import NoActionSelected
from .hanabi import (
    Event,
    GameState,
    apply_action,
    legal_actions,
    new_game,
    observe,
    ontology_facts,
    trace_line,
)
from .kb import KnowledgeBase
from .perspective import shift_perspective
from .prng import SplitMix64, scramble
from .rulebase import (
    assumable_card_facts,
    fast_violates,
    install_rulebase,
    strategy_rules,
)
from .selection import Decision, SelectLimits, select_action
from .terms import Lit, Struct, term_text

_HINT_KINDS = ("hint_colour", "hint_rank")
_CARD_PREDS = ("has_card_colour", "has_card_rank")


class Agent:
    """One seat's reasoner: beliefs, constraint upkeep, and turn choice."""

    def __init__(
        self,
        name: str,
        state: GameState,
        use_aics: bool = True,
        select_limits: Optional[SelectLimits] = None,
        abduce_limits: Optional[AbduceLimits] = None,
    ):
        self.name = name
        self.use_aics = use_aics
        self.select_limits = select_limits or SelectLimits()
        self.abduce_limits = abduce_limits or AbduceLimits()
        self.kb = KnowledgeBase(owner=name)
        install_rulebase(self.kb)
        for f in ontology_facts(state):
            self.kb.assert_fact(f, "ontology")
        self._rules = strategy_rules(self.kb)
        self._aic_seq = 0
        self.aic_installed = 0
        self.aic_retracted = 0
        self.aic_remapped = 0
        self.violations = 0  # installed constraints the hidden hands contradict
        self.unexplained = 0  # hints no explanation could be found for
        self.aic_log: List[str] = []
        self.refresh_percepts(state)

    def refresh_percepts(self, state: GameState) -> None:
        self.kb.retract_tag("percept")
        for f in observe(state, state.seat(self.name)):
            self.kb.assert_fact(f, "percept")

    def take_turn(self, state: GameState, trace: Optional[list] = None,
                  exhaustive: bool = False) -> Decision:
        """Choose this seat's action for the current state."""
        self.refresh_percepts(state)
        abducibles = assumable_card_facts(self.kb)
        decision = select_action(self.kb, abducibles, self._rules,
                                 self.select_limits, trace=trace,
                                 exhaustive=exhaustive,
                                 violates=fast_violates)
        if decision is None:
            raise NoActionSelected(
                f"{self.name} found no rule to fire: tokens and hand facts "
                f"leave {len(self._rules)} rules without a unanimous body")
        return decision

    def on_event(self, state: GameState, ev: Event) -> None:
        """Assimilate one public event. state is the post-event state.

        Order matters. Another seat's hint is explained from the base as
        it stood when the actor moved, so abduction runs before any new
        information lands. A revealed card then becomes a percept under
        the pre-event slot numbering, standing constraints are reconciled
        with it, the surviving explanation is installed, constraint
        literals follow the slot renumbering, and then the percept layer
        is rebuilt for the new state. Constraints are reconciled a second
        time at the end: hint marks land with the rebuild, and a
        constraint they refute must not survive into the next turn.
        """
        actor = ev.actor
        explanations = None
        if (self.use_aics and actor != self.name and ev.kind in _HINT_KINDS):
            explanations = self._explain_hint(ev)

        if ev.card is not None:
            colour, rank = ev.card
            self.kb.assert_fact(
                Lit("has_card_colour", (actor, ev.slot, colour)), "percept")
            self.kb.assert_fact(
                Lit("has_card_rank", (actor, ev.slot, rank)), "percept")

        self.aic_retracted += update_aics(self.kb)

        if explanations is not None:
            self._install(state, ev, explanations)

        if ev.slot is not None:
            remapped, dropped = remap_aic_slots(self.kb, actor, ev.slot)
            self.aic_remapped += remapped
            self.aic_retracted += dropped

        self.refresh_percepts(state)
        self.aic_retracted += update_aics(self.kb)
        self.aic_retracted += drop_refuted_aics(self.kb)

    def _explain_hint(self, ev: Event) -> List[frozenset]:
        """Minimal explanations of the actor's hint, from the actor's view.

        The hint's direct content is patched in as plain card facts
        before abduction: the actor saw the touched cards match and the
        rest miss. The hint marks themselves are withheld, since the
        rule that made the hint worth giving requires the card not to
        have been marked already.
        """
        shifted = shift_perspective(self.kb, ev.actor).kb
        patched = shifted.clone()
        mark = "has_card_colour" if ev.kind == "hint_colour" else "has_card_rank"
        for s in ev.touched:
            patched.assert_fact(Lit(mark, (ev.target, s, ev.value)), "percept")
        for s in ev.untouched:
            patched.assert_fact(
                Lit(mark, (ev.target, s, ev.value)).negate(), "percept")
        abducibles = assumable_card_facts(patched)
        query = Lit("action", (ev.actor, ev.action))
        return abduce(patched, abducibles, query, self.abduce_limits,
                      violates=fast_violates)

    def _install(self, state: GameState, ev: Event,
                 explanations: List[frozenset]) -> None:
        if not explanations:
            self.unexplained += 1
            return
        refined = refine(self.kb, explanations, violates=fast_violates)
        if not refined:
            return
        self._aic_seq += 1
        origin = f"{ev.actor}:{term_text(ev.action)}@t{ev.t}"
        record = build_aic(refined, self._aic_seq, origin)
        if install_aic(self.kb, record):
            self.aic_installed += 1
            self.aic_log.append(aic_line(record))
            if _contradicted(state, record):
                self.violations += 1


def _lit_true_in_state(state: GameState, lit: Lit) -> bool:
    if lit.pred not in _CARD_PREDS:
        return True  # only card beliefs are checked against the deal
    player, slot, value = lit.args
    hand = state.hands[state.seat(player)]
    if not (isinstance(slot, int) and 1 <= slot <= len(hand)):
        return False
    hc = hand[slot - 1]
    actual = hc.colour if lit.pred == "has_card_colour" else hc.rank
    return (actual == value) if lit.pos else (actual != value)


def _contradicted(state: GameState, record: AicRecord) -> bool:
    """Every explanation clashes with the hidden hands: a false belief."""
    return not any(
        all(_lit_true_in_state(state, l) for l in disjunct)
        for disjunct in record.dnf)


# ---------------------------------------------------------------------------
# Whole games
# ---------------------------------------------------------------------------


_MAX_TURNS = 1000  # hard stop well past any legal game length


@dataclass
class GameRecord:
    """Everything one game run leaves behind."""

    players: int
    seed: int
    policy: str
    score: int
    turns: int
    hints: int
    outcome: str
    aic_installed: int = 0
    aic_retracted: int = 0
    aic_remapped: int = 0
    violations: int = 0
    unexplained: int = 0
    wall_ms: float = 0.0
    trace: List[str] = field(default_factory=list)
    aic_lines: List[str] = field(default_factory=list)
    instance_log: List[int] = field(default_factory=list)
    masked_instance_log: List[int] = field(default_factory=list)

    @property
    def efficiency(self) -> Optional[float]:
        return self.score / self.hints if self.hints else None

    def to_dict(self) -> dict:
        return {
            "players": self.players,
            "seed": self.seed,
            "policy": self.policy,
            "score": self.score,
            "turns": self.turns,
            "hints": self.hints,
            "efficiency": self.efficiency,
            "outcome": self.outcome,
            "aic_installed": self.aic_installed,
            "aic_retracted": self.aic_retracted,
            "aic_remapped": self.aic_remapped,
            "violations": self.violations,
            "unexplained": self.unexplained,
            "wall_ms": self.wall_ms,
        }


def _kept_instances(trace_buf: list) -> int:
    return sum(f["instances_kept"] for entry in trace_buf for f in entry["forms"])


def run_game(
    n_players: int,
    seed: int,
    policy: str = "model",
    use_aics: bool = True,
    collect_trace: bool = False,
    counterfactual: bool = False,
    names: Optional[Sequence[str]] = None,
    select_limits: Optional[SelectLimits] = None,
    abduce_limits: Optional[AbduceLimits] = None,
) -> GameRecord:
    """Play one seeded game to its end and report what happened.

    policy "model" seats a reasoner per player; "random" draws uniformly
    from the legal actions, as the matched-seed baseline. counterfactual
    additionally measures, each turn, how many completions the mover
    would have faced with its constraints masked, which is the price of
    an exhaustive completion scan per turn.
    """
    if policy not in ("model", "random"):
        raise ValueError(f"unknown policy {policy!r}")
    start = time.perf_counter()
    state = new_game(n_players, seed, names)
    agents: Dict[str, Agent] = {}
    if policy == "model":
        agents = {
            name: Agent(name, state, use_aics=use_aics,
                        select_limits=select_limits,
                        abduce_limits=abduce_limits)
            for name in state.names
        }
    rng = SplitMix64(scramble(seed))  # distinct stream from the deck shuffle
    record = GameRecord(players=n_players, seed=seed, policy=policy,
                        score=0, turns=0, hints=0, outcome="")

    while not state.over:
        if state.t >= _MAX_TURNS:
            raise RuntimeError(f"game did not terminate within {_MAX_TURNS} turns")
        seat = state.turn
        name = state.names[seat]
        if policy == "model":
            agent = agents[name]
            trace_buf: Optional[list] = [] if counterfactual else None
            decision = agent.take_turn(state, trace=trace_buf,
                                       exhaustive=counterfactual)
            action = decision.action.args[1]
            if counterfactual:
                record.instance_log.append(_kept_instances(trace_buf))
                masked = agent.kb.clone()
                masked.retract_tag("aic")
                masked_buf: list = []
                select_action(masked, assumable_card_facts(masked),
                              strategy_rules(masked),
                              agent.select_limits, trace=masked_buf,
                              exhaustive=True, violates=fast_violates)
                record.masked_instance_log.append(_kept_instances(masked_buf))
        else:
            action = rng.choice(legal_actions(state, seat))
        ev = apply_action(state, seat, action)
        if ev.kind in _HINT_KINDS:
            record.hints += 1
        if collect_trace:
            record.trace.append(trace_line(ev))
        for agent in agents.values():
            agent.on_event(state, ev)

    record.score = state.score()
    record.turns = state.t
    record.outcome = state.outcome
    for agent in agents.values():
        record.aic_installed += agent.aic_installed
        record.aic_retracted += agent.aic_retracted
        record.aic_remapped += agent.aic_remapped
        record.violations += agent.violations
        record.unexplained += agent.unexplained
        if collect_trace:
            record.aic_lines.extend(agent.aic_log)
    record.wall_ms = (time.perf_counter() - start) * 1000.0
    return record
