"""Cooperative fireworks card game engine.

Fifty cards: five colours, ranks 1..5 with multiplicities 3/2/2/2/1.  Hands
hold five cards at two or three players, four at four or five.  The table
shares eight information tokens and three lives.  A hint (colour or rank)
costs a token and must touch at least one card in the target's hand; a
discard regains a token and is illegal at eight; playing a card extends its
colour stack if the rank is exactly one above the stack, otherwise it costs
a life, and completing a stack at rank five regains a token.  When the last
deck card is drawn every player gets one final turn.  Score is the summed
stack heights, or zero if the third life is lost.

Slots are 1-based.  Removing a card shifts higher slots down and a drawn
card is appended at the end, so slot 1 is always the oldest card.  Hint
marks live on card instances and move with them, which keeps mark tracking
immune to slot renumbering.

observe() encodes a seat's view as ground facts: full colour and rank for
every other hand, but own-hand knowledge only as far as hints pin it down,
positively for touched cards and negatively for untouched ones, plus the
public hint history for all seats and the shared table state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import GameOver, IllegalAction, InvalidPlayerCount
from .prng import SplitMix64
from .terms import Lit, Struct

COLOURS: Tuple[str, ...] = ("red", "green", "blue", "white", "yellow")
RANKS: Tuple[int, ...] = (1, 2, 3, 4, 5)
RANK_COUNTS: Dict[int, int] = {1: 3, 2: 2, 3: 2, 4: 2, 5: 1}
MAX_TOKENS = 8
MAX_LIVES = 3
DEFAULT_NAMES: Tuple[str, ...] = ("alice", "bob", "cathy", "dana", "eve")


@dataclass
class HandCard:
    colour: str
    rank: int
    known_colour: Optional[str] = None
    not_colours: Set[str] = field(default_factory=set)
    known_rank: Optional[int] = None
    not_ranks: Set[int] = field(default_factory=set)


@dataclass
class Event:
    """Public record of one turn, as every seat perceives it."""

    t: int
    actor: str
    action: Struct
    kind: str  # play | discard | hint_colour | hint_rank
    outcome: str
    slot: Optional[int] = None  # pre-event slot of a played/discarded card
    card: Optional[Tuple[str, int]] = None
    success: Optional[bool] = None
    drew: bool = False
    target: Optional[str] = None
    value: object = None
    touched: Tuple[int, ...] = ()
    untouched: Tuple[int, ...] = ()
    tokens: int = 0
    lives: int = 0
    score: int = 0
    game_over: bool = False


class GameState:
    __slots__ = (
        "n_players", "names", "hands", "deck", "stacks", "info_tokens",
        "lives", "discards", "turn", "t", "turns_left", "over", "outcome",
    )

    def __init__(self, n_players: int, seed: int, names: Optional[Sequence[str]] = None):
        if not 2 <= n_players <= 5:
            raise InvalidPlayerCount(f"{n_players} players; this game seats 2 to 5")
        self.n_players = n_players
        self.names: Tuple[str, ...] = tuple(names) if names else DEFAULT_NAMES[:n_players]
        if len(self.names) != n_players or len(set(self.names)) != n_players:
            raise InvalidPlayerCount("need one distinct name per seat")
        deck = [(c, r) for c in COLOURS for r in RANKS for _ in range(RANK_COUNTS[r])]
        SplitMix64(seed).shuffle(deck)
        self.deck: List[Tuple[str, int]] = deck
        hand_size = 5 if n_players <= 3 else 4
        self.hands: List[List[HandCard]] = []
        for _ in range(n_players):
            self.hands.append([HandCard(*self.deck.pop(0)) for _ in range(hand_size)])
        self.stacks: Dict[str, int] = {c: 0 for c in COLOURS}
        self.info_tokens = MAX_TOKENS
        self.lives = MAX_LIVES
        self.discards: List[Tuple[str, int]] = []
        self.turn = 0  # seat index to act
        self.t = 0  # completed turns
        self.turns_left: Optional[int] = None
        self.over = False
        self.outcome = ""

    # -- helpers ----------------------------------------------------------

    def seat(self, name: str) -> int:
        return self.names.index(name)

    def current_player(self) -> str:
        return self.names[self.turn]

    def hand_size(self) -> int:
        return 5 if self.n_players <= 3 else 4

    def score(self) -> int:
        if self.lives <= 0:
            return 0
        return sum(self.stacks.values())

    def is_over(self) -> bool:
        return self.over


def new_game(n_players: int, seed: int, names: Optional[Sequence[str]] = None) -> GameState:
    return GameState(n_players, seed, names)


# ---------------------------------------------------------------------------
# Legal moves and the turn transition
# ---------------------------------------------------------------------------


def legal_actions(state: GameState, seat: int) -> List[Struct]:
    """Deterministic order: plays, discards, then hints by seating distance."""
    actions: List[Struct] = []
    hand = state.hands[seat]
    for s in range(1, len(hand) + 1):
        actions.append(Struct("play_card", (s,)))
    if state.info_tokens < MAX_TOKENS:
        for s in range(1, len(hand) + 1):
            actions.append(Struct("discard_card", (s,)))
    if state.info_tokens > 0:
        for step in range(1, state.n_players):
            other = (seat + step) % state.n_players
            name = state.names[other]
            colours_present = [c for c in COLOURS if any(hc.colour == c for hc in state.hands[other])]
            for c in colours_present:
                actions.append(Struct("hint_colour", (name, c)))
            ranks_present = [r for r in RANKS if any(hc.rank == r for hc in state.hands[other])]
            for r in ranks_present:
                actions.append(Struct("hint_rank", (name, r)))
    return actions


def _draw(state: GameState, seat: int) -> bool:
    if not state.deck:
        return False
    state.hands[seat].append(HandCard(*state.deck.pop(0)))
    if not state.deck and state.turns_left is None:
        state.turns_left = state.n_players
    return True


def apply_action(state: GameState, seat: int, action: Struct) -> Event:
    """Validate and execute one turn; returns the public event record."""
    if state.over:
        raise GameOver(state.outcome)
    if seat != state.turn:
        raise IllegalAction(f"not {state.names[seat]}'s turn")
    if not isinstance(action, Struct):
        raise IllegalAction(f"not an action term: {action!r}")

    functor = action.functor
    if functor == "hint_fallback":  # strategy-level alias for a colour hint
        action = Struct("hint_colour", action.args)
        functor = "hint_colour"

    name = state.names[seat]
    t_now = state.t + 1
    ev = Event(t=t_now, actor=name, action=action, kind="", outcome="",
               tokens=state.info_tokens, lives=state.lives, score=state.score())

    if functor == "play_card":
        (slot,) = action.args
        hand = state.hands[seat]
        if not (isinstance(slot, int) and 1 <= slot <= len(hand)):
            raise IllegalAction(f"play_card slot {slot!r} out of range")
        card = hand.pop(slot - 1)
        ev.kind = "play"
        ev.slot = slot
        ev.card = (card.colour, card.rank)
        if state.stacks[card.colour] == card.rank - 1:
            state.stacks[card.colour] = card.rank
            ev.success = True
            ev.outcome = f"played {card.colour} {card.rank}"
            if card.rank == 5 and state.info_tokens < MAX_TOKENS:
                state.info_tokens += 1
        else:
            state.lives -= 1
            state.discards.append((card.colour, card.rank))
            ev.success = False
            ev.outcome = f"misplayed {card.colour} {card.rank}"
        ev.drew = _draw(state, seat)
    elif functor == "discard_card":
        (slot,) = action.args
        hand = state.hands[seat]
        if state.info_tokens >= MAX_TOKENS:
            raise IllegalAction("discard at full tokens")
        if not (isinstance(slot, int) and 1 <= slot <= len(hand)):
            raise IllegalAction(f"discard_card slot {slot!r} out of range")
        card = hand.pop(slot - 1)
        state.discards.append((card.colour, card.rank))
        state.info_tokens += 1
        ev.kind = "discard"
        ev.slot = slot
        ev.card = (card.colour, card.rank)
        ev.outcome = f"discarded {card.colour} {card.rank}"
        ev.drew = _draw(state, seat)
    elif functor in ("hint_colour", "hint_rank"):
        target_name, value = action.args
        if state.info_tokens <= 0:
            raise IllegalAction("hint with no tokens")
        if target_name == name or target_name not in state.names:
            raise IllegalAction(f"bad hint target {target_name!r}")
        target = state.seat(target_name)
        hand = state.hands[target]
        touched: List[int] = []
        untouched: List[int] = []
        if functor == "hint_colour":
            if value not in COLOURS:
                raise IllegalAction(f"unknown colour {value!r}")
            if not any(hc.colour == value for hc in hand):
                raise IllegalAction(f"empty hint: {target_name} has no {value!r}")
            for i, hc in enumerate(hand, start=1):
                if hc.colour == value:
                    hc.known_colour = value
                    touched.append(i)
                else:
                    hc.not_colours.add(value)
                    untouched.append(i)
            ev.kind = "hint_colour"
        else:
            if value not in RANKS:
                raise IllegalAction(f"unknown rank {value!r}")
            if not any(hc.rank == value for hc in hand):
                raise IllegalAction(f"empty hint: {target_name} has no {value!r}")
            for i, hc in enumerate(hand, start=1):
                if hc.rank == value:
                    hc.known_rank = value
                    touched.append(i)
                else:
                    hc.not_ranks.add(value)
                    untouched.append(i)
            ev.kind = "hint_rank"
        state.info_tokens -= 1
        ev.target = target_name
        ev.value = value
        ev.touched = tuple(touched)
        ev.untouched = tuple(untouched)
        ev.outcome = f"hinted {target_name} {value}, {len(touched)} touched"
    else:
        raise IllegalAction(f"unknown action {functor!r}")

    # Turn bookkeeping and end detection.
    state.t = t_now
    if state.turns_left is not None and not (ev.drew and state.turns_left == state.n_players):
        # The countdown starts at the draw that empties the deck; the turn
        # that drew the last card does not consume one of the final turns.
        state.turns_left -= 1
    state.turn = (state.turn + 1) % state.n_players

    if state.lives <= 0:
        state.over = True
        state.outcome = "out of lives"
    elif all(h == 5 for h in state.stacks.values()):
        state.over = True
        state.outcome = "perfect game"
    elif state.turns_left is not None and state.turns_left <= 0:
        state.over = True
        state.outcome = "deck exhausted"

    ev.tokens = state.info_tokens
    ev.lives = state.lives
    ev.score = state.score()
    ev.game_over = state.over
    return ev


def trace_line(ev: Event) -> str:
    from .terms import term_text

    return (f"t={ev.t} actor={ev.actor} action={term_text(ev.action)} "
            f"outcome={ev.outcome} tokens={ev.tokens} lives={ev.lives} score={ev.score}")


# ---------------------------------------------------------------------------
# Observation encoding
# ---------------------------------------------------------------------------


def ontology_facts(state: GameState) -> List[Lit]:
    """Static facts asserted once per game: seats, slots, colours, ranks."""
    facts: List[Lit] = []
    for name in state.names:
        facts.append(Lit("player", (name,)))
    for i, name in enumerate(state.names):
        facts.append(Lit("next_player", (name, state.names[(i + 1) % state.n_players])))
    for s in range(1, state.hand_size() + 1):
        facts.append(Lit("slot", (s,)))
    for c in COLOURS:
        facts.append(Lit("colour", (c,)))
    for r in RANKS:
        facts.append(Lit("rank", (r,)))
    return facts


def observe(state: GameState, seat: int) -> List[Lit]:
    """The seat's current percepts as ground facts, in a fixed order."""
    me = state.names[seat]
    facts: List[Lit] = []
    for other, name in enumerate(state.names):
        hand = state.hands[other]
        for s, hc in enumerate(hand, start=1):
            if other != seat:
                facts.append(Lit("has_card_colour", (name, s, hc.colour)))
                facts.append(Lit("has_card_rank", (name, s, hc.rank)))
            else:
                if hc.known_colour is not None:
                    facts.append(Lit("has_card_colour", (me, s, hc.known_colour)))
                for c in sorted(hc.not_colours):
                    facts.append(Lit("has_card_colour", (me, s, c), pos=False))
                if hc.known_rank is not None:
                    facts.append(Lit("has_card_rank", (me, s, hc.known_rank)))
                for r in sorted(hc.not_ranks):
                    facts.append(Lit("has_card_rank", (me, s, r), pos=False))
    # Hint history is public for every seat, own hand included.
    for name_i, name in enumerate(state.names):
        for s, hc in enumerate(state.hands[name_i], start=1):
            if hc.known_colour is not None:
                facts.append(Lit("hinted_colour", (name, s, hc.known_colour)))
            for c in sorted(hc.not_colours):
                facts.append(Lit("hinted_not_colour", (name, s, c)))
            if hc.known_rank is not None:
                facts.append(Lit("hinted_rank", (name, s, hc.known_rank)))
            for r in sorted(hc.not_ranks):
                facts.append(Lit("hinted_not_rank", (name, s, r)))
    for c in COLOURS:
        facts.append(Lit("stack", (c, state.stacks[c])))
    counts: Dict[Tuple[str, int], int] = {}
    for c, r in state.discards:
        counts[(c, r)] = counts.get((c, r), 0) + 1
    for (c, r) in sorted(counts):
        facts.append(Lit("discarded", (c, r, counts[(c, r)])))
    facts.append(Lit("info_tokens", (state.info_tokens,)))
    facts.append(Lit("lives", (state.lives,)))
    facts.append(Lit("deck_size", (len(state.deck),)))
    if not state.over:
        facts.append(Lit("player_turn", (state.current_player(),)))
    for name_i, name in enumerate(state.names):
        for s in range(1, len(state.hands[name_i]) + 1):
            facts.append(Lit("hand_slot", (name, s)))
    return facts
