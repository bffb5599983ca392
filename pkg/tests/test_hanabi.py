"""Game engine: dealing, legality, transitions, scoring, observations."""

import pytest

from abditom.errors import GameOver, IllegalAction, InvalidPlayerCount
from abditom.hanabi import (
    COLOURS,
    HandCard,
    apply_action,
    legal_actions,
    new_game,
    observe,
    ontology_facts,
    trace_line,
)
from abditom.prng import SplitMix64
from abditom.terms import Lit, Struct

from oracles import full_deck, observation_violations, state_cards, state_violations


def play(slot):
    return Struct("play_card", (slot,))


def discard(slot):
    return Struct("discard_card", (slot,))


def hint_colour(target, colour):
    return Struct("hint_colour", (target, colour))


def hint_rank(target, rank):
    return Struct("hint_rank", (target, rank))


class TestNewGame:
    def test_three_players_five_cards_each(self):
        state = new_game(3, 42)
        assert [len(h) for h in state.hands] == [5, 5, 5]
        assert len(state.deck) == 35
        assert state.info_tokens == 8
        assert state.lives == 3
        assert all(top == 0 for top in state.stacks.values())

    def test_five_players_four_cards_each(self):
        state = new_game(5, 7)
        assert [len(h) for h in state.hands] == [4] * 5
        assert len(state.deck) == 30

    def test_player_count_bounds(self):
        with pytest.raises(InvalidPlayerCount):
            new_game(1, 0)
        with pytest.raises(InvalidPlayerCount):
            new_game(6, 0)

    def test_duplicate_names_rejected(self):
        with pytest.raises(InvalidPlayerCount):
            new_game(2, 0, names=("x", "x"))

    def test_deal_is_the_full_deck(self):
        state = new_game(4, 9)
        assert state_cards(state) == full_deck()

    def test_same_seed_same_deal(self):
        a, b = new_game(3, 1234), new_game(3, 1234)
        assert a.deck == b.deck
        assert [[(hc.colour, hc.rank) for hc in h] for h in a.hands] == [
            [(hc.colour, hc.rank) for hc in h] for h in b.hands
        ]

    def test_default_seat_names(self):
        assert new_game(3, 0).names == ("alice", "bob", "cathy")

    def test_ontology_fact_counts(self):
        state = new_game(3, 0)
        facts = ontology_facts(state)
        by_pred = {}
        for f in facts:
            by_pred[f.pred] = by_pred.get(f.pred, 0) + 1
        assert by_pred == {
            "player": 3, "next_player": 3, "slot": 5, "colour": 5, "rank": 5,
        }


class TestLegalActions:
    def test_no_hints_without_tokens(self):
        state = new_game(3, 5)
        state.info_tokens = 0
        acts = legal_actions(state, 0)
        assert not any(a.functor.startswith("hint") for a in acts)
        assert any(a.functor == "discard_card" for a in acts)

    def test_no_discards_at_full_tokens(self):
        state = new_game(3, 5)
        acts = legal_actions(state, 0)
        assert not any(a.functor == "discard_card" for a in acts)
        assert any(a.functor.startswith("hint") for a in acts)

    def test_sixteen_action_enumeration(self):
        # Full tokens, opponents showing {3 colours, 4 ranks} and
        # {2 colours, 2 ranks}: 5 plays + 0 discards + 7 + 4 hints.
        state = new_game(3, 5)
        state.hands[1] = [
            HandCard("red", 1), HandCard("red", 2), HandCard("green", 3),
            HandCard("blue", 4), HandCard("blue", 1),
        ]
        state.hands[2] = [
            HandCard("yellow", 1), HandCard("yellow", 1), HandCard("yellow", 2),
            HandCard("white", 2), HandCard("white", 1),
        ]
        acts = legal_actions(state, 0)
        assert len(acts) == 16
        kinds = {}
        for a in acts:
            kinds[a.functor] = kinds.get(a.functor, 0) + 1
        assert kinds == {"play_card": 5, "hint_colour": 5, "hint_rank": 6}

    def test_plays_enumerate_each_slot_in_order(self):
        state = new_game(2, 5)
        acts = legal_actions(state, 0)
        assert acts[:5] == [play(s) for s in range(1, 6)]


class TestPlay:
    def test_misplay_costs_a_life_and_discards(self):
        state = new_game(3, 7)
        state.stacks["blue"] = 2
        state.hands[0][0] = HandCard("blue", 4)
        ev = apply_action(state, 0, play(1))
        assert ev.success is False
        assert state.lives == 2
        assert ("blue", 4) in state.discards
        assert ev.card == ("blue", 4)
        assert ev.drew and len(state.hands[0]) == 5

    def test_successful_play_stacks_the_card(self):
        state = new_game(3, 7)
        state.hands[0][1] = HandCard("red", 1)
        ev = apply_action(state, 0, play(2))
        assert ev.success is True
        assert state.stacks["red"] == 1
        assert state.lives == 3
        assert ("red", 1) not in state.discards

    def test_completing_a_stack_recovers_a_token(self):
        state = new_game(3, 7)
        state.stacks["red"] = 4
        state.info_tokens = 5
        state.hands[0][0] = HandCard("red", 5)
        apply_action(state, 0, play(1))
        assert state.info_tokens == 6

    def test_token_recovery_respects_the_cap(self):
        state = new_game(3, 7)
        state.stacks["red"] = 4
        state.hands[0][0] = HandCard("red", 5)
        apply_action(state, 0, play(1))
        assert state.info_tokens == 8

    def test_out_of_range_slot(self):
        state = new_game(3, 7)
        with pytest.raises(IllegalAction):
            apply_action(state, 0, play(6))

    def test_turn_advances(self):
        state = new_game(3, 7)
        apply_action(state, 0, play(1))
        assert state.turn == 1
        with pytest.raises(IllegalAction):
            apply_action(state, 0, play(1))


class TestDiscard:
    def test_recovers_a_token(self):
        state = new_game(3, 7)
        state.info_tokens = 5
        state.hands[0][4] = HandCard("green", 2)
        ev = apply_action(state, 0, discard(5))
        assert state.info_tokens == 6
        assert ev.kind == "discard"
        assert ("green", 2) in state.discards

    def test_forbidden_at_full_tokens(self):
        state = new_game(3, 7)
        with pytest.raises(IllegalAction):
            apply_action(state, 0, discard(1))


class TestHint:
    def white_hint_state(self):
        state = new_game(3, 7)
        state.hands[1] = [
            HandCard("red", 1), HandCard("white", 2), HandCard("white", 3),
            HandCard("green", 4), HandCard("white", 5),
        ]
        return state

    def test_touched_slots_and_token_cost(self):
        state = self.white_hint_state()
        ev = apply_action(state, 0, hint_colour("bob", "white"))
        assert ev.touched == (2, 3, 5)
        assert ev.untouched == (1, 4)
        assert state.info_tokens == 7

    def test_hint_marks_the_hand(self):
        state = self.white_hint_state()
        apply_action(state, 0, hint_colour("bob", "white"))
        hand = state.hands[1]
        assert [hc.known_colour for hc in hand] == [None, "white", "white", None, "white"]
        assert "white" in hand[0].not_colours and "white" in hand[3].not_colours

    def test_rank_hints_mark_ranks(self):
        state = self.white_hint_state()
        apply_action(state, 0, hint_rank("bob", 3))
        hand = state.hands[1]
        assert hand[2].known_rank == 3
        assert all(3 in hc.not_ranks for i, hc in enumerate(hand) if i != 2)

    def test_empty_hint_rejected(self):
        state = new_game(3, 7)
        state.hands[1] = [HandCard("red", r) for r in (1, 1, 2, 3, 4)]
        with pytest.raises(IllegalAction):
            apply_action(state, 0, hint_colour("bob", "blue"))

    def test_self_hint_rejected(self):
        state = new_game(3, 7)
        with pytest.raises(IllegalAction):
            apply_action(state, 0, hint_colour("alice", "red"))

    def test_hint_without_tokens_rejected(self):
        state = self.white_hint_state()
        state.info_tokens = 0
        with pytest.raises(IllegalAction):
            apply_action(state, 0, hint_colour("bob", "white"))

    def test_fallback_alias_is_a_colour_hint(self):
        state = self.white_hint_state()
        ev = apply_action(state, 0, Struct("hint_fallback", ("bob", "white")))
        assert ev.kind == "hint_colour"
        assert ev.touched == (2, 3, 5)


class TestScoring:
    def test_perfect_game(self):
        state = new_game(3, 7)
        for c in COLOURS:
            state.stacks[c] = 5
        state.stacks["red"] = 4
        state.hands[0][0] = HandCard("red", 5)
        ev = apply_action(state, 0, play(1))
        assert state.score() == 25
        assert state.is_over() and state.outcome == "perfect game"
        assert ev.game_over

    def test_out_of_lives_zeroes_the_score(self):
        state = new_game(3, 7)
        state.stacks["green"] = 3  # some progress on the table
        state.lives = 1
        state.stacks["blue"] = 2
        state.hands[0][0] = HandCard("blue", 5)
        apply_action(state, 0, play(1))
        assert state.lives == 0
        assert state.score() == 0
        assert state.is_over() and state.outcome == "out of lives"

    def test_fresh_game_scores_zero_not_over(self):
        state = new_game(3, 7)
        assert state.score() == 0
        assert not state.is_over()

    def test_acting_after_the_end_is_rejected(self):
        state = new_game(3, 7)
        state.lives = 1
        state.stacks["blue"] = 2
        state.hands[0][0] = HandCard("blue", 5)
        apply_action(state, 0, play(1))
        with pytest.raises(GameOver):
            apply_action(state, 1, play(1))


class TestFinalRound:
    def test_everyone_gets_one_turn_after_the_deck_empties(self):
        state = new_game(2, 3)
        state.deck = [("red", 1)]
        state.info_tokens = 5
        apply_action(state, 0, discard(1))  # draws the last card
        assert state.turns_left == 2
        assert not state.is_over()
        apply_action(state, 1, discard(1))  # no draw left
        assert not state.is_over()
        apply_action(state, 0, discard(1))
        assert state.is_over()
        assert state.outcome == "deck exhausted"

    def test_hands_shrink_once_the_deck_is_gone(self):
        state = new_game(2, 3)
        state.deck = []
        state.turns_left = 2
        state.info_tokens = 5
        apply_action(state, 0, discard(1))
        assert len(state.hands[0]) == 4


class TestObserve:
    def test_sees_other_hands_exactly(self):
        state = new_game(3, 7)
        state.hands[1][3] = HandCard("blue", 3)
        facts = set(observe(state, 0))
        assert Lit("has_card_colour", ("bob", 4, "blue")) in facts
        assert Lit("has_card_rank", ("bob", 4, 3)) in facts

    def test_never_sees_own_unhinted_identity(self):
        state = new_game(3, 7)
        facts = observe(state, 0)
        assert not any(
            f.pred in ("has_card_colour", "has_card_rank") and f.args[0] == "alice"
            for f in facts
        )

    def test_hints_become_own_hand_knowledge(self):
        state = new_game(3, 7)
        state.hands[1] = [
            HandCard("red", 1), HandCard("white", 2), HandCard("white", 3),
            HandCard("green", 4), HandCard("white", 5),
        ]
        apply_action(state, 0, hint_colour("bob", "white"))
        facts = set(observe(state, 1))
        assert Lit("has_card_colour", ("bob", 2, "white")) in facts
        assert Lit("has_card_colour", ("bob", 1, "white"), pos=False) in facts
        assert Lit("has_card_colour", ("bob", 4, "white"), pos=False) in facts
        # Identities stay hidden beyond the hint marks.
        assert Lit("has_card_rank", ("bob", 2, 2)) not in facts

    def test_hint_history_is_public(self):
        state = new_game(3, 7)
        state.hands[1][0] = HandCard("red", 1)
        apply_action(state, 0, hint_colour("bob", "red"))
        for seat in range(3):
            facts = set(observe(state, seat))
            assert Lit("hinted_colour", ("bob", 1, "red")) in facts

    def test_table_state_facts(self):
        state = new_game(3, 7)
        state.stacks["red"] = 2
        state.discards.append(("blue", 1))
        state.discards.append(("blue", 1))
        facts = set(observe(state, 2))
        assert Lit("stack", ("red", 2)) in facts
        assert Lit("discarded", ("blue", 1, 2)) in facts
        assert Lit("info_tokens", (8,)) in facts
        assert Lit("lives", (3,)) in facts
        assert Lit("deck_size", (35,)) in facts
        assert Lit("player_turn", ("alice",)) in facts

    def test_truthful_on_a_random_prefix(self):
        state = new_game(4, 99)
        rng = SplitMix64(1)
        for _ in range(25):
            if state.is_over():
                break
            acts = legal_actions(state, state.turn)
            apply_action(state, state.turn, rng.choice(acts))
            for seat in range(state.n_players):
                assert observation_violations(state, seat) == []


class TestRandomGameAudits:
    def test_invariants_hold_across_random_games(self):
        for base in range(40):
            state = new_game(2 + base % 4, 1000 + base)
            rng = SplitMix64(base)
            while not state.is_over():
                acts = legal_actions(state, state.turn)
                apply_action(state, state.turn, rng.choice(acts))
                assert state_violations(state) == []
            assert 0 <= state.score() <= 25

    def test_replay_determinism(self):
        def run(seed):
            state = new_game(3, seed)
            rng = SplitMix64(seed ^ 0xABCDEF)
            lines = []
            while not state.is_over():
                acts = legal_actions(state, state.turn)
                ev = apply_action(state, state.turn, rng.choice(acts))
                lines.append(trace_line(ev))
            return lines, state.score()

        assert run(2024) == run(2024)

    def test_fixed_actions_fixed_outcome(self):
        first = new_game(3, 77)
        actions = []
        rng = SplitMix64(4)
        for _ in range(30):
            if first.is_over():
                break
            act = rng.choice(legal_actions(first, first.turn))
            actions.append((first.turn, act))
            apply_action(first, first.turn, act)

        second = new_game(3, 77)
        for seat, act in actions:
            apply_action(second, seat, act)
        assert second.stacks == first.stacks
        assert second.discards == first.discards
        assert second.info_tokens == first.info_tokens
        assert second.lives == first.lives


class TestTraceLine:
    def test_exact_format(self):
        state = new_game(3, 1)
        state.info_tokens = 5
        state.hands[0][2] = HandCard("red", 1)
        ev = apply_action(state, 0, discard(3))
        assert trace_line(ev) == (
            "t=1 actor=alice action=discard_card(3) "
            "outcome=discarded red 1 tokens=6 lives=3 score=0"
        )
