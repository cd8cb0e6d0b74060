import numpy as np
import pytest

from mwulab.adaptive import AdaptiveAdversary
from mwulab.core import MwuParams, run_episode
from mwulab.game import global_coin_instance, new_game, run_game, step_game
from mwulab.nonadaptive import NonAdaptiveAdversary


def _constant_formula(value):
    return lambda history: value


class TestStepGame:
    def test_always_true_terminates_after_one_round(self):
        from dataclasses import replace

        params = MwuParams(4, 0.1, max_rounds=50)
        instance = replace(global_coin_instance(params), terminated=_constant_formula(True))
        state = run_game(instance, 0)
        assert state.round_index == 1

    def test_always_false_runs_to_the_cap(self):
        from dataclasses import replace

        params = MwuParams(4, 0.1, max_rounds=17)
        instance = replace(global_coin_instance(params), terminated=_constant_formula(False))
        state = run_game(instance, 0)
        assert state.round_index == 17

    def test_single_step_plays_one_round(self):
        params = MwuParams(5, 0.2, max_rounds=10)
        instance = global_coin_instance(params)
        state = new_game(instance)
        rng = np.random.default_rng(3)
        state, done = step_game(instance, state, rng)
        assert state.round_index == 1
        assert len(state.history) == 1
        assert state.history[0].output in (-1, 1)
        assert isinstance(done, bool)

    def test_unknown_hidden_policy_rejected(self):
        with pytest.raises(ValueError):
            global_coin_instance(MwuParams(4, 0.1), hidden_policy="diagonal")


class TestTraceEquivalence:
    @pytest.mark.parametrize(
        "adversary_factory",
        [
            lambda: None,
            lambda: NonAdaptiveAdversary(tau=2),
            lambda: AdaptiveAdversary(tau=1),
        ],
        ids=["none", "nonadaptive", "adaptive"],
    )
    def test_round_for_round(self, adversary_factory):
        params = MwuParams(10, 0.2, max_rounds=300)
        for seed in range(8):
            episode = run_episode(params, adversary_factory(), seed, keep_round_log=True)
            state = run_game(global_coin_instance(params, adversary_factory()), seed)
            assert state.round_index == episode.rounds
            for rec, game_round in zip(episode.round_log, state.history):
                assert rec.hidden == game_round.context
                assert rec.output == game_round.output
                assert np.array_equal(rec.advice, game_round.advice)
            assert np.array_equal(state.weights, episode.final_weights)
            assert state.history[-1].corrupted == episode.corrupted_final

    def test_corrupted_evolution_matches(self):
        params = MwuParams(8, 0.25, max_rounds=120)
        for seed in range(5):
            episode = run_episode(params, AdaptiveAdversary(tau=2), seed, keep_round_log=True)
            state = run_game(global_coin_instance(params, AdaptiveAdversary(tau=2)), seed)
            game_sets = [r.corrupted for r in state.history]
            assert game_sets[-1] == episode.corrupted_final
            # persistent growth is monotone
            for earlier, later in zip(game_sets, game_sets[1:]):
                assert set(earlier) <= set(later)

    def test_fixed_hidden_policy_equivalence(self):
        params = MwuParams(6, 0.2, max_rounds=100)
        for seed in range(5):
            episode = run_episode(params, None, seed, hidden_policy="plus", keep_round_log=True)
            state = run_game(global_coin_instance(params, hidden_policy="plus"), seed)
            assert state.round_index == episode.rounds
            assert all(r.context == 1 for r in state.history)
