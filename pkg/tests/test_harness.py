import math

import pytest

from mwulab.harness import (
    ConfigError,
    SimConfig,
    derive_trial_seed,
    run_sweep,
    run_trajectory,
    run_trial,
    run_trials,
)


class TestConfig:
    def test_tau_from_fraction(self):
        assert SimConfig(n=250).resolved_tau() == 25

    def test_tau_override(self):
        assert SimConfig(n=250, tau=7).resolved_tau() == 7

    def test_eta_auto(self):
        assert SimConfig(n=1000).resolved_eta() == pytest.approx(
            math.sqrt(math.log(1000) / 1000)
        )

    def test_eta_explicit(self):
        assert SimConfig(n=10, eta=0.3).resolved_eta() == 0.3

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0),
            dict(n=10, trials=0),
            dict(n=10, seed=-1),
            dict(n=10, adversary="sneaky"),
            dict(n=10, hidden_policy="diagonal"),
            dict(n=10, tau=10, adversary="nonadaptive"),
            dict(n=10, eta=0.5),
            dict(n=10, solver_backend="quantum"),
            dict(n=20, adversary="adaptive"),  # above the adaptive cap
            dict(n=10, max_rounds=0),
            dict(n=10, enum_budget=0),
        ],
    )
    def test_invalid_configs(self, kwargs):
        with pytest.raises(ConfigError):
            SimConfig(**kwargs).validate()

    def test_adaptive_cap_override(self):
        SimConfig(n=20, adversary="adaptive", allow_large_adaptive=True).validate()


class TestSeedDerivation:
    def test_deterministic(self):
        assert derive_trial_seed(42, 3) == derive_trial_seed(42, 3)

    def test_distinct_per_trial_and_seed(self):
        seeds = {derive_trial_seed(s, t) for s in range(20) for t in range(20)}
        assert len(seeds) == 400


class TestRunTrial:
    def test_identical_records(self):
        config = SimConfig(n=100, adversary="none", seed=42)
        assert run_trial(config, 0) == run_trial(config, 0)

    def test_rounds_at_least_one(self):
        config = SimConfig(n=10, tau=1, adversary="nonadaptive", seed=1)
        record = run_trial(config, 2)
        assert record.rounds >= 1
        assert record.error is None

    def test_nonadaptive_positive_corrupted_weight(self):
        config = SimConfig(n=50, tau=5, adversary="nonadaptive", seed=3)
        record = run_trial(config, 0)
        assert record.final_corrupted_weight > 0

    def test_budget_exceeded_recorded_not_raised(self):
        config = SimConfig(n=10, adversary="adaptive", tau=3, enum_budget=2, seed=0)
        record = run_trial(config, 0)
        assert record.error is not None
        assert "SearchBudgetExceeded" in record.error


class TestRunSweep:
    def test_aggregates_match_reference(self):
        configs = [
            SimConfig(n=n, tau=2, adversary="nonadaptive", trials=8, seed=5)
            for n in (20, 30)
        ]
        rows = run_sweep(configs)
        for config, row in zip(configs, rows):
            rounds = [run_trial(config, t).rounds for t in range(config.trials)]
            mean = sum(rounds) / len(rounds)
            var = sum((x - mean) ** 2 for x in rounds) / (len(rounds) - 1)
            assert row.mean_rounds == pytest.approx(mean, rel=1e-12)
            assert row.std_rounds == pytest.approx(math.sqrt(var), rel=1e-12)
            assert row.errored_trials == 0
            assert row.tau == 2 and row.seed == 5

    def test_mixed_sweep_rejected(self):
        configs = [
            SimConfig(n=20, adversary="none"),
            SimConfig(n=30, adversary="nonadaptive"),
        ]
        with pytest.raises(ConfigError):
            run_sweep(configs)

    def test_empty(self):
        assert run_sweep([]) == []

    def test_errored_trials_counted(self):
        configs = [SimConfig(n=10, adversary="adaptive", tau=3, enum_budget=2, trials=3)]
        rows = run_sweep(configs)
        assert rows[0].errored_trials == 3
        assert rows[0].mean_rounds == 0.0


class TestRunTrajectory:
    def test_shapes_and_counts(self):
        config = SimConfig(n=60, tau=6, adversary="nonadaptive", trials=10, seed=7)
        rows = run_trajectory(config)
        assert rows[0].round == 1
        assert [r.round for r in rows] == list(range(1, len(rows) + 1))
        counts = [r.contributing_trials for r in rows]
        assert counts[0] == 10
        assert all(a >= b for a, b in zip(counts, counts[1:]))
        assert counts[-1] >= 1

    def test_round_one_good_weight_bound(self):
        config = SimConfig(n=60, tau=6, adversary="nonadaptive", trials=10, seed=7)
        rows = run_trajectory(config)
        eta = config.resolved_eta()
        assert rows[0].mean_good_weight <= (config.n - 6) * (1 + eta) + 1e-9

    def test_requires_nonadaptive(self):
        with pytest.raises(ConfigError):
            run_trajectory(SimConfig(n=20, adversary="none"))

    def test_deterministic(self):
        config = SimConfig(n=40, tau=4, adversary="nonadaptive", trials=5, seed=11)
        assert run_trajectory(config) == run_trajectory(config)


class TestTrialOrderIndependence:
    def test_records_do_not_depend_on_execution_order(self):
        config = SimConfig(n=30, tau=3, adversary="nonadaptive", trials=6, seed=9)
        forward = run_trials(config)
        backward = [run_trial(config, t) for t in reversed(range(config.trials))]
        assert forward == list(reversed(backward))
