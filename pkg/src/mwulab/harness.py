"""Seeded experiment harness: single trials, sweeps over n, and
corrupted-weight trajectories.

Every trial derives its own random stream from (seed, trial_id), so results
are reproducible byte-for-byte and independent of trial execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import adaptive, core, nonadaptive
from .solver import SolverOptions, TableBudgetExceeded

ADVERSARIES = ("none", "nonadaptive", "adaptive")
DEFAULT_TRIALS = 20
DEFAULT_TAU_FRACTION = 0.1
ADAPTIVE_N_CAP = 16


class ConfigError(ValueError):
    """Invalid simulation configuration."""


@dataclass(frozen=True)
class SimConfig:
    n: int
    tau_fraction: float = DEFAULT_TAU_FRACTION
    tau: int | None = None  # absolute override of tau_fraction
    eta: float | str = "auto"
    adversary: str = "none"
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    max_rounds: int = core.DEFAULT_MAX_ROUNDS
    hidden_policy: str = "uniform"
    solver_backend: str = "auto"
    dp_resolution: float | None = None
    enum_budget: int = adaptive.DEFAULT_ENUM_BUDGET
    allow_large_adaptive: bool = False

    def resolved_tau(self) -> int:
        if self.tau is not None:
            return self.tau
        return int(round(self.tau_fraction * self.n))

    def resolved_eta(self) -> float:
        if self.eta == "auto":
            return core.default_eta(self.n)
        return float(self.eta)

    def solver_options(self) -> SolverOptions:
        return SolverOptions(backend=self.solver_backend, resolution=self.dp_resolution)

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError("n must be a positive integer")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.max_rounds < 1:
            raise ConfigError("max_rounds must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer")
        if self.adversary not in ADVERSARIES:
            raise ConfigError(f"adversary must be one of {ADVERSARIES}")
        if self.hidden_policy not in core.HIDDEN_POLICIES:
            raise ConfigError(f"hidden policy must be one of {core.HIDDEN_POLICIES}")
        if self.solver_backend not in ("auto", "bruteforce", "dp"):
            raise ConfigError("solver backend must be auto, bruteforce or dp")
        tau = self.resolved_tau()
        if not 0 <= tau < self.n:
            raise ConfigError(f"tau must satisfy 0 <= tau < n, got tau={tau} n={self.n}")
        eta = self.resolved_eta()
        if not 0.0 < eta < 0.5:
            raise ConfigError(f"eta must lie strictly between 0 and 1/2, got {eta}")
        if self.enum_budget < 1:
            raise ConfigError("enum budget must be >= 1")
        if (
            self.adversary == "adaptive"
            and self.n > ADAPTIVE_N_CAP
            and not self.allow_large_adaptive
        ):
            raise ConfigError(
                f"adaptive runs above n={ADAPTIVE_N_CAP} are exponentially slow; "
                "pass allow_large_adaptive to override"
            )


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    n: int
    tau: int
    adversary: str
    rounds: int
    truncated: bool
    final_corrupted_weight: float
    seed_used: int
    error: str | None = None  # not part of the CSV schema


@dataclass(frozen=True)
class SweepRow:
    n: int
    tau: int
    adversary: str
    trials: int
    mean_rounds: float
    std_rounds: float
    errored_trials: int
    seed: int


@dataclass(frozen=True)
class TrajectoryRow:
    round: int
    mean_corrupted_weight: float
    mean_good_weight: float
    contributing_trials: int


def derive_trial_seed(seed: int, trial_id: int) -> int:
    """Deterministic 64-bit stream seed for one trial."""
    ss = np.random.SeedSequence([int(seed), int(trial_id)])
    return int(ss.generate_state(1, np.uint64)[0])


def _adversary_for(config: SimConfig) -> core.AdversaryPolicy:
    tau = config.resolved_tau()
    if config.adversary == "none":
        return core.NoAdversary()
    if config.adversary == "nonadaptive":
        return nonadaptive.NonAdaptiveAdversary(tau=tau, options=config.solver_options())
    return adaptive.AdaptiveAdversary(
        tau=tau, enum_budget=config.enum_budget, options=config.solver_options()
    )


def run_trial(config: SimConfig, trial_id: int, *, keep_episode: bool = False):
    """One seeded episode.  A budget blowup is recorded, not raised.

    Returns the :class:`TrialRecord`, or ``(record, EpisodeResult)`` when
    ``keep_episode`` is set (the episode is None for errored trials).
    """
    config.validate()
    tau = config.resolved_tau()
    seed_used = derive_trial_seed(config.seed, trial_id)
    params = core.MwuParams(config.n, config.resolved_eta(), config.max_rounds)
    record_kwargs = dict(
        trial_id=trial_id, n=config.n, tau=tau, adversary=config.adversary,
        seed_used=seed_used,
    )
    try:
        result = core.run_episode(
            params,
            _adversary_for(config),
            np.random.default_rng(seed_used),
            hidden_policy=config.hidden_policy,
        )
    except (adaptive.SearchBudgetExceeded, TableBudgetExceeded) as exc:
        record = TrialRecord(
            rounds=0, truncated=False, final_corrupted_weight=0.0,
            error=f"{type(exc).__name__}: {exc}", **record_kwargs,
        )
        return (record, None) if keep_episode else record
    record = TrialRecord(
        rounds=result.rounds,
        truncated=result.truncated,
        final_corrupted_weight=result.corrupted_weights[-1],
        **record_kwargs,
    )
    return (record, result) if keep_episode else record


def run_trials(config: SimConfig) -> list[TrialRecord]:
    return [run_trial(config, t) for t in range(config.trials)]


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    k = len(values)
    mean = float(sum(values)) / k
    if k < 2:
        return mean, 0.0
    var = sum((v - mean) ** 2 for v in values) / (k - 1)
    return mean, math.sqrt(var)


def run_sweep(configs: Sequence[SimConfig]) -> list[SweepRow]:
    """Aggregate rounds-to-success per configuration (one row per n)."""
    if not configs:
        return []
    first = configs[0]
    for config in configs:
        if config.adversary != first.adversary or config.trials != first.trials:
            raise ConfigError("sweep configs must share adversary type and trial count")
    rows = []
    for config in configs:
        records = run_trials(config)
        good = [r for r in records if r.error is None]
        errored = len(records) - len(good)
        mean, std = _mean_std([r.rounds for r in good]) if good else (0.0, 0.0)
        rows.append(
            SweepRow(
                n=config.n,
                tau=config.resolved_tau(),
                adversary=config.adversary,
                trials=config.trials,
                mean_rounds=mean,
                std_rounds=std,
                errored_trials=errored,
                seed=config.seed,
            )
        )
    return rows


def run_trajectory(config: SimConfig) -> list[TrajectoryRow]:
    """Per-round mean corrupted/honest totals across trials.

    Episodes end at different rounds; each round averages only the trials
    still running then, and reports how many contributed.
    """
    config.validate()
    if config.adversary != "nonadaptive":
        raise ConfigError("trajectories are defined for the nonadaptive adversary")
    params = core.MwuParams(config.n, config.resolved_eta(), config.max_rounds)
    episodes = []
    for t in range(config.trials):
        episodes.append(
            core.run_episode(
                params,
                _adversary_for(config),
                np.random.default_rng(derive_trial_seed(config.seed, t)),
                hidden_policy=config.hidden_policy,
            )
        )
    longest = max(ep.rounds for ep in episodes)
    rows = []
    for r in range(1, longest + 1):
        live = [ep for ep in episodes if ep.rounds >= r]
        rows.append(
            TrajectoryRow(
                round=r,
                mean_corrupted_weight=float(
                    sum(ep.corrupted_weights[r - 1] for ep in live) / len(live)
                ),
                mean_good_weight=float(
                    sum(ep.good_weights[r - 1] for ep in live) / len(live)
                ),
                contributing_trials=len(live),
            )
        )
    return rows
