"""Simulation lab for a weighted-majority global-coin protocol under greedy
adversaries: the update engine, the adversaries' subset-sum solvers, a
pluggable game generalization, and a seeded experiment harness."""

from .core import (
    EpisodeResult,
    MwuParams,
    NoAdversary,
    ResolvedRound,
    RoundOutcome,
    compute_gains,
    default_eta,
    mwu_output,
    run_episode,
    run_round,
    sgn,
    update_weights,
)
from .solver import (
    SolverInstance,
    SolverOptions,
    SolverSolution,
    TableBudgetExceeded,
    solve,
    solve_bruteforce,
    solve_dp,
)
from .nonadaptive import (
    CapResult,
    NonAdaptiveAdversary,
    RoundPlan,
    compute_cap,
    non_adaptive_value,
    plan_advice,
)
from .adaptive import (
    AdaptiveAdversary,
    AdaptiveState,
    SearchBudgetExceeded,
    SearchResult,
    apply_plan,
    assess_current,
    initial_state,
    search_plan,
)
from .game import GameInstance, GameState, global_coin_instance, new_game, run_game, step_game
from .harness import (
    SimConfig,
    SweepRow,
    TrajectoryRow,
    TrialRecord,
    run_sweep,
    run_trajectory,
    run_trial,
    run_trials,
)

__version__ = "0.1.0"
