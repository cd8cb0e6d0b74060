"""Greedy adaptive adversary.

Starts with no captured experts and grows the captured set as needed, up to a
budget.  Each round it may additionally commandeer the advice of a limited
number of honest experts ("volatile" experts, reset every round).  The search
prefers capturing as few new experts as possible, then flipping as few
volatile experts as possible:

* levels (m, v) are visited in lexicographic order, m new captures outer,
  v volatile flips inner;
* the first level at which some candidate makes the round oracle nonzero is
  accepted, and within that level the candidate maximizing the oracle value
  wins (ties: lexicographically smallest capture set, then volatile set);
* if no level works the adversary gives up for the round and has its captured
  experts advise the hidden direction to bank the guaranteed gain.

The oracle for a candidate is the non-adaptive round value over the union of
captured, newly captured and volatile experts; only captures persist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np

from .nonadaptive import non_adaptive_value, plan_advice
from .solver import SolverOptions

DEFAULT_ENUM_BUDGET = 10_000_000

OUTCOME_NO_ACTION = "no-action-needed"
OUTCOME_CAPTURED = "captured"
OUTCOME_VOLATILE = "volatile-only"
OUTCOME_GAVE_UP = "gave-up"

_DEFAULT_OPTIONS = SolverOptions()


class SearchBudgetExceeded(RuntimeError):
    """The per-round candidate enumeration exceeded its hard cap."""


@dataclass(frozen=True)
class AdaptiveState:
    corrupted: tuple[int, ...]
    budget: int  # maximum total captures
    volatile_limit: int  # per-round flip allowance
    rounds_elapsed: int = 0


def initial_state(n: int, budget: int, volatile_limit: int | None = None) -> AdaptiveState:
    """Fresh state: nobody captured, flip allowance floor(sqrt(n))."""
    if not 0 <= budget < n:
        raise ValueError(f"capture budget must satisfy 0 <= budget < n, got {budget}")
    limit = math.isqrt(n) if volatile_limit is None else volatile_limit
    return AdaptiveState((), budget, limit)


@dataclass(frozen=True)
class SearchResult:
    new_captures: tuple[int, ...]
    volatile: tuple[int, ...]
    oracle_value: float
    outcome: str


def assess_current(
    state: AdaptiveState,
    weights: np.ndarray,
    advice: np.ndarray,
    hidden: int,
    eta: float,
    *,
    options: SolverOptions = _DEFAULT_OPTIONS,
) -> float:
    """Round value using only the already-captured experts (0 = insufficient)."""
    return non_adaptive_value(weights, advice, state.corrupted, hidden, eta, options=options)


def search_plan(
    state: AdaptiveState,
    weights: np.ndarray,
    advice: np.ndarray,
    hidden: int,
    eta: float,
    *,
    enum_budget: int = DEFAULT_ENUM_BUDGET,
    options: SolverOptions = _DEFAULT_OPTIONS,
) -> SearchResult:
    """Decide this round's captures and volatile flips.

    Deterministic for identical inputs.  Raises
    :class:`SearchBudgetExceeded` once more than ``enum_budget`` candidate
    subsets have been evaluated this round.
    """
    current = assess_current(state, weights, advice, hidden, eta, options=options)
    if current > 0.0:
        return SearchResult((), (), current, OUTCOME_NO_ACTION)

    n = len(weights)
    captured = set(state.corrupted)
    others = [i for i in range(n) if i not in captured]
    max_new = state.budget - len(state.corrupted)
    base = tuple(sorted(state.corrupted))
    calls = 0

    for m in range(0, max_new + 1):
        for v in range(0, state.volatile_limit + 1):
            if m == 0 and v == 0:
                continue  # that is exactly assess_current, already zero
            best: tuple[float, tuple[int, ...], tuple[int, ...]] | None = None
            for new_caps in combinations(others, m):
                cap_set = set(new_caps)
                rest = [i for i in others if i not in cap_set]
                for flips in combinations(rest, v):
                    calls += 1
                    if calls > enum_budget:
                        raise SearchBudgetExceeded(
                            f"candidate enumeration exceeded {enum_budget} "
                            f"oracle calls in one round"
                        )
                    union = sorted(base + new_caps + flips)
                    value = non_adaptive_value(
                        weights, advice, union, hidden, eta, options=options
                    )
                    # Enumeration order is lexicographic, so a strict ">"
                    # keeps the smallest capture set, then volatile set.
                    if value > 0.0 and (best is None or value > best[0]):
                        best = (value, new_caps, flips)
            if best is not None:
                outcome = OUTCOME_CAPTURED if m > 0 else OUTCOME_VOLATILE
                return SearchResult(best[1], best[2], best[0], outcome)
    return SearchResult((), (), 0.0, OUTCOME_GAVE_UP)


def apply_plan(
    state: AdaptiveState,
    result: SearchResult,
    weights: np.ndarray,
    advice: np.ndarray,
    hidden: int,
    *,
    options: SolverOptions = _DEFAULT_OPTIONS,
) -> tuple[AdaptiveState, np.ndarray]:
    """Commit a search result: grow the captured set and emit the full advice.

    Volatile experts are controlled for this round only and do not join the
    captured set.  On a gave-up round every captured expert advises the
    hidden direction and nothing is flipped.
    """
    full_advice = np.asarray(advice).copy()
    if result.outcome == OUTCOME_GAVE_UP:
        if state.corrupted:
            full_advice[list(state.corrupted)] = hidden
        return replace(state, rounds_elapsed=state.rounds_elapsed + 1), full_advice

    controlled = sorted(set(state.corrupted) | set(result.new_captures) | set(result.volatile))
    # plan_advice re-solves the union; it can only deviate from the search's
    # oracle at an exact cap boundary, where it degrades rather than lies.
    plan = plan_advice(weights, advice, controlled, hidden, options=options)
    for i, a in plan.advice_for_corrupted.items():
        full_advice[i] = a
    new_state = AdaptiveState(
        corrupted=tuple(sorted(set(state.corrupted) | set(result.new_captures))),
        budget=state.budget,
        volatile_limit=state.volatile_limit,
        rounds_elapsed=state.rounds_elapsed + 1,
    )
    return new_state, full_advice


class _AdaptiveEpisode:
    def __init__(self, state: AdaptiveState, enum_budget: int, options: SolverOptions):
        self.state = state
        self.enum_budget = enum_budget
        self.options = options

    def resolve(self, weights, sampled_advice, hidden, eta):
        from .core import ResolvedRound, mwu_output

        result = search_plan(
            self.state,
            weights,
            sampled_advice,
            hidden,
            eta,
            enum_budget=self.enum_budget,
            options=self.options,
        )
        self.state, advice = apply_plan(
            self.state, result, weights, sampled_advice, hidden, options=self.options
        )
        claimed = (
            result.outcome != OUTCOME_GAVE_UP
            and mwu_output(weights, advice) == -hidden
        )
        return ResolvedRound(
            advice,
            claimed,
            np.asarray(self.state.corrupted, dtype=np.int64),
            result,
        )


class AdaptiveAdversary:
    """Captures experts on demand and flips a few honest ones each round."""

    name = "adaptive"

    def __init__(
        self,
        tau: int,
        volatile_limit: int | None = None,
        *,
        enum_budget: int = DEFAULT_ENUM_BUDGET,
        options: SolverOptions = _DEFAULT_OPTIONS,
    ):
        self.tau = tau
        self.volatile_limit = volatile_limit
        self.enum_budget = enum_budget
        self.options = options

    def start_episode(self, n: int) -> _AdaptiveEpisode:
        state = initial_state(n, self.tau, self.volatile_limit)
        return _AdaptiveEpisode(state, self.enum_budget, self.options)
