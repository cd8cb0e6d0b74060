"""Greedy non-adaptive adversary.

The corrupted set is fixed for the whole episode.  Each round, after seeing
the honest advice, the adversary splits its experts into a group advising the
hidden direction and a group advising against it, chosen so the weighted
output flips away from the hidden direction while the corrupted experts'
post-round total weight is as large as possible.

With hidden direction d, honest weighted advice G and corrupted total W, the
selected-group weight g must satisfy ``2g - W + G`` having sign ``-d``:

* d = +1: the total must be negative, so g < (W - G) / 2 (strict cap);
* d = -1: a zero total already outputs +1 = -d, so g <= (W + G) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ResolvedRound, mwu_output
from .solver import SolverInstance, SolverOptions

_DEFAULT_OPTIONS = SolverOptions()


def _normalize_corrupted(corrupted, n: int) -> np.ndarray:
    idx = np.asarray(sorted(int(i) for i in corrupted), dtype=np.int64)
    if idx.size:
        if idx[0] < 0 or idx[-1] >= n:
            raise ValueError("corrupted indices out of range")
        if len(set(idx.tolist())) != idx.size:
            raise ValueError("corrupted indices must be unique")
    return idx


@dataclass(frozen=True)
class CapResult:
    cap: float
    strict: bool
    good_sum: float  # honest experts' weighted advice
    corrupted_total: float


@dataclass(frozen=True)
class RoundPlan:
    advice_for_corrupted: dict[int, int]
    claimed_flip: bool
    solver_value: float


def compute_cap(weights: np.ndarray, advice: np.ndarray, corrupted, hidden: int) -> CapResult:
    """Cap on the weight advising the hidden direction that still flips the output.

    ``advice`` is a full-length vector; entries at corrupted indices are
    ignored (only the honest complement contributes to the weighted sum).
    """
    weights = np.asarray(weights, dtype=np.float64)
    advice = np.asarray(advice)
    idx = _normalize_corrupted(corrupted, len(weights))
    good_mask = np.ones(len(weights), dtype=bool)
    good_mask[idx] = False
    good_sum = float(np.dot(weights[good_mask], advice[good_mask]))
    corrupted_total = float(weights[idx].sum()) if idx.size else 0.0
    if hidden == 1:
        return CapResult((corrupted_total - good_sum) / 2.0, True, good_sum, corrupted_total)
    if hidden == -1:
        return CapResult((corrupted_total + good_sum) / 2.0, False, good_sum, corrupted_total)
    raise ValueError(f"hidden direction must be +1 or -1, got {hidden!r}")


def _solve_round(weights, advice, corrupted, hidden, options):
    weights = np.asarray(weights, dtype=np.float64)
    idx = _normalize_corrupted(corrupted, len(weights))
    cap = compute_cap(weights, advice, idx, hidden)
    inst = SolverInstance(tuple(weights[idx]), cap.cap, cap.strict)
    return idx, cap, options(inst)


def plan_advice(
    weights: np.ndarray,
    advice: np.ndarray,
    corrupted,
    hidden: int,
    *,
    options: SolverOptions = _DEFAULT_OPTIONS,
) -> RoundPlan:
    """Pick each corrupted expert's advice for this round.

    When the flip is achievable, selected experts advise the hidden direction
    and the rest advise against it.  When no split can flip the output the
    round is lost regardless, so all corrupted experts advise the hidden
    direction to bank the guaranteed gain.

    A claimed flip is always verified against :func:`mwu_output` on the
    assembled advice.  Selections that land exactly on the cap can fail that
    check by a rounding ulp (the weighted sum is re-accumulated in a
    different order); the plan then sheds its lightest selected expert until
    the flip is robust, falling back to the lost-round plan if none survives.
    """
    weights = np.asarray(weights, dtype=np.float64)
    idx, _, solution = _solve_round(weights, advice, corrupted, hidden, options)
    if not solution.feasible:
        return RoundPlan({int(i): hidden for i in idx}, False, 0.0)

    full = np.asarray(advice).copy()
    selected = [int(i) for i, chosen in zip(idx, solution.selection) if chosen]
    chosen_set = set(selected)
    if idx.size:
        full[idx] = [hidden if int(i) in chosen_set else -hidden for i in idx]
    while mwu_output(weights, full) != -hidden:
        if not selected:
            return RoundPlan({int(i): hidden for i in idx}, False, 0.0)
        lightest = min(selected, key=lambda i: (weights[i], i))
        selected.remove(lightest)
        full[lightest] = -hidden
    plan = {int(i): (hidden if int(i) in set(selected) else -hidden) for i in idx}
    value = float(weights[selected].sum()) if selected else 0.0
    return RoundPlan(plan, True, value)


def non_adaptive_value(
    weights: np.ndarray,
    advice: np.ndarray,
    corrupted,
    hidden: int,
    eta: float,
    *,
    options: SolverOptions = _DEFAULT_OPTIONS,
) -> float:
    """Corrupted total after the round, or 0 for a worthless round.

    Returns ``(1 - eta) * W + 2 * eta * g`` when the flip is achievable with
    at least one corrupted expert advising the hidden direction; otherwise 0
    (an empty optimal selection counts as worthless even though it flips).
    """
    _, cap, solution = _solve_round(weights, advice, corrupted, hidden, options)
    if solution.feasible and any(solution.selection):
        return (1.0 - eta) * cap.corrupted_total + 2.0 * eta * solution.value
    return 0.0


class _NonAdaptiveEpisode:
    def __init__(self, corrupted: np.ndarray, options: SolverOptions):
        self.corrupted = corrupted
        self.options = options

    def resolve(self, weights, sampled_advice, hidden, eta):
        plan = plan_advice(
            weights, sampled_advice, self.corrupted, hidden, options=self.options
        )
        advice = np.asarray(sampled_advice).copy()
        if self.corrupted.size:
            advice[self.corrupted] = [
                plan.advice_for_corrupted[int(i)] for i in self.corrupted
            ]
        return ResolvedRound(advice, plan.claimed_flip, self.corrupted, plan)


class NonAdaptiveAdversary:
    """Corrupts a fixed expert set for the whole episode.

    Pass either an explicit index set or a count ``tau`` (the first ``tau``
    experts are taken; experts start exchangeable so the choice is moot).
    """

    name = "nonadaptive"

    def __init__(
        self,
        tau: int | None = None,
        corrupted=None,
        *,
        options: SolverOptions = _DEFAULT_OPTIONS,
    ):
        if tau is None and corrupted is None:
            raise ValueError("provide tau or an explicit corrupted set")
        self.tau = tau
        self.corrupted = None if corrupted is None else tuple(corrupted)
        self.options = options

    def start_episode(self, n: int) -> _NonAdaptiveEpisode:
        if self.corrupted is not None:
            idx = _normalize_corrupted(self.corrupted, n)
        else:
            if not 0 <= self.tau < n:
                raise ValueError(f"tau must satisfy 0 <= tau < n, got {self.tau}")
            idx = np.arange(self.tau, dtype=np.int64)
        if idx.size >= n:
            raise ValueError("corrupted set must leave at least one honest expert")
        return _NonAdaptiveEpisode(idx, self.options)
