"""Capped subset-sum solvers.

The adversary's core problem each round: given positive item weights and a
cap, pick a 0/1 selection maximizing the selected sum while keeping it below
the cap (strictly or non-strictly).  Two routes are provided:

* ``solve_bruteforce`` enumerates all subsets and is the ground-truth oracle.
* ``solve_dp`` discretizes weights onto a resolution grid and runs an exact
  dynamic program over scaled values, storing the minimum real weight that
  attains each scaled value.  Feasibility is always judged against the
  original real-valued cap, so the returned selection is exactly feasible and
  its value lies within ``item_count * resolution`` of the true optimum.

Real weights drift onto an irrational lattice after multiplicative updates,
so an integer-capacity table cannot be exact; the value-indexed min-weight
memo is the discretization that keeps a provable additive error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

BRUTEFORCE_GUARD = 30
DEFAULT_BRUTEFORCE_THRESHOLD = 20
DEFAULT_TABLE_BUDGET = 1 << 21
DEFAULT_AUTO_GRID = 1 << 15
RESOLUTION_FLOOR_FACTOR = 1e-9

_SPARSE_LIMIT = 1 << 18
_CHUNK = 1 << 20


class TableBudgetExceeded(RuntimeError):
    """The discretized table would exceed the configured size budget."""


@dataclass(frozen=True)
class SolverInstance:
    """One capped subset-sum problem.

    ``strict=True`` means the selected sum must stay strictly below ``cap``;
    otherwise the cap itself is allowed.  The cap may be zero or negative, in
    which case the instance can be infeasible (even the empty selection fails
    a strict cap of zero).
    """

    item_weights: tuple[float, ...]
    cap: float
    strict: bool

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.item_weights)
        object.__setattr__(self, "item_weights", weights)
        if any(not math.isfinite(w) or w <= 0.0 for w in weights):
            raise ValueError("item weights must be positive and finite")
        if not math.isfinite(self.cap):
            raise ValueError("cap must be finite")


@dataclass(frozen=True)
class SolverSolution:
    selection: tuple[int, ...]
    value: float
    feasible: bool


def empty_selection_feasible(cap: float, strict: bool) -> bool:
    """Whether selecting nothing satisfies the cap constraint."""
    return 0.0 < cap if strict else 0.0 <= cap


def _fits(total: float, cap: float, strict: bool) -> bool:
    return total < cap if strict else total <= cap


def _infeasible(k: int) -> SolverSolution:
    return SolverSolution((0,) * k, 0.0, False)


def _selection_value(weights: np.ndarray, selection: Sequence[int]) -> float:
    mask = np.asarray(selection, dtype=bool)
    return float(weights[mask].sum()) if mask.any() else 0.0


def solve_bruteforce(inst: SolverInstance) -> SolverSolution:
    """Enumerate all subsets; ties go to the lexicographically smallest selection.

    Guarded at 30 items; near the guard the enumeration takes minutes.
    """
    k = len(inst.item_weights)
    if k > BRUTEFORCE_GUARD:
        raise ValueError(f"brute force limited to {BRUTEFORCE_GUARD} items, got {k}")
    if k == 0:
        feasible = empty_selection_feasible(inst.cap, inst.strict)
        return SolverSolution((), 0.0, feasible)

    weights = np.asarray(inst.item_weights, dtype=np.float64)
    # Item i maps to bit (k-1-i): numeric mask order is then exactly the
    # lexicographic order of selection vectors, so "first maximum" wins ties.
    bit_weights = weights[::-1].copy()
    best_value = -np.inf
    best_mask = -1
    for lo in range(0, 1 << k, _CHUNK):
        hi = min(lo + _CHUNK, 1 << k)
        masks = np.arange(lo, hi, dtype=np.int64)
        sums = np.zeros(hi - lo, dtype=np.float64)
        for j in range(k):
            sums += bit_weights[j] * ((masks >> j) & 1)
        feas = sums < inst.cap if inst.strict else sums <= inst.cap
        if not feas.any():
            continue
        vals = np.where(feas, sums, -np.inf)
        i = int(np.argmax(vals))
        if vals[i] > best_value:
            best_value = float(vals[i])
            best_mask = int(masks[i])
    if best_mask < 0:
        return _infeasible(k)
    selection = tuple((best_mask >> (k - 1 - i)) & 1 for i in range(k))
    return SolverSolution(selection, _selection_value(weights, selection), True)


def _auto_resolution(inst: SolverInstance, auto_grid: int) -> float:
    """Pick the finest resolution whose useful value grid fits ``auto_grid``."""
    max_w = max(inst.item_weights)
    floor = RESOLUTION_FLOOR_FACTOR * max_w
    span = min(max(inst.cap, 0.0), sum(inst.item_weights))
    if span <= 0.0:
        return floor
    return max(floor, span / auto_grid)


def solve_dp(
    inst: SolverInstance,
    resolution: float,
    *,
    table_budget: int = DEFAULT_TABLE_BUDGET,
) -> SolverSolution:
    """Discretized exact DP: minimum real weight per scaled selected value.

    Weights are floored onto multiples of ``resolution``; the memo maps each
    achievable scaled value to the lightest real subset attaining it, so the
    final cap check runs in real arithmetic.  The returned selection is
    feasible for the original constraint and its value is within
    ``len(items) * resolution`` of the optimum (a greedy completion pass then
    recovers part of the flooring loss).  Raises :class:`TableBudgetExceeded`
    when the state bound ``min(2**k, cap/resolution)`` exceeds the budget.
    """
    if not (math.isfinite(resolution) and resolution > 0.0):
        raise ValueError("resolution must be positive and finite")
    k = len(inst.item_weights)
    cap, strict = inst.cap, inst.strict
    if not empty_selection_feasible(cap, strict):
        # Weights are positive, so nothing else can satisfy the cap either.
        return _infeasible(k)
    weights = np.asarray(inst.item_weights, dtype=np.float64)
    if k == 0:
        return SolverSolution((), 0.0, True)

    total = float(weights.sum())
    if _fits(total, cap, strict):
        return SolverSolution((1,) * k, total, True)

    # Items that are infeasible on their own can never be selected.
    kept = [i for i in range(k) if _fits(float(weights[i]), cap, strict)]
    if not kept:
        return SolverSolution((0,) * k, 0.0, True)

    scaled = [int(weights[i] // resolution) for i in kept]
    u_keep = int(cap // resolution) + 1  # generous bound; real check prunes the rest
    table_size = min(u_keep, sum(scaled)) + 1
    kk = len(kept)
    state_bound = min(1 << kk, table_size) if kk < 62 else table_size
    if state_bound > table_budget:
        raise TableBudgetExceeded(
            f"state bound {state_bound} exceeds table budget {table_budget}; "
            "coarsen the resolution"
        )

    kept_w = weights[kept]
    kept_u = np.asarray(scaled, dtype=np.int64)
    if (1 << kk) <= min(table_size, _SPARSE_LIMIT):
        picked = _dp_sparse(kept_w, kept_u, cap, strict, u_keep)
    else:
        picked = _dp_dense(kept_w, kept_u, cap, strict, table_size)
    if picked is None:
        # Only the empty state survived the real-cap check.
        return SolverSolution((0,) * k, 0.0, True)

    selection = [0] * k
    for pos in picked:
        selection[kept[pos]] = 1
    selection = _greedy_complete(weights, selection, cap, strict)
    return SolverSolution(tuple(selection), _selection_value(weights, selection), True)


def _dp_sparse(
    w: np.ndarray, u: np.ndarray, cap: float, strict: bool, u_keep: int
) -> list[int] | None:
    """Sparse states: sorted scaled sums with the minimum real sum for each."""
    sums = np.zeros(1, dtype=np.int64)
    reals = np.zeros(1, dtype=np.float64)
    snapshots: list[tuple[np.ndarray, np.ndarray]] = []
    for i in range(len(w)):
        snapshots.append((sums, reals))
        cand_s = sums + u[i]
        cand_r = reals + w[i]
        ok = cand_s <= u_keep
        ok &= cand_r < cap if strict else cand_r <= cap
        if not ok.any():
            continue
        all_s = np.concatenate([sums, cand_s[ok]])
        all_r = np.concatenate([reals, cand_r[ok]])
        # Stable lexsort keeps pre-existing states first on exact real ties,
        # i.e. the DP prefers not taking an item when it changes nothing.
        order = np.lexsort((all_r, all_s))
        all_s = all_s[order]
        all_r = all_r[order]
        first = np.ones(len(all_s), dtype=bool)
        first[1:] = all_s[1:] != all_s[:-1]
        sums = all_s[first]
        reals = all_r[first]

    feasible = reals < cap if strict else reals <= cap
    idxs = np.flatnonzero(feasible)
    for j in idxs[::-1][:32]:
        target_s = int(sums[j])
        target_r = float(reals[j])
        if target_s == 0 and target_r == 0.0:
            return None
        picked: list[int] = []
        cur_s, cur_r = target_s, target_r
        broken = False
        for i in range(len(w) - 1, -1, -1):
            snap_s, snap_r = snapshots[i]
            pos = int(np.searchsorted(snap_s, cur_s))
            if pos < len(snap_s) and snap_s[pos] == cur_s and snap_r[pos] == cur_r:
                continue
            picked.append(i)
            cur_s -= int(u[i])
            pos = int(np.searchsorted(snap_s, cur_s))
            if pos >= len(snap_s) or snap_s[pos] != cur_s:
                broken = True
                break
            cur_r = float(snap_r[pos])
        if not broken and picked and _fits(float(w[picked].sum()), cap, strict):
            return picked
    return None


def _dp_dense(
    w: np.ndarray, u: np.ndarray, cap: float, strict: bool, table_size: int
) -> list[int] | None:
    """Dense grid over scaled values 0..table_size-1."""
    k = len(w)
    dp = np.full(table_size, np.inf, dtype=np.float64)
    dp[0] = 0.0
    take = np.zeros((k, table_size), dtype=bool)
    for i in range(k):
        ui = int(u[i])
        if ui == 0 or ui >= table_size:
            continue  # adds real weight without scaled value, or overshoots
        cand = dp[:-ui] + w[i]
        better = cand < dp[ui:]
        if better.any():
            np.copyto(dp[ui:], cand, where=better)
            take[i, ui:] = better

    feasible = dp < cap if strict else dp <= cap
    idxs = np.flatnonzero(feasible)
    for target in idxs[::-1][:32]:
        target = int(target)
        if target == 0:
            return None
        picked: list[int] = []
        cur = target
        limit = k
        while cur > 0:
            i = limit - 1
            while i >= 0 and not take[i, cur]:
                i -= 1
            if i < 0:
                break  # stale column; try the next candidate value
            picked.append(i)
            cur -= int(u[i])
            limit = i
        if cur == 0 and picked and _fits(float(w[picked].sum()), cap, strict):
            return picked
    return None


def _greedy_complete(
    weights: np.ndarray, selection: list[int], cap: float, strict: bool
) -> list[int]:
    """Add unselected items that still fit; recovers flooring loss exactly."""
    value = _selection_value(weights, selection)
    order = sorted(
        (i for i in range(len(selection)) if not selection[i]),
        key=lambda i: (weights[i], i),
    )
    added = []
    for i in order:
        trial = value + float(weights[i])
        if _fits(trial, cap, strict):
            selection[i] = 1
            added.append(i)
            value = trial
    if added and not _fits(_selection_value(weights, selection), cap, strict):
        for i in added:  # re-summation disagreed at the boundary; back out
            selection[i] = 0
    return selection


def solve(
    inst: SolverInstance,
    *,
    bruteforce_threshold: int = DEFAULT_BRUTEFORCE_THRESHOLD,
    resolution: float | None = None,
    table_budget: int = DEFAULT_TABLE_BUDGET,
    auto_grid: int = DEFAULT_AUTO_GRID,
) -> SolverSolution:
    """Dispatch: exact enumeration for small instances, discretized DP above.

    With ``resolution=None`` the DP resolution starts at ``1e-9 * max weight``
    and is coarsened just enough for the value grid to fit ``auto_grid``
    cells, keeping large per-round solves fast while the additive error stays
    at ``item_count * resolution``.
    """
    if len(inst.item_weights) <= bruteforce_threshold:
        return solve_bruteforce(inst)
    if resolution is None:
        resolution = _auto_resolution(inst, auto_grid)
    return solve_dp(inst, resolution, table_budget=table_budget)


def solve_with(
    inst: SolverInstance,
    backend: str = "auto",
    *,
    resolution: float | None = None,
    bruteforce_threshold: int = DEFAULT_BRUTEFORCE_THRESHOLD,
    table_budget: int = DEFAULT_TABLE_BUDGET,
    auto_grid: int = DEFAULT_AUTO_GRID,
) -> SolverSolution:
    """Route an instance to an explicit backend ("auto", "bruteforce", "dp")."""
    if backend == "auto":
        return solve(
            inst,
            bruteforce_threshold=bruteforce_threshold,
            resolution=resolution,
            table_budget=table_budget,
            auto_grid=auto_grid,
        )
    if backend == "bruteforce":
        return solve_bruteforce(inst)
    if backend == "dp":
        if resolution is None:
            resolution = _auto_resolution(inst, auto_grid)
        return solve_dp(inst, resolution, table_budget=table_budget)
    raise ValueError(f"unknown solver backend: {backend!r}")


@dataclass(frozen=True)
class SolverOptions:
    """Bundle of solver routing knobs threaded through the adversaries."""

    backend: str = "auto"
    resolution: float | None = None
    bruteforce_threshold: int = DEFAULT_BRUTEFORCE_THRESHOLD
    table_budget: int = DEFAULT_TABLE_BUDGET
    auto_grid: int = DEFAULT_AUTO_GRID

    def __call__(self, inst: SolverInstance) -> SolverSolution:
        return solve_with(
            inst,
            self.backend,
            resolution=self.resolution,
            bruteforce_threshold=self.bruteforce_threshold,
            table_budget=self.table_budget,
            auto_grid=self.auto_grid,
        )
