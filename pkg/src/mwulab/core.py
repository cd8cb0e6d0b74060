"""Weighted-majority coin engine.

Each round, every expert emits +1 or -1 advice.  The engine outputs the sign
of the weight-weighted advice sum, compares it to the round's hidden
direction, and multiplies each expert's weight by (1 + eta) or (1 - eta)
according to whether that expert matched the hidden direction.  An episode
runs until the output matches the hidden direction (or a round cap is hit).

Round order: the hidden direction is fixed first, then fresh uniform advice
is sampled for every expert, then the adversary (which sees both the weights
and the sampled advice) overwrites the entries it controls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

import numpy as np

ETA_CLAMP = 0.49
DEFAULT_MAX_ROUNDS = 100_000

HIDDEN_POLICIES = ("uniform", "plus", "minus")


def sgn(x: float) -> int:
    """Sign with the tie going up: +1 for x >= 0, -1 otherwise."""
    if not math.isfinite(x):
        raise ValueError(f"sgn requires a finite input, got {x!r}")
    return 1 if x >= 0.0 else -1


def default_eta(n: int, base: float = math.e) -> float:
    """Update factor sqrt(log(n)/n), clamped into (0, 1/2).

    Natural log by default; pass ``base`` to change it.  For n=1 the formula
    degenerates to 0 and the clamp value is returned instead.
    """
    if n < 1:
        raise ValueError("n must be positive")
    value = math.sqrt(math.log(n, base) / n) if n > 1 else 0.0
    if value <= 0.0 or value >= 0.5:
        return ETA_CLAMP
    return value


@dataclass(frozen=True)
class MwuParams:
    n: int
    eta: float
    max_rounds: int = DEFAULT_MAX_ROUNDS

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not (0.0 < self.eta < 0.5):
            raise ValueError("eta must lie strictly between 0 and 1/2")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be a positive integer")


def _check_lengths(weights: np.ndarray, other: np.ndarray, what: str) -> None:
    if len(weights) != len(other):
        raise ValueError(f"{what} length {len(other)} != weights length {len(weights)}")


def mwu_output(weights: np.ndarray, advice: np.ndarray) -> int:
    """Sign of the weighted advice sum."""
    weights = np.asarray(weights, dtype=np.float64)
    advice = np.asarray(advice)
    _check_lengths(weights, advice, "advice")
    return sgn(float(np.dot(weights, advice)))


def compute_gains(advice: np.ndarray, hidden: int) -> np.ndarray:
    """+1 for every expert whose advice equals the hidden direction, else -1."""
    advice = np.asarray(advice)
    return np.where(advice == hidden, 1, -1)


def update_weights(weights: np.ndarray, gains: np.ndarray, eta: float) -> np.ndarray:
    """Multiply each weight by (1 + eta*gain).

    eta=0 is tolerated (identity update, handy in tests); anything at or
    above 1/2 would let weights hit zero and is rejected.
    """
    if not (0.0 <= eta < 0.5):
        raise ValueError("eta must lie in [0, 1/2)")
    weights = np.asarray(weights, dtype=np.float64)
    gains = np.asarray(gains)
    _check_lengths(weights, gains, "gains")
    return weights * (1.0 + eta * gains)


@dataclass(frozen=True)
class RoundOutcome:
    output: int
    hidden: int
    success: bool
    weights_after: np.ndarray


def run_round(weights: np.ndarray, advice: np.ndarray, hidden: int, eta: float) -> RoundOutcome:
    """One deterministic round over fully resolved advice."""
    output = mwu_output(weights, advice)
    gains = compute_gains(advice, hidden)
    weights_after = update_weights(weights, gains, eta)
    return RoundOutcome(output, hidden, output == hidden, weights_after)


@dataclass(frozen=True)
class ResolvedRound:
    """The adversary's answer for one round: the full advice vector plus
    bookkeeping.  ``claimed_flip`` asserts the output will be the negation of
    the hidden direction; ``corrupted`` is the persistent captured set after
    this round."""

    advice: np.ndarray
    claimed_flip: bool
    corrupted: np.ndarray
    detail: object = None


class EpisodeAdversary(Protocol):
    def resolve(
        self, weights: np.ndarray, sampled_advice: np.ndarray, hidden: int, eta: float
    ) -> ResolvedRound: ...


class AdversaryPolicy(Protocol):
    name: str

    def start_episode(self, n: int) -> EpisodeAdversary: ...


class _PassiveEpisode:
    def resolve(self, weights, sampled_advice, hidden, eta) -> ResolvedRound:
        return ResolvedRound(sampled_advice, False, np.empty(0, dtype=np.int64))


class NoAdversary:
    """Every expert stays honest; advice passes through untouched."""

    name = "none"

    def start_episode(self, n: int) -> _PassiveEpisode:
        return _PassiveEpisode()


@dataclass(frozen=True)
class RoundRecord:
    round_index: int
    hidden: int
    output: int
    success: bool
    claimed_flip: bool
    weights_before: np.ndarray
    advice: np.ndarray


@dataclass
class EpisodeResult:
    rounds: int  # counts the terminal successful round
    succeeded: bool
    truncated: bool
    corrupted_weights: list[float]  # end-of-round totals over the captured set
    good_weights: list[float]
    final_weights: np.ndarray
    corrupted_final: tuple[int, ...]
    round_log: list[RoundRecord] | None = None

    @property
    def failed_rounds(self) -> int:
        """Alternative counter that excludes the terminal successful round."""
        return self.rounds - 1 if self.succeeded else self.rounds


def _draw_hidden(rng: np.random.Generator, policy: str) -> int:
    if policy == "uniform":
        return int(rng.integers(0, 2)) * 2 - 1
    if policy == "plus":
        return 1
    if policy == "minus":
        return -1
    raise ValueError(f"unknown hidden policy: {policy!r}")


def run_episode(
    params: MwuParams,
    adversary: AdversaryPolicy | None = None,
    rng: np.random.Generator | int | None = None,
    *,
    hidden_policy: str = "uniform",
    keep_round_log: bool = False,
) -> EpisodeResult:
    """Run rounds until the output matches the hidden direction.

    Deterministic given (params, adversary policy, seed): pass an int seed
    for a reproducible episode.  A run that exhausts ``max_rounds`` without a
    success is reported with ``truncated=True`` rather than raised.
    """
    if hidden_policy not in HIDDEN_POLICIES:
        raise ValueError(f"unknown hidden policy: {hidden_policy!r}")
    rng = np.random.default_rng(rng)
    policy = adversary if adversary is not None else NoAdversary()
    episode = policy.start_episode(params.n)
    weights = np.ones(params.n, dtype=np.float64)
    corrupted_weights: list[float] = []
    good_weights: list[float] = []
    log: list[RoundRecord] | None = [] if keep_round_log else None
    corrupted = np.empty(0, dtype=np.int64)

    for round_index in range(1, params.max_rounds + 1):
        hidden = _draw_hidden(rng, hidden_policy)
        sampled = rng.integers(0, 2, size=params.n) * 2 - 1
        resolved = episode.resolve(weights, sampled, hidden, params.eta)
        output = mwu_output(weights, resolved.advice)
        if resolved.claimed_flip and output != -hidden:
            raise RuntimeError(
                f"adversary claimed a flip in round {round_index} but the "
                f"output matched the hidden direction"
            )
        gains = compute_gains(resolved.advice, hidden)
        if log is not None:
            log.append(
                RoundRecord(
                    round_index,
                    hidden,
                    output,
                    output == hidden,
                    resolved.claimed_flip,
                    weights.copy(),
                    np.asarray(resolved.advice).copy(),
                )
            )
        weights = weights * (1.0 + params.eta * gains)
        corrupted = np.asarray(resolved.corrupted, dtype=np.int64)
        corrupted_total = float(weights[corrupted].sum()) if corrupted.size else 0.0
        corrupted_weights.append(corrupted_total)
        good_weights.append(float(weights.sum()) - corrupted_total)
        if output == hidden:
            return EpisodeResult(
                rounds=round_index,
                succeeded=True,
                truncated=False,
                corrupted_weights=corrupted_weights,
                good_weights=good_weights,
                final_weights=weights,
                corrupted_final=tuple(int(i) for i in corrupted),
                round_log=log,
            )

    return EpisodeResult(
        rounds=params.max_rounds,
        succeeded=False,
        truncated=True,
        corrupted_weights=corrupted_weights,
        good_weights=good_weights,
        final_weights=weights,
        corrupted_final=tuple(int(i) for i in corrupted),
        round_log=log,
    )
