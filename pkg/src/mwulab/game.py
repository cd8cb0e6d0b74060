"""Pluggable weights-vs-adversary game.

Generalizes the coin engine: advice ranges over an arbitrary domain, payoffs
come from a caller-supplied rule, and the episode runs until a termination
predicate over the round history becomes true.  The coin game is the one
shipped instance; its trace matches :func:`mwulab.core.run_episode`
round-for-round for every seed because both consume the random stream in the
same order (context first, then the advice vector).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import core

TerminationFormula = Callable[[Sequence["GameRound"]], bool]


@dataclass(frozen=True)
class GameRound:
    index: int
    context: object  # whatever sample_context produced (the coin's hidden direction)
    advice: np.ndarray
    output: object
    weights_after: np.ndarray
    corrupted: tuple[int, ...]


@dataclass(frozen=True)
class GameInstance:
    n: int
    eta: float
    advice_domain: tuple
    sample_context: Callable[[np.random.Generator], object]
    sample_advice: Callable[[np.random.Generator, int], np.ndarray]
    adversary: core.AdversaryPolicy
    compute_output: Callable[[np.ndarray, np.ndarray], object]
    payoff: Callable[[np.ndarray, object, object], np.ndarray]
    terminated: TerminationFormula
    max_rounds: int = core.DEFAULT_MAX_ROUNDS


@dataclass
class GameState:
    weights: np.ndarray
    round_index: int
    history: list[GameRound] = field(default_factory=list)
    episode: core.EpisodeAdversary | None = None


def new_game(instance: GameInstance) -> GameState:
    return GameState(
        weights=np.ones(instance.n, dtype=np.float64),
        round_index=0,
        episode=instance.adversary.start_episode(instance.n),
    )


def step_game(
    instance: GameInstance, state: GameState, rng: np.random.Generator
) -> tuple[GameState, bool]:
    """Play one round and evaluate the termination formula afterwards."""
    context = instance.sample_context(rng)
    sampled = instance.sample_advice(rng, instance.n)
    resolved = state.episode.resolve(state.weights, sampled, context, instance.eta)
    output = instance.compute_output(state.weights, resolved.advice)
    gains = instance.payoff(resolved.advice, context, output)
    state.weights = state.weights * (1.0 + instance.eta * np.asarray(gains))
    state.round_index += 1
    state.history.append(
        GameRound(
            index=state.round_index,
            context=context,
            advice=np.asarray(resolved.advice).copy(),
            output=output,
            weights_after=state.weights.copy(),
            corrupted=tuple(int(i) for i in np.asarray(resolved.corrupted)),
        )
    )
    return state, bool(instance.terminated(state.history))


def run_game(instance: GameInstance, rng: np.random.Generator | int | None = None) -> GameState:
    """Step until the formula fires or the round cap is reached."""
    rng = np.random.default_rng(rng)
    state = new_game(instance)
    for _ in range(instance.max_rounds):
        state, done = step_game(instance, state, rng)
        if done:
            break
    return state


def global_coin_instance(
    params: core.MwuParams,
    adversary: core.AdversaryPolicy | None = None,
    *,
    hidden_policy: str = "uniform",
) -> GameInstance:
    """The coin game expressed in the generic vocabulary.

    Terminates exactly when the round output equals that round's hidden
    direction, so traces coincide with :func:`mwulab.core.run_episode`.
    """
    if hidden_policy not in core.HIDDEN_POLICIES:
        raise ValueError(f"unknown hidden policy: {hidden_policy!r}")

    def sample_context(rng: np.random.Generator) -> int:
        return core._draw_hidden(rng, hidden_policy)

    def sample_advice(rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.integers(0, 2, size=n) * 2 - 1

    def terminated(history: Sequence[GameRound]) -> bool:
        last = history[-1]
        return last.output == last.context

    return GameInstance(
        n=params.n,
        eta=params.eta,
        advice_domain=(-1, 1),
        sample_context=sample_context,
        sample_advice=sample_advice,
        adversary=adversary if adversary is not None else core.NoAdversary(),
        compute_output=core.mwu_output,
        payoff=lambda advice, context, output: core.compute_gains(advice, context),
        terminated=terminated,
        max_rounds=params.max_rounds,
    )
