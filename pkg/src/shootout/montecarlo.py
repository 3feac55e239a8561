"""Monte Carlo simulation of complete shootouts.

Two entry points.  :func:`simulate_shootout` plays one shootout kick by
kick through the rules in :mod:`shootout.core`.  :func:`estimate_win_probability`
runs many trials at once with numpy.  It re-encodes the order rules and
pressure models on arrays, so it is an independent check on the exact engine
rather than a re-run of the same code.

Trials are split into fixed-size blocks.  Block ``i`` draws from its own
stream, spawned from ``SeedSequence(seed)`` at spawn key ``(i,)``.  So the
result depends only on the seed and the trial count, not on how many workers
run the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .core import (
    Mechanism,
    Params,
    PressureModel,
    RoundRecord,
    ShootoutState,
    Team,
    apply_round,
    first_kick_context,
    first_kicker_of_round,
    scoring_probability,
    second_kick_context,
)

BLOCK_SIZE = 1 << 16


class AllUnresolved(RuntimeError):
    """No trial produced a winner, so there is nothing to estimate."""


@dataclass(frozen=True)
class SimConfig:
    mech: Mechanism
    model: PressureModel
    params: Params
    n: int = 5
    trials: int = 1_000_000
    seed: int = 0
    max_sd_rounds: int = 1000

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.max_sd_rounds < 1:
            raise ValueError("max_sd_rounds must be positive")
        if self.n < 1:
            raise ValueError("n must be positive")


@dataclass(frozen=True)
class SimResult:
    a_wins: int
    b_wins: int
    unresolved: int

    @property
    def trials(self) -> int:
        return self.a_wins + self.b_wins + self.unresolved

    @property
    def estimate(self) -> float:
        decided = self.a_wins + self.b_wins
        if decided == 0:
            raise AllUnresolved("every trial hit the sudden-death cap")
        return self.a_wins / decided

    @property
    def std_error(self) -> float:
        e = self.estimate
        return math.sqrt(e * (1 - e) / (self.a_wins + self.b_wins))


def simulate_shootout(
    mech: Mechanism,
    model: PressureModel,
    params: Params,
    n: int,
    rng: np.random.Generator,
    max_sd_rounds: int = 1000,
) -> Optional[Team]:
    """Play one shootout; return the winner, or None if sudden death hit the cap."""
    state = ShootoutState(n)
    while True:
        r = state.round_index
        if r > n and state.difference != 0:
            break
        if r > n + max_sd_rounds:
            return None
        first = first_kicker_of_round(mech, state)
        s1 = scoring_probability(model, params, first_kick_context(state, first))
        first_scored = bool(rng.random() < s1)
        s2 = scoring_probability(model, params, second_kick_context(state, first, first_scored))
        second_scored = bool(rng.random() < s2)
        state = apply_round(state, RoundRecord(first, first_scored, second_scored))
    return Team.A if state.difference > 0 else Team.B


def _first_kicker_is_a(
    mech: Mechanism,
    r: int,
    n: int,
    diff: np.ndarray,
    last_a_first: np.ndarray,
    last_first_scored: np.ndarray,
    last_second_scored: np.ndarray,
) -> np.ndarray:
    """Vectorized order rules; ``diff`` is A's goals minus B's."""
    size = diff.shape[0]
    if mech is Mechanism.STANDARD:
        return np.ones(size, dtype=bool)
    if mech is Mechanism.ALTERNATING:
        return np.full(size, r % 2 == 1)
    if mech is Mechanism.DOUBLE_ALTERNATING:
        return np.full(size, r % 4 in (0, 1))
    if r == 1:
        return np.ones(size, dtype=bool)
    adjusted = mech in (Mechanism.ADJ_CATCH_UP, Mechanism.ADJ_BEHIND_FIRST)
    if adjusted and r > n:
        return np.full(size, (r - n) % 2 == 0)
    if mech in (Mechanism.CATCH_UP, Mechanism.ADJ_CATCH_UP):
        keep = ~last_first_scored & last_second_scored
        return np.where(keep, last_a_first, ~last_a_first)
    # behind-first
    return np.where(diff < 0, True, np.where(diff > 0, False, ~last_a_first))


def _scoring_probs(
    model: PressureModel,
    params: Params,
    a_first: np.ndarray,
    diff: np.ndarray,
    first_scored: Optional[np.ndarray],
) -> np.ndarray:
    """Scoring probability of the first kick (``first_scored is None``) or the second kick."""
    p, q = float(params.p), float(params.q)
    if first_scored is None:
        if model is PressureModel.M3:
            first_trailing = np.where(a_first, diff < 0, diff > 0)
            return np.where(first_trailing, q, p)
        return np.full(diff.shape[0], p)
    if model is PressureModel.M1:
        return np.full(diff.shape[0], q)
    if model is PressureModel.M2:
        return np.where(first_scored, q, p)
    # second kicker's deficit after the first kick of the round
    second_deficit = np.where(a_first, diff, -diff) + first_scored
    return np.where(second_deficit > 0, q, p)


def _simulate_block(cfg: SimConfig, size: int, rng: np.random.Generator) -> tuple[int, int, int]:
    diff = np.zeros(size, dtype=np.int64)
    last_a_first = np.zeros(size, dtype=bool)
    last_first_scored = np.zeros(size, dtype=bool)
    last_second_scored = np.zeros(size, dtype=bool)
    idx = np.arange(size)  # trials still playing
    a_wins = b_wins = 0
    r = 1
    while idx.size and r <= cfg.n + cfg.max_sd_rounds:
        d = diff[idx]
        a_first = _first_kicker_is_a(
            cfg.mech, r, cfg.n, d, last_a_first[idx], last_first_scored[idx], last_second_scored[idx]
        )
        u = rng.random((2, idx.size))
        s1 = u[0] < _scoring_probs(cfg.model, cfg.params, a_first, d, None)
        s2 = u[1] < _scoring_probs(cfg.model, cfg.params, a_first, d, s1)
        d = d + np.where(a_first, s1.astype(np.int64) - s2, s2.astype(np.int64) - s1)
        diff[idx] = d
        last_a_first[idx] = a_first
        last_first_scored[idx] = s1
        last_second_scored[idx] = s2
        if r >= cfg.n:
            decided = d != 0
            a_wins += int(np.count_nonzero(d > 0))
            b_wins += int(np.count_nonzero(d < 0))
            idx = idx[~decided]
        r += 1
    return a_wins, b_wins, int(idx.size)


def _block_sizes(trials: int, block_size: int) -> list[int]:
    full, rest = divmod(trials, block_size)
    return [block_size] * full + ([rest] if rest else [])


def run_simulation(cfg: SimConfig, workers: int = 1, block_size: int = BLOCK_SIZE) -> SimResult:
    """Simulate ``cfg.trials`` shootouts; same seed gives the same counts for any ``workers``."""
    sizes = _block_sizes(cfg.trials, block_size)
    seqs = np.random.SeedSequence(cfg.seed).spawn(len(sizes))

    def job(i: int) -> tuple[int, int, int]:
        return _simulate_block(cfg, sizes[i], np.random.default_rng(seqs[i]))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(i) for i in range(len(sizes))]
    a, b, u = (sum(col) for col in zip(*parts))
    return SimResult(a, b, u)


def estimate_win_probability(cfg: SimConfig, workers: int = 1) -> SimResult:
    """Like :func:`run_simulation` but raises :class:`AllUnresolved` when nothing was decided."""
    result = run_simulation(cfg, workers)
    if result.a_wins + result.b_wins == 0:
        raise AllUnresolved(f"all {result.trials} trials unresolved after {cfg.max_sd_rounds} sudden-death rounds")
    return result


def simulate_many(
    mech: Mechanism,
    model: PressureModel,
    params: Params,
    n: int,
    trials: int,
    seed: Union[int, np.random.SeedSequence],
    max_sd_rounds: int = 1000,
) -> list[Optional[Team]]:
    """Winners of ``trials`` scalar simulations, one spawned stream per trial."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return [
        simulate_shootout(mech, model, params, n, np.random.default_rng(child), max_sd_rounds)
        for child in ss.spawn(trials)
    ]
