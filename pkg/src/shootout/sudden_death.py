"""Closed-form sudden-death probabilities.

In sudden death every round starts level, so a round is described by who
kicks first and three numbers: the chance the first kicker wins the round,
the chance the second kicker wins it, and the chance it is drawn.  Under M2
and M3 those numbers coincide (only the second kicker can be behind), which
is why the models collapse into two classes here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .core import Number, Params, PressureModel, Team


class DegenerateParameters(ArithmeticError):
    """A closed form has a zero denominator (typically p = q = 1)."""


class ModelClass(enum.Enum):
    CLASS1 = "class1"
    CLASS23 = "class23"

    @classmethod
    def of(cls, model: PressureModel) -> "ModelClass":
        return cls.CLASS1 if model is PressureModel.M1 else cls.CLASS23


class SdPattern(enum.Enum):
    STANDARD_ORDER = "standard"
    ALTERNATING_ORDER = "alternating"
    DOUBLE_ALT_TWO_FIRST = "double-alt-two-first"  # AA BB AA ...
    DOUBLE_ALT_ONE_FIRST = "double-alt-one-first"  # A BB AA BB ...

    def first_kickers(self, rounds: int) -> list[Team]:
        """First kicker of each sudden-death round, from the opener's side (A)."""
        out = []
        for i in range(rounds):
            if self is SdPattern.STANDARD_ORDER:
                out.append(Team.A)
            elif self is SdPattern.ALTERNATING_ORDER:
                out.append(Team.A if i % 2 == 0 else Team.B)
            elif self is SdPattern.DOUBLE_ALT_TWO_FIRST:
                out.append(Team.A if (i // 2) % 2 == 0 else Team.B)
            else:
                out.append(Team.A if ((i + 1) // 2) % 2 == 0 else Team.B)
        return out


@dataclass(frozen=True)
class SuddenDeathStats:
    first_kicker_win: Optional[Number]
    resolution_prob: Number
    expected_length: Number  # math.inf when resolution_prob == 0


def round_probabilities(cls: ModelClass, params: Params) -> tuple[Number, Number, Number]:
    """(first kicker wins, second kicker wins, drawn) for one level round."""
    p, q = params.p, params.q
    first_wins = p * (1 - q)
    if cls is ModelClass.CLASS1:
        second_wins = (1 - p) * q
        drawn = p * q + (1 - p) * (1 - q)
    else:
        second_wins = (1 - p) * p
        drawn = p * q + (1 - p) * (1 - p)
    return first_wins, second_wins, drawn


def _ratio(num: Number, den: Number) -> Number:
    if den == 0:
        raise DegenerateParameters("closed form undefined: zero denominator")
    return num / den


def sd_win(pattern: SdPattern, cls: ModelClass, params: Params) -> Number:
    """Probability that the team opening sudden death wins it."""
    if resolution_probability(cls, params) == 0:
        raise DegenerateParameters("sudden death never resolves at these parameters")
    p, q = params.p, params.q
    c1 = cls is ModelClass.CLASS1
    if pattern is SdPattern.STANDARD_ORDER:
        if c1:
            return _ratio(p * (1 - q), p + q - 2 * p * q)
        return _ratio(p * (1 - q), 2 * p - p * q - p * p)
    if pattern is SdPattern.ALTERNATING_ORDER:
        if c1:
            return _ratio(1 - q + p * q, 2 - p - q + 2 * p * q)
        return _ratio(1 - p + p * p, 2 - 2 * p + p * q + p * p)

    # double alternating: after two drawn rounds the roles swap
    t = 1 - p - q + 2 * p * q if c1 else 1 - 2 * p + p * q + p * p
    second_round_gain = p * (1 - q)
    if pattern is SdPattern.DOUBLE_ALT_ONE_FIRST:
        second_round_gain = (1 - p) * q if c1 else (1 - p) * p
    num = p * (1 - q) + t * second_round_gain + t * t
    return _ratio(num, 1 + t * t)


def sd_win_truncated_oracle(
    pattern: SdPattern, cls: ModelClass, params: Params, horizon: int
) -> tuple[Number, Number]:
    """Bracket the opener's sudden-death win probability by unrolling ``horizon`` rounds.

    The lower bound counts wins inside the horizon; the upper bound also gives
    the opener the whole unresolved tail, whose mass is ``drawn ** horizon``.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    first_wins, second_wins, drawn = round_probabilities(cls, params)
    lower = 0 * drawn
    alive = 1 + 0 * drawn
    for kicker in pattern.first_kickers(horizon):
        lower += alive * (first_wins if kicker is Team.A else second_wins)
        alive *= drawn
    return lower, lower + alive


def resolution_probability(cls: ModelClass, params: Params) -> Number:
    p, q = params.p, params.q
    if cls is ModelClass.CLASS1:
        return p + q - 2 * p * q
    return 2 * p - p * q - p * p


def sd_stats(cls: ModelClass, params: Params, pattern: Optional[SdPattern] = None) -> SuddenDeathStats:
    """Per-round resolution probability and expected length (in rounds).

    The opener's win probability is filled in only when ``pattern`` is given.
    """
    r = resolution_probability(cls, params)
    length = math.inf if r == 0 else 1 / r
    win = None
    if pattern is not None and r != 0:
        win = sd_win(pattern, cls, params)
    return SuddenDeathStats(win, r, length)
