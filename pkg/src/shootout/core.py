"""Teams, parameters, shooting-order rules and pressure models.

Everything here is an immutable value or a pure function.  Probabilities are
kept in whatever numeric type the caller supplies, so passing
:class:`fractions.Fraction` parameters gives exact rational results and
passing floats gives the fast path.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, Iterator, Optional, Union

Number = Union[float, Fraction]


class Team(enum.Enum):
    A = "A"
    B = "B"

    @property
    def other(self) -> "Team":
        return Team.B if self is Team.A else Team.A


def complement(team: Team) -> Team:
    return team.other


class Mechanism(enum.Enum):
    STANDARD = "standard"
    ALTERNATING = "alternating"
    DOUBLE_ALTERNATING = "double-alternating"
    CATCH_UP = "catch-up"
    ADJ_CATCH_UP = "adjusted-catch-up"
    BEHIND_FIRST = "behind-first"
    ADJ_BEHIND_FIRST = "adjusted-behind-first"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @property
    def is_stochastic(self) -> bool:
        return self in STOCHASTIC_MECHANISMS

    @classmethod
    def parse(cls, text: str) -> "Mechanism":
        key = text.strip().lower().replace("_", "-").replace(" ", "-")
        if key in _ALIASES:
            return _ALIASES[key]
        return cls(key)


_LABELS = {
    Mechanism.STANDARD: "ABAB",
    Mechanism.ALTERNATING: "ABBA",
    Mechanism.DOUBLE_ALTERNATING: "ABBA|BAAB",
    Mechanism.CATCH_UP: "Catch-up",
    Mechanism.ADJ_CATCH_UP: "Adjusted Catch-up",
    Mechanism.BEHIND_FIRST: "Behind-first",
    Mechanism.ADJ_BEHIND_FIRST: "Adjusted Behind-first",
}

_ALIASES = {
    "abab": Mechanism.STANDARD,
    "abba": Mechanism.ALTERNATING,
    "abba|baab": Mechanism.DOUBLE_ALTERNATING,
    "abbabaab": Mechanism.DOUBLE_ALTERNATING,
    "double-alt": Mechanism.DOUBLE_ALTERNATING,
    "adj-catch-up": Mechanism.ADJ_CATCH_UP,
    "adj-behind-first": Mechanism.ADJ_BEHIND_FIRST,
}

STOCHASTIC_MECHANISMS = frozenset(
    {
        Mechanism.CATCH_UP,
        Mechanism.ADJ_CATCH_UP,
        Mechanism.BEHIND_FIRST,
        Mechanism.ADJ_BEHIND_FIRST,
    }
)


class PressureModel(enum.Enum):
    M1 = "m1"
    M2 = "m2"
    M3 = "m3"

    @classmethod
    def parse(cls, text: str) -> "PressureModel":
        return cls(text.strip().lower())


def to_number(value: Union[str, Real]) -> Number:
    """Coerce ``value`` to a float or Fraction.

    Strings are parsed as exact rationals, so ``"2/3"`` and ``"0.53"`` both
    become Fractions.  Fractions stay Fractions, everything else becomes a
    float.
    """
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    return float(value)


@dataclass(frozen=True)
class Params:
    """Scoring probabilities: ``p`` for the advantaged kick, ``q`` otherwise."""

    p: Number
    q: Number

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", to_number(self.p))
        object.__setattr__(self, "q", to_number(self.q))
        if not 0 <= self.q <= self.p <= 1:
            raise ValueError(f"need 0 <= q <= p <= 1, got p={self.p}, q={self.q}")

    @property
    def degenerate(self) -> bool:
        # every kick scores (or every kick misses), so sudden death never ends
        return self.p == self.q and self.p in (0, 1)

    @property
    def exact(self) -> bool:
        return isinstance(self.p, Fraction) and isinstance(self.q, Fraction)

    def as_float(self) -> "Params":
        return Params(float(self.p), float(self.q))

    def as_fraction(self) -> "Params":
        return Params(Fraction(self.p), Fraction(self.q))


@dataclass(frozen=True)
class RoundRecord:
    first_kicker: Team
    first_scored: bool
    second_scored: bool

    @property
    def second_kicker(self) -> Team:
        return self.first_kicker.other

    def goals(self, team: Team) -> int:
        if team is self.first_kicker:
            return int(self.first_scored)
        return int(self.second_scored)

    @property
    def order(self) -> str:
        return self.first_kicker.value + self.second_kicker.value


@dataclass(frozen=True)
class ShootoutState:
    """Score and history at the start of a round.

    ``score_a``, ``score_b`` and ``round_index`` are derived from
    ``history``, so they can never disagree with it.
    """

    regular_rounds: int = 5
    history: tuple[RoundRecord, ...] = ()
    score_a: int = field(init=False)
    score_b: int = field(init=False)

    def __post_init__(self) -> None:
        if self.regular_rounds < 1:
            raise ValueError("regular_rounds must be positive")
        object.__setattr__(self, "history", tuple(self.history))
        object.__setattr__(self, "score_a", sum(r.goals(Team.A) for r in self.history))
        object.__setattr__(self, "score_b", sum(r.goals(Team.B) for r in self.history))

    @property
    def round_index(self) -> int:
        return len(self.history) + 1

    @property
    def score(self) -> dict[Team, int]:
        return {Team.A: self.score_a, Team.B: self.score_b}

    @property
    def difference(self) -> int:
        """Goals of A minus goals of B."""
        return self.score_a - self.score_b

    @property
    def in_sudden_death(self) -> bool:
        return self.round_index > self.regular_rounds

    @property
    def last_round(self) -> Optional[RoundRecord]:
        return self.history[-1] if self.history else None

    def trailing(self, team: Team) -> bool:
        if team is Team.A:
            return self.score_a < self.score_b
        return self.score_b < self.score_a


def apply_round(state: ShootoutState, record: RoundRecord) -> ShootoutState:
    # bypasses __post_init__: scores are updated incrementally, not re-folded
    new = object.__new__(ShootoutState)
    object.__setattr__(new, "regular_rounds", state.regular_rounds)
    object.__setattr__(new, "history", state.history + (record,))
    object.__setattr__(new, "score_a", state.score_a + record.goals(Team.A))
    object.__setattr__(new, "score_b", state.score_b + record.goals(Team.B))
    return new


class Slot(enum.Enum):
    FIRST = "first"
    SECOND = "second"


@dataclass(frozen=True)
class KickContext:
    kicker: Team
    slot: Slot
    first_kick_scored_this_round: Optional[bool] = None
    kicker_trailing_now: bool = False

    def __post_init__(self) -> None:
        if (self.slot is Slot.SECOND) != (self.first_kick_scored_this_round is not None):
            raise ValueError("first_kick_scored_this_round is set iff slot is SECOND")


def scoring_probability(model: PressureModel, params: Params, ctx: KickContext) -> Number:
    if model is PressureModel.M1:
        return params.q if ctx.slot is Slot.SECOND else params.p
    if model is PressureModel.M2:
        if ctx.slot is Slot.SECOND and ctx.first_kick_scored_this_round:
            return params.q
        return params.p
    if model is PressureModel.M3:
        return params.q if ctx.kicker_trailing_now else params.p
    raise ValueError(f"unknown pressure model {model!r}")


def first_kick_context(state: ShootoutState, kicker: Team) -> KickContext:
    return KickContext(kicker, Slot.FIRST, None, state.trailing(kicker))


def second_kick_context(state: ShootoutState, first_kicker: Team, first_scored: bool) -> KickContext:
    kicker = first_kicker.other
    own = state.score[kicker]
    # the first kick of the round already counts for trailing status
    opponent = state.score[first_kicker] + int(first_scored)
    return KickContext(kicker, Slot.SECOND, first_scored, own < opponent)


# -- shooting-order rules ---------------------------------------------------
#
# Each rule only looks at the round index, the current score comparison and
# the previous round.  The exact engine relies on that when it merges states.


def _standard(state: ShootoutState) -> Team:
    return Team.A


def _alternating(state: ShootoutState) -> Team:
    return Team.A if state.round_index % 2 == 1 else Team.B


def _double_alternating(state: ShootoutState) -> Team:
    # cycle AB, BA, BA, AB
    return Team.A if state.round_index % 4 in (0, 1) else Team.B


def _catch_up(state: ShootoutState) -> Team:
    last = state.last_round
    if last is None:
        return Team.A
    if not last.first_scored and last.second_scored:
        return last.first_kicker
    return last.first_kicker.other


def _behind_first(state: ShootoutState) -> Team:
    last = state.last_round
    if last is None:
        return Team.A
    if state.score_a < state.score_b:
        return Team.A
    if state.score_b < state.score_a:
        return Team.B
    return last.first_kicker.other


def _adjusted(rule: Callable[[ShootoutState], Team]) -> Callable[[ShootoutState], Team]:
    def adjusted_rule(state: ShootoutState) -> Team:
        n = state.regular_rounds
        r = state.round_index
        if r <= n:
            return rule(state)
        # B opens sudden death, then strict alternation
        return Team.B if (r - n - 1) % 2 == 0 else Team.A

    return adjusted_rule


_RULES: dict[Mechanism, Callable[[ShootoutState], Team]] = {
    Mechanism.STANDARD: _standard,
    Mechanism.ALTERNATING: _alternating,
    Mechanism.DOUBLE_ALTERNATING: _double_alternating,
    Mechanism.CATCH_UP: _catch_up,
    Mechanism.ADJ_CATCH_UP: _adjusted(_catch_up),
    Mechanism.BEHIND_FIRST: _behind_first,
    Mechanism.ADJ_BEHIND_FIRST: _adjusted(_behind_first),
}


def first_kicker_of_round(mech: Mechanism, state: ShootoutState) -> Team:
    return _RULES[mech](state)


def round_outcomes(
    mech: Mechanism,
    model: PressureModel,
    params: Params,
    state: ShootoutState,
) -> Iterator[tuple[RoundRecord, Number]]:
    """Yield the four possible records of the next round with their probabilities."""
    first = first_kicker_of_round(mech, state)
    s1 = scoring_probability(model, params, first_kick_context(state, first))
    for first_scored, w1 in ((True, s1), (False, 1 - s1)):
        s2 = scoring_probability(model, params, second_kick_context(state, first, first_scored))
        yield RoundRecord(first, first_scored, True), w1 * s2
        yield RoundRecord(first, first_scored, False), w1 * (1 - s2)


def order_string(mech: Mechanism, history: list[RoundRecord] | tuple[RoundRecord, ...], regular_rounds: int = 5) -> str:
    """Kick order implied by ``mech`` for the rounds of ``history``, e.g. ``"ABBA"``."""
    state = ShootoutState(regular_rounds)
    out = []
    for record in history:
        first = first_kicker_of_round(mech, state)
        out.append(first.value + first.other.value)
        state = apply_round(state, RoundRecord(first, record.first_scored, record.second_scored))
    return "".join(out)
