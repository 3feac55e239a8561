"""Exact winning probabilities for a whole shootout.

The regular phase is computed either by walking every one of the 2**(2n)
kick sequences (``method="enumerate"``) or by a dynamic program that merges
histories sharing the round, the score difference and the previous round's
record (``method="dp"``).  Every order rule in :mod:`shootout.core` reads
nothing else, so both give identical results; with Fraction parameters they
agree exactly.  Level regular phases are then settled with the sudden-death
closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal, NamedTuple, Optional, Sequence

from .core import (
    Mechanism,
    Number,
    Params,
    PressureModel,
    RoundRecord,
    ShootoutState,
    Team,
    apply_round,
    first_kicker_of_round,
    round_outcomes,
)
from .sudden_death import DegenerateParameters, ModelClass, SdPattern, resolution_probability, sd_win

Method = Literal["auto", "enumerate", "dp"]

MAX_ROUNDS = 16
MAX_ENUMERATION_ROUNDS = 10


class SdEntry(NamedTuple):
    first_kicker: Team
    pattern: SdPattern


@dataclass(frozen=True)
class PhaseDistribution:
    p_a_leads: Number
    p_b_leads: Number
    tie_entries: dict[SdEntry, Number] = field(default_factory=dict)

    @property
    def p_tie(self) -> Number:
        return sum(self.tie_entries.values(), 0 * self.p_a_leads)

    @property
    def total(self) -> Number:
        return self.p_a_leads + self.p_b_leads + self.p_tie


@dataclass(frozen=True)
class WinReport:
    p_a_wins_total: Number
    p_reach_sd: Number

    @property
    def bias(self) -> Number:
        return self.p_a_wins_total - type(self.p_a_wins_total)(1) / 2


def sd_pattern_for(mech: Mechanism, n: int) -> SdPattern:
    if mech is Mechanism.STANDARD:
        return SdPattern.STANDARD_ORDER
    if mech is Mechanism.DOUBLE_ALTERNATING:
        # rounds n+1 and n+2 share a first kicker iff n is odd (cycle AB BA BA AB)
        return SdPattern.DOUBLE_ALT_TWO_FIRST if n % 2 == 1 else SdPattern.DOUBLE_ALT_ONE_FIRST
    return SdPattern.ALTERNATING_ORDER


def sd_entry(mech: Mechanism, tied_state: ShootoutState) -> SdEntry:
    """Who opens sudden death after ``tied_state`` ends the regular phase level."""
    return SdEntry(first_kicker_of_round(mech, tied_state), sd_pattern_for(mech, tied_state.regular_rounds))


def _check_rounds(n: int) -> None:
    if not 1 <= n <= MAX_ROUNDS:
        raise ValueError(f"rounds must be in 1..{MAX_ROUNDS}, got {n}")


def _classify(
    mech: Mechanism,
    leaves: Iterable[tuple[ShootoutState, Number]],
    zero: Number,
) -> PhaseDistribution:
    a_leads = zero
    b_leads = zero
    ties: dict[SdEntry, Number] = {}
    for state, mass in leaves:
        d = state.difference
        if d > 0:
            a_leads += mass
        elif d < 0:
            b_leads += mass
        else:
            key = sd_entry(mech, state)
            ties[key] = ties.get(key, zero) + mass
    return PhaseDistribution(a_leads, b_leads, ties)


def _enumerate_leaves(mech, model, params, n):
    stack = [(ShootoutState(n), 1 + 0 * params.p)]
    while stack:
        state, mass = stack.pop()
        if len(state.history) == n:
            yield state, mass
            continue
        for record, w in round_outcomes(mech, model, params, state):
            stack.append((apply_round(state, record), mass * w))


def _merge_key(state: ShootoutState) -> tuple[int, Optional[RoundRecord]]:
    return state.difference, state.last_round


def _dp_leaves(mech, model, params, n):
    layer = {_merge_key(ShootoutState(n)): (ShootoutState(n), 1 + 0 * params.p)}
    for _ in range(n):
        nxt: dict = {}
        for state, mass in layer.values():
            for record, w in round_outcomes(mech, model, params, state):
                child = apply_round(state, record)
                key = _merge_key(child)
                if key in nxt:
                    rep, acc = nxt[key]
                    nxt[key] = (rep, acc + mass * w)
                else:
                    nxt[key] = (child, mass * w)
        layer = nxt
    return layer.values()


def regular_phase_distribution(
    mech: Mechanism,
    model: PressureModel,
    params: Params,
    n: int,
    method: Method = "auto",
) -> PhaseDistribution:
    _check_rounds(n)
    if method == "auto":
        method = "dp"
    if method == "enumerate":
        if n > MAX_ENUMERATION_ROUNDS:
            raise ValueError(f"full enumeration is limited to {MAX_ENUMERATION_ROUNDS} rounds; use method='dp'")
        leaves = _enumerate_leaves(mech, model, params, n)
    elif method == "dp":
        leaves = _dp_leaves(mech, model, params, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _classify(mech, leaves, 0 * params.p)


def join_sudden_death(dist: PhaseDistribution, model: PressureModel, params: Params) -> WinReport:
    cls = ModelClass.of(model)
    reach = dist.p_tie
    total = dist.p_a_leads
    if reach != 0 and resolution_probability(cls, params) == 0:
        raise DegenerateParameters("sudden death is reached but can never be decided")
    for entry, mass in dist.tie_entries.items():
        if mass == 0:
            continue
        w = sd_win(entry.pattern, cls, params)
        total += mass * (w if entry.first_kicker is Team.A else 1 - w)
    return WinReport(total, reach)


def total_win_probability(
    mech: Mechanism,
    model: PressureModel,
    params: Params,
    n: int = 5,
    method: Method = "auto",
) -> WinReport:
    dist = regular_phase_distribution(mech, model, params, n, method)
    return join_sudden_death(dist, model, params)


def table2(
    model: PressureModel,
    params: Params,
    n_range: Iterable[int] = range(1, 9),
    mechanisms: Sequence[Mechanism] = tuple(Mechanism),
) -> dict[Mechanism, list[Number]]:
    """Winning probability of A for every mechanism (rows) and round count (columns)."""
    ns = list(n_range)
    return {
        mech: [total_win_probability(mech, model, params, n).p_a_wins_total for n in ns]
        for mech in mechanisms
    }


def sweep_grid(
    mech: Mechanism,
    model: PressureModel,
    p_values: Iterable[Number],
    q_values: Iterable[Number],
    n: int = 5,
) -> list[tuple[Number, Number, Number]]:
    ps = list(p_values)
    qs = sorted(q_values)
    bad = [(p, q) for p in ps for q in qs if q > p]
    if bad:
        raise ValueError(f"q must not exceed p; offending pairs: {bad[:3]}")
    out = []
    for p in ps:
        for q in qs:
            report = total_win_probability(mech, model, Params(p, q), n)
            out.append((p, q, report.p_a_wins_total))
    return out
