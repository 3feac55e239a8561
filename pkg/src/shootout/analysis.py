"""Executable checks of the fairness propositions and the manipulation scan."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional, Sequence

from .core import (
    Mechanism,
    Number,
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
from .engine import regular_phase_distribution, sd_entry, total_win_probability
from .sudden_death import ModelClass, sd_win

TOLERANCE = 1e-12
GAIN_THRESHOLD = 1e-12

GridPoint = tuple[Number, Number, int]

PROPOSITION_IDS = ("P31", "C31", "P32", "P34", "P34Bound", "P35", "Echenique", "AbabM3RoundInvariance")


@dataclass
class PropositionReport:
    proposition_id: str
    parameter_grid: list[GridPoint]
    max_discrepancy: float
    holds: bool
    witness: Optional[dict[str, Any]] = None
    notes: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "Holds" if self.holds else "Fails"

    def summary(self) -> str:
        line = f"{self.proposition_id}: {self.verdict} ({len(self.parameter_grid)} points, max discrepancy {self.max_discrepancy:.3g})"
        if self.witness is not None:
            line += f" witness={self.witness}"
        return line


def _grid_values(start: Fraction, stop: Fraction, step: Fraction) -> list[Fraction]:
    out = []
    x = start
    while x <= stop:
        out.append(x)
        x += step
    return out


def default_grid() -> list[GridPoint]:
    ps = [Fraction(v, 100) for v in (60, 65, 70, 75, 80, 90)]
    grid = []
    for p in ps:
        for q in _grid_values(Fraction(30, 100), p, Fraction(5, 100)):
            for n in (1, 3, 5, 8):
                grid.append((p, q, n))
    return grid


def fast_grid() -> list[GridPoint]:
    grid = []
    for p, qs in ((Fraction(65, 100), (Fraction(50, 100), Fraction(65, 100))),
                  (Fraction(3, 4), (Fraction(2, 3),)),
                  (Fraction(90, 100), (Fraction(30, 100), Fraction(45, 100)))):
        for q in qs:
            for n in (1, 5):
                grid.append((p, q, n))
    return grid


def _params(p: Number, q: Number, exact: bool) -> Params:
    params = Params(p, q)
    return params.as_fraction() if exact else params.as_float()


def _close(a: Number, b: Number, exact: bool) -> bool:
    return a == b if exact else abs(a - b) <= TOLERANCE


def _pair_report(pid, grid, pairs, model, exact) -> PropositionReport:
    worst = 0.0
    witness = None
    for p, q, n in grid:
        params = _params(p, q, exact)
        for left, right in pairs:
            a = total_win_probability(left, model, params, n)
            b = total_win_probability(right, model, params, n)
            gap = max(abs(a.p_a_wins_total - b.p_a_wins_total), abs(a.p_reach_sd - b.p_reach_sd))
            worst = max(worst, float(gap))
            if witness is None and not (
                _close(a.p_a_wins_total, b.p_a_wins_total, exact) and _close(a.p_reach_sd, b.p_reach_sd, exact)
            ):
                witness = {
                    "p": p, "q": q, "n": n,
                    "mechanisms": (left.value, right.value),
                    "values": (a.p_a_wins_total, b.p_a_wins_total),
                }
    return PropositionReport(pid, list(grid), worst, witness is None, witness)


def check_catchup_equals_behindfirst_m3(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    """Catch-up and Behind-first (and their adjusted forms) give identical reports under M3."""
    pairs = [
        (Mechanism.CATCH_UP, Mechanism.BEHIND_FIRST),
        (Mechanism.ADJ_CATCH_UP, Mechanism.ADJ_BEHIND_FIRST),
    ]
    return _pair_report("P31", list(grid), pairs, PressureModel.M3, exact)


def check_adjusted_catchup_equals_behindfirst_m3(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    pairs = [(Mechanism.ADJ_CATCH_UP, Mechanism.ADJ_BEHIND_FIRST)]
    return _pair_report("C31", list(grid), pairs, PressureModel.M3, exact)


def m3_transition_matrix(params: Params, size: int) -> list[list[Number]]:
    """Transitions of |score difference| over one round under M3, states 0..size-1.

    From a level score the first kicker shoots with p and the second with q
    after a goal, p after a miss.  From k >= 1 the trailing team always
    shoots with q and the leader with p, whatever the order.  The last
    state absorbs upward moves so rows still sum to one.
    """
    p, q = params.p, params.q
    zero = 0 * p
    m = [[zero] * size for _ in range(size)]
    m[0][0] = p * q + (1 - p) * (1 - p)
    if size > 1:
        m[0][1] = p * (1 - q) + (1 - p) * p
    for k in range(1, size):
        m[k][k] = p * q + (1 - p) * (1 - q)
        m[k][k - 1] = (1 - p) * q
        m[k][min(k + 1, size - 1)] += p * (1 - q)
    return m


def markov_tie_probability(params: Params, n: int) -> Number:
    """Probability the regular phase ends level, from the score-difference chain."""
    m = m3_transition_matrix(params, n + 2)
    dist = [1 + 0 * params.p] + [0 * params.p] * (n + 1)
    for _ in range(n):
        dist = [sum(dist[i] * m[i][j] for i in range(len(dist))) for j in range(len(dist))]
    return dist[0]


def check_reach_invariance_m3(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    grid = list(grid)
    worst = 0.0
    witness = None
    for p, q, n in grid:
        params = _params(p, q, exact)
        reaches = {
            mech: regular_phase_distribution(mech, PressureModel.M3, params, n).p_tie for mech in Mechanism
        }
        chain = markov_tie_probability(params, n)
        for mech, value in reaches.items():
            gap = abs(value - chain)
            worst = max(worst, float(gap))
            if witness is None and not _close(value, chain, exact):
                witness = {"p": p, "q": q, "n": n, "mechanism": mech.value, "reach": value, "markov": chain}
    return PropositionReport("P32", grid, worst, witness is None, witness)


def check_echenique_ordering(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    """Under M1 and M2 with p > q, Alternating is closer to 1/2 than Standard."""
    grid = list(grid)
    worst = -math.inf
    witness = None
    skipped = 0
    for p, q, n in grid:
        if not p > q:
            skipped += 1
            continue
        params = _params(p, q, exact)
        pp, qq = params.p, params.q
        conditions = {
            PressureModel.M1: pp * (1 - qq) > (1 - pp) * qq,
            PressureModel.M2: pp * (1 - qq) > (1 - pp) * pp,
        }
        for model, condition in conditions.items():
            alt = abs(total_win_probability(Mechanism.ALTERNATING, model, params, n).bias)
            std = abs(total_win_probability(Mechanism.STANDARD, model, params, n).bias)
            worst = max(worst, float(alt - std))
            if witness is None and not (condition and alt < std):
                witness = {"p": p, "q": q, "n": n, "model": model.value, "condition": condition,
                           "abs_bias": (alt, std)}
    report = PropositionReport("Echenique", grid, worst if worst > -math.inf else 0.0, witness is None, witness)
    if skipped:
        report.notes.append(f"{skipped} points with p == q skipped")
    return report


def check_abab_m3_round_invariance(params: Params, n_range: Iterable[int] = range(1, 9)) -> PropositionReport:
    ns = list(n_range)
    values = [total_win_probability(Mechanism.STANDARD, PressureModel.M3, params, n).p_a_wins_total for n in ns]
    worst = max(abs(v - values[0]) for v in values)
    exact = params.exact
    bad = [(n, v) for n, v in zip(ns, values) if not _close(v, values[0], exact)]
    witness = None
    if bad:
        witness = {"p": params.p, "q": params.q, "n": bad[0][0], "value": bad[0][1], "n1_value": values[0]}
    return PropositionReport(
        "AbabM3RoundInvariance", [(params.p, params.q, n) for n in ns], float(worst), not bad, witness
    )


# -- manipulation by a deliberate miss --------------------------------------


@dataclass(frozen=True)
class DeviationValue:
    """A second kicker's choice at ``state`` after the first kick of the round."""

    state: ShootoutState
    first_scored: bool
    kicker: Team
    honest_value: Number
    deliberate_miss_value: Number

    @property
    def gain(self) -> Number:
        return self.deliberate_miss_value - self.honest_value


class _GameValues:
    """Backward induction over the regular phase, honest play from every state on.

    Values are A's winning probability at the start of a round; a tied
    regular phase is settled with the sudden-death closed forms.
    """

    def __init__(self, mech: Mechanism, model: PressureModel, params: Params, n: int) -> None:
        self.mech = mech
        self.model = model
        self.params = params
        self.n = n
        self.cls = ModelClass.of(model)
        self._memo: dict = {}

    @staticmethod
    def key(state: ShootoutState):
        return len(state.history), state.difference, state.last_round

    def value(self, state: ShootoutState) -> Number:
        k = self.key(state)
        if k in self._memo:
            return self._memo[k]
        if len(state.history) == self.n:
            d = state.difference
            if d != 0:
                v = 1 + 0 * self.params.p if d > 0 else 0 * self.params.p
            else:
                entry = sd_entry(self.mech, state)
                w = sd_win(entry.pattern, self.cls, self.params)
                v = w if entry.first_kicker is Team.A else 1 - w
        else:
            first = first_kicker_of_round(self.mech, state)
            s1 = scoring_probability(self.model, self.params, first_kick_context(state, first))
            v = s1 * self.after_first(state, first, True) + (1 - s1) * self.after_first(state, first, False)
        self._memo[k] = v
        return v

    def second_kick_prob(self, state: ShootoutState, first: Team, first_scored: bool) -> Number:
        return scoring_probability(self.model, self.params, second_kick_context(state, first, first_scored))

    def outcome(self, state: ShootoutState, first: Team, first_scored: bool, second_scored: bool) -> Number:
        return self.value(apply_round(state, RoundRecord(first, first_scored, second_scored)))

    def after_first(self, state: ShootoutState, first: Team, first_scored: bool) -> Number:
        s2 = self.second_kick_prob(state, first, first_scored)
        return s2 * self.outcome(state, first, first_scored, True) + (1 - s2) * self.outcome(
            state, first, first_scored, False
        )


def honest_root_value(mech: Mechanism, model: PressureModel, params: Params, n: int) -> Number:
    return _GameValues(mech, model, params, n).value(ShootoutState(n))


def deviation_values(mech: Mechanism, model: PressureModel, params: Params, n: int) -> list[DeviationValue]:
    """Honest and deliberate-miss values at every reachable second-kick decision.

    Histories that share the round, score difference and previous round have
    the same continuation, so each such class is reported once, with the
    first history found as its representative.
    """
    game = _GameValues(mech, model, params, n)
    out = []
    layer = {game.key(ShootoutState(n)): ShootoutState(n)}
    for _ in range(n):
        nxt = {}
        for state in layer.values():
            first = first_kicker_of_round(mech, state)
            kicker = first.other
            s1 = scoring_probability(model, params, first_kick_context(state, first))
            for first_scored, w1 in ((True, s1), (False, 1 - s1)):
                if w1 == 0:
                    continue
                s2 = game.second_kick_prob(state, first, first_scored)
                scored = game.outcome(state, first, first_scored, True)
                missed = game.outcome(state, first, first_scored, False)
                honest = s2 * scored + (1 - s2) * missed
                if kicker is Team.B:
                    honest, missed = 1 - honest, 1 - missed
                out.append(DeviationValue(state, first_scored, kicker, honest, missed))
                for second_scored, w2 in ((True, s2), (False, 1 - s2)):
                    if w2 == 0:
                        continue
                    child = apply_round(state, RoundRecord(first, first_scored, second_scored))
                    nxt.setdefault(game.key(child), child)
        layer = nxt
    return out


def strategy_proofness_scan(
    mech: Mechanism, model: PressureModel, params: Params, n: int, threshold: float = GAIN_THRESHOLD
) -> list[DeviationValue]:
    """Decision points where deliberately missing the second kick of a round pays off."""
    return [dv for dv in deviation_values(mech, model, params, n) if dv.gain > threshold]


def _scan_report(pid, grid, cases, exact) -> PropositionReport:
    worst = -math.inf
    witness = None
    for p, q, n in grid:
        params = _params(p, q, exact)
        for mech, model, applies in cases:
            if not applies(p, q):
                continue
            dvs = deviation_values(mech, model, params, n)
            best = max((dv.gain for dv in dvs), default=0.0)
            worst = max(worst, float(best))
            if witness is None and best > GAIN_THRESHOLD:
                dv = max(dvs, key=lambda d: d.gain)
                witness = {
                    "p": p, "q": q, "n": n, "mechanism": mech.value, "model": model.value,
                    "round": dv.state.round_index, "score": (dv.state.score_a, dv.state.score_b),
                    "kicker": dv.kicker.value, "gain": dv.gain,
                }
    return PropositionReport(pid, list(grid), worst if worst > -math.inf else 0.0, witness is None, witness)


def _always(p, q) -> bool:
    return True


def _gap_at_most_half(p, q) -> bool:
    return Fraction(p) - Fraction(q) <= Fraction(1, 2)


def myopic_goal_margin(model: PressureModel, params: Params) -> Number:
    """One-round expected-goal edge of scoring over a deliberate miss under Catch-up.

    Setting: the first kicker of the round has missed.  Scoring keeps the
    order for the next round, missing hands the kicker the first kick.  The
    value is the kicker's expected goal difference after the next round when
    scoring minus the same when missing.  Under M1 this is ``1 - 2 (p - q)``,
    the source of the ``p - q <= 1/2`` bound.  It looks one round ahead only.
    """
    p, q = params.p, params.q
    if model is PressureModel.M1:
        as_second = q - p
        as_first = p - q
    elif model is PressureModel.M2:
        # second kicker's chance depends on whether the first kick went in
        as_second = p * q + (1 - p) * p - p
        as_first = p - (p * q + (1 - p) * p)
    else:
        as_second = as_first = 0 * p
    return (1 + as_second) - as_first


def check_catchup_strategy_proofness(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    """Catch-up: no profitable miss under M2/M3, nor under M1 with p - q <= 1/2."""
    cases = [
        (Mechanism.CATCH_UP, PressureModel.M1, _gap_at_most_half),
        (Mechanism.CATCH_UP, PressureModel.M2, _always),
        (Mechanism.CATCH_UP, PressureModel.M3, _always),
    ]
    return _scan_report("P34", grid, cases, exact)


CATCH_UP_WITNESS = (Fraction(9, 10), Fraction(3, 10), 5)


def check_catchup_m1_bound_witness(point: GridPoint = CATCH_UP_WITNESS, exact: bool = False) -> PropositionReport:
    """The M1 bound is meant to be tight: beyond it a profitable miss should exist.

    Holds only if the scan finds at least one positive-gain decision point
    for Catch-up under M1 at ``point``.
    """
    p, q, n = point
    params = _params(p, q, exact)
    found = strategy_proofness_scan(Mechanism.CATCH_UP, PressureModel.M1, params, n)
    best = max((dv.gain for dv in deviation_values(Mechanism.CATCH_UP, PressureModel.M1, params, n)), default=0.0)
    report = PropositionReport("P34Bound", [point], float(best), bool(found))
    margin = myopic_goal_margin(PressureModel.M1, params)
    report.notes.append(f"{len(found)} profitable deviation points; one-round expected-goal margin {float(margin):.3f}")
    if not found:
        report.witness = {"p": p, "q": q, "n": n, "mechanism": "catch-up", "model": "m1",
                          "max_gain": best, "expected": "a decision point with positive gain"}
    return report


def check_behindfirst_strategy_proofness(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    cases = [(Mechanism.BEHIND_FIRST, model, _always) for model in PressureModel]
    return _scan_report("P35", grid, cases, exact)


def adjusted_variant_scan(grid: Iterable[GridPoint], exact: bool = False) -> PropositionReport:
    """Manipulation scan for the adjusted rules under the same conditions as the base rules.

    Informational: a deliberate miss late in the regular phase can move the
    order parity, and the adjusted rules no longer give the sudden-death
    opening back to compensate.
    """
    cases = [
        (Mechanism.ADJ_CATCH_UP, PressureModel.M1, _gap_at_most_half),
        (Mechanism.ADJ_CATCH_UP, PressureModel.M2, _always),
        (Mechanism.ADJ_CATCH_UP, PressureModel.M3, _always),
    ] + [(Mechanism.ADJ_BEHIND_FIRST, model, _always) for model in PressureModel]
    return _scan_report("AdjustedStrategyProofness", grid, cases, exact)


def run_all(grid: Sequence[GridPoint], exact: bool = False) -> list[PropositionReport]:
    grid = list(grid)
    reports = [
        check_catchup_equals_behindfirst_m3(grid, exact),
        check_adjusted_catchup_equals_behindfirst_m3(grid, exact),
        check_reach_invariance_m3(grid, exact),
        check_catchup_strategy_proofness(grid, exact),
        check_catchup_m1_bound_witness(exact=exact),
        check_behindfirst_strategy_proofness(grid, exact),
        check_echenique_ordering(grid, exact),
    ]
    pq = sorted({(p, q) for p, q, _ in grid})
    worst = 0.0
    failing = None
    for p, q in pq:
        r = check_abab_m3_round_invariance(_params(p, q, exact))
        worst = max(worst, r.max_discrepancy)
        if failing is None and not r.holds:
            failing = r
    reports.append(
        PropositionReport(
            "AbabM3RoundInvariance",
            [(p, q, n) for p, q in pq for n in range(1, 9)],
            worst,
            failing is None,
            None if failing is None else failing.witness,
        )
    )
    return reports
