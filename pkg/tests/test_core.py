from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shootout.core import (
    KickContext,
    Mechanism,
    Params,
    PressureModel,
    RoundRecord,
    ShootoutState,
    Slot,
    Team,
    apply_round,
    complement,
    first_kick_context,
    first_kicker_of_round,
    round_outcomes,
    scoring_probability,
    second_kick_context,
)

P, Q = Fraction(3, 4), Fraction(2, 3)
PARAMS = Params(P, Q)


def replay(mech, outcomes, n=5):
    """Play ``outcomes`` (pairs of first/second kick results) under ``mech``."""
    state = ShootoutState(n)
    for first_scored, second_scored in outcomes:
        first = first_kicker_of_round(mech, state)
        state = apply_round(state, RoundRecord(first, first_scored, second_scored))
    return state


def test_team_complement():
    assert complement(Team.A) is Team.B
    assert complement(Team.B) is Team.A
    assert len(Team) == 2


def test_enumerations_have_expected_sizes():
    assert len(Mechanism) == 7
    assert len(PressureModel) == 3


@pytest.mark.parametrize("p,q", [(0.5, 0.6), (1.2, 0.5), (0.5, -0.1)])
def test_params_reject_invalid(p, q):
    with pytest.raises(ValueError):
        Params(p, q)


def test_params_parse_rational_strings():
    params = Params("3/4", "2/3")
    assert params.p == Fraction(3, 4) and params.q == Fraction(2, 3)
    assert params.exact
    assert Params(1, 1).degenerate
    assert not PARAMS.degenerate


def test_kick_context_slot_consistency():
    with pytest.raises(ValueError):
        KickContext(Team.A, Slot.FIRST, True)
    with pytest.raises(ValueError):
        KickContext(Team.A, Slot.SECOND, None)


# Example: A trails 2-3 before round 4 and kicks first.
def _example_state():
    history = [
        RoundRecord(Team.A, False, True),
        RoundRecord(Team.A, True, True),
        RoundRecord(Team.A, True, True),
    ]
    state = ShootoutState(5, tuple(history))
    assert (state.score_a, state.score_b) == (2, 3)
    return state


@pytest.mark.parametrize(
    "model,seventh,eighth_after_miss,eighth_after_goal",
    [
        (PressureModel.M1, P, Q, Q),
        (PressureModel.M2, P, P, Q),
        (PressureModel.M3, Q, P, P),
    ],
)
def test_scoring_probability_example(model, seventh, eighth_after_miss, eighth_after_goal):
    state = _example_state()
    assert scoring_probability(model, PARAMS, first_kick_context(state, Team.A)) == seventh
    assert scoring_probability(model, PARAMS, second_kick_context(state, Team.A, False)) == eighth_after_miss
    assert scoring_probability(model, PARAMS, second_kick_context(state, Team.A, True)) == eighth_after_goal


def test_m3_counts_goal_scored_earlier_in_round():
    # level score; B kicks second after A scored, so B is behind at kick time
    state = ShootoutState(5)
    ctx = second_kick_context(state, Team.A, True)
    assert ctx.kicker is Team.B and ctx.kicker_trailing_now
    assert scoring_probability(PressureModel.M3, PARAMS, ctx) == Q


@given(st.sampled_from(list(PressureModel)), st.sampled_from(list(Slot)), st.booleans(), st.booleans())
def test_models_collapse_when_p_equals_q(model, slot, scored, trailing):
    params = Params(0.7, 0.7)
    ctx = KickContext(Team.A, slot, scored if slot is Slot.SECOND else None, trailing)
    assert scoring_probability(model, params, ctx) == 0.7


@given(st.sampled_from(list(PressureModel)))
def test_non_trailing_first_kicker_gets_p(model):
    ctx = KickContext(Team.B, Slot.FIRST, None, False)
    assert scoring_probability(model, PARAMS, ctx) == P


def test_order_examples():
    s = ShootoutState(5)
    assert first_kicker_of_round(Mechanism.ALTERNATING, replay(Mechanism.ALTERNATING, [(True, True)])) is Team.B
    assert first_kicker_of_round(Mechanism.DOUBLE_ALTERNATING, replay(Mechanism.DOUBLE_ALTERNATING, [(1, 1)] * 2)) is Team.B
    after_catch = [(False, True)]
    assert first_kicker_of_round(Mechanism.BEHIND_FIRST, replay(Mechanism.BEHIND_FIRST, after_catch)) is Team.A
    assert first_kicker_of_round(Mechanism.CATCH_UP, replay(Mechanism.CATCH_UP, after_catch)) is Team.A
    assert first_kicker_of_round(Mechanism.STANDARD, s) is Team.A


@pytest.mark.parametrize("mech", [Mechanism.ADJ_BEHIND_FIRST, Mechanism.ADJ_CATCH_UP])
@pytest.mark.parametrize(
    "outcomes",
    [[(True, True)] * 5, [(False, False)] * 5, [(False, True), (True, False)] + [(False, False)] * 3],
)
def test_adjusted_rules_give_b_the_sudden_death_opening(mech, outcomes):
    state = replay(mech, outcomes)
    assert state.difference == 0 and state.round_index == 6
    assert first_kicker_of_round(mech, state) is Team.B
    state = apply_round(state, RoundRecord(Team.B, True, True))
    assert first_kicker_of_round(mech, state) is Team.A
    state = apply_round(state, RoundRecord(Team.A, False, False))
    assert first_kicker_of_round(mech, state) is Team.B


def test_double_alternating_cycle():
    state = ShootoutState(8)
    order = []
    for _ in range(8):
        first = first_kicker_of_round(Mechanism.DOUBLE_ALTERNATING, state)
        order.append(first.value + first.other.value)
        state = apply_round(state, RoundRecord(first, True, True))
    assert "".join(order) == "ABBABAAB" * 2


def test_apply_round_examples():
    s = apply_round(ShootoutState(5), RoundRecord(Team.A, False, True))
    assert (s.score_a, s.score_b, s.round_index) == (0, 1, 2)
    s = ShootoutState(5, (RoundRecord(Team.A, True, True),) * 2 + (RoundRecord(Team.A, False, False),) * 2)
    assert (s.score_a, s.score_b, s.round_index) == (2, 2, 5)
    s = apply_round(s, RoundRecord(Team.B, False, False))
    assert (s.score_a, s.score_b, s.round_index) == (2, 2, 6)


# Reference illustration, kick by kick: for each
# kick 1..14 the kicking team and whether it scored.
TABLE1 = {
    Mechanism.STANDARD: "A0 B1 A1 B1 A0 B0 A1 B0 A0 B0 A1 B1 A1 B0",
    Mechanism.ALTERNATING: "A0 B1 B1 A1 A0 B0 B0 A1 A0 B0 B1 A1 A1 B0",
    Mechanism.DOUBLE_ALTERNATING: "A0 B1 B1 A1 B0 A0 A1 B0 A0 B0 B1 A1 B0 A1",
    Mechanism.CATCH_UP: "A0 B1 A1 B1 B0 A0 A1 B0 B0 A0 A1 B1 B0 A1",
    Mechanism.ADJ_CATCH_UP: "A0 B1 A1 B1 B0 A0 A1 B0 B0 A0 B1 A1 A1 B0",
    Mechanism.BEHIND_FIRST: "A0 B1 A1 B1 A0 B0 A1 B0 B0 A0 A1 B1 B0 A1",
    Mechanism.ADJ_BEHIND_FIRST: "A0 B1 A1 B1 A0 B0 A1 B0 B0 A0 B1 A1 A1 B0",
}


@pytest.mark.parametrize("mech", list(Mechanism))
def test_table1_orders_and_scores(mech):
    kicks = [(Team(k[0]), k[1] == "1") for k in TABLE1[mech].split()]
    state = ShootoutState(5)
    for i in range(0, len(kicks), 2):
        (first, s1), (second, s2) = kicks[i], kicks[i + 1]
        assert first_kicker_of_round(mech, state) is first, f"round {i // 2 + 1}"
        assert second is first.other
        state = apply_round(state, RoundRecord(first, s1, s2))
        if state.round_index == 6:
            # level after the regular phase (the illustration is 2-2 here)
            assert (state.score_a, state.score_b) == (2, 2)
        if state.round_index == 7:
            assert (state.score_a, state.score_b) == (3, 3)
    assert (state.score_a, state.score_b) == (4, 3)


records = st.builds(RoundRecord, st.sampled_from(list(Team)), st.booleans(), st.booleans())


@given(st.lists(records, max_size=12), st.integers(1, 8))
def test_state_invariants(history, n):
    state = ShootoutState(n, tuple(history))
    assert state.score_a == sum(r.goals(Team.A) for r in history)
    assert state.score_b == sum(r.goals(Team.B) for r in history)
    assert abs(state.difference) <= len(history)
    assert state.round_index == len(history) + 1
    incremental = ShootoutState(n)
    for r in history:
        incremental = apply_round(incremental, r)
    assert incremental == state


outcomes = st.lists(st.tuples(st.booleans(), st.booleans()), max_size=10)


@given(st.sampled_from(list(Mechanism)), st.integers(1, 8))
def test_round_one_belongs_to_a(mech, n):
    assert first_kicker_of_round(mech, ShootoutState(n)) is Team.A


@given(outcomes, st.integers(1, 8))
def test_adjusted_rules_match_base_in_regular_phase(outs, n):
    for base, adj in ((Mechanism.CATCH_UP, Mechanism.ADJ_CATCH_UP), (Mechanism.BEHIND_FIRST, Mechanism.ADJ_BEHIND_FIRST)):
        a, b = ShootoutState(n), ShootoutState(n)
        for s1, s2 in outs[:n]:
            fa, fb = first_kicker_of_round(base, a), first_kicker_of_round(adj, b)
            assert fa is fb
            a = apply_round(a, RoundRecord(fa, s1, s2))
            b = apply_round(b, RoundRecord(fb, s1, s2))


@given(st.lists(st.sampled_from([(True, True), (False, False)]), min_size=1, max_size=8))
def test_behind_first_alternates_while_level(outs):
    state = replay(Mechanism.BEHIND_FIRST, outs, n=8)
    alt = replay(Mechanism.ALTERNATING, outs, n=8)
    assert [r.first_kicker for r in state.history] == [r.first_kicker for r in alt.history]


@given(outcomes, st.sampled_from(list(Mechanism)), st.sampled_from(list(PressureModel)))
def test_round_outcomes_sum_to_one(outs, mech, model):
    state = replay(mech, outs, n=5)
    total = sum(w for _, w in round_outcomes(mech, model, PARAMS, state))
    assert total == 1
