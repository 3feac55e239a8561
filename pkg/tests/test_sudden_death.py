import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from shootout.core import Params, PressureModel, Team
from shootout.sudden_death import (
    DegenerateParameters,
    ModelClass,
    SdPattern,
    resolution_probability,
    round_probabilities,
    sd_stats,
    sd_win,
    sd_win_truncated_oracle,
)

REFERENCE = Params(Fraction(3, 4), Fraction(2, 3))
CASES = [(pattern, cls) for pattern in SdPattern for cls in ModelClass]


def periodic_oracle(pattern, cls, params):
    """Solve the opener's win probability as a fixed point over one period.

    Every pattern has period at most 4, so V_0 = sum_k t^k a_k + t^4 V_0
    where a_k is the opener's chance of winning round k.
    """
    first_wins, second_wins, drawn = round_probabilities(cls, params)
    kickers = pattern.first_kickers(4)
    gain = sum(drawn**k * (first_wins if kicker is Team.A else second_wins) for k, kicker in enumerate(kickers))
    return gain / (1 - drawn**4)


def test_model_class_mapping():
    assert ModelClass.of(PressureModel.M1) is ModelClass.CLASS1
    assert ModelClass.of(PressureModel.M2) is ModelClass.CLASS23
    assert ModelClass.of(PressureModel.M3) is ModelClass.CLASS23


def test_pattern_first_kickers():
    A, B = Team.A, Team.B
    assert SdPattern.STANDARD_ORDER.first_kickers(3) == [A, A, A]
    assert SdPattern.ALTERNATING_ORDER.first_kickers(4) == [A, B, A, B]
    assert SdPattern.DOUBLE_ALT_TWO_FIRST.first_kickers(6) == [A, A, B, B, A, A]
    assert SdPattern.DOUBLE_ALT_ONE_FIRST.first_kickers(6) == [A, B, B, A, A, B]


def test_reference_values():
    assert sd_win(SdPattern.STANDARD_ORDER, ModelClass.CLASS1, REFERENCE) == Fraction(3, 5)
    assert sd_win(SdPattern.ALTERNATING_ORDER, ModelClass.CLASS1, REFERENCE) == Fraction(10, 19)
    assert sd_win(SdPattern.STANDARD_ORDER, ModelClass.CLASS23, REFERENCE) == Fraction(4, 7)


@pytest.mark.parametrize("pattern,cls", CASES)
def test_closed_form_matches_periodic_oracle_exactly(pattern, cls):
    assert sd_win(pattern, cls, REFERENCE) == periodic_oracle(pattern, cls, REFERENCE)


@pytest.mark.parametrize("pattern,cls", CASES)
def test_closed_form_inside_bracket(pattern, cls):
    for p in (0.55, 0.7, 0.85, 0.95):
        for q in (0.1, 0.4, p):
            params = Params(p, q)
            lower, upper = sd_win_truncated_oracle(pattern, cls, params, 400)
            value = sd_win(pattern, cls, params)
            assert lower - 1e-15 <= value <= upper + 1e-15
            assert abs(value - (lower + upper) / 2) <= (upper - lower) + 1e-15


def test_bracket_one_round():
    p, q = REFERENCE.p, REFERENCE.q
    lower, upper = sd_win_truncated_oracle(SdPattern.STANDARD_ORDER, ModelClass.CLASS1, REFERENCE, 1)
    assert lower == p * (1 - q)
    assert upper == p * (1 - q) + p * q + (1 - p) * (1 - q)


def test_bracket_never_narrows_when_every_kick_scores():
    params = Params(1, 1)
    for horizon in (1, 10, 100):
        lower, upper = sd_win_truncated_oracle(SdPattern.ALTERNATING_ORDER, ModelClass.CLASS1, params, horizon)
        assert (lower, upper) == (0, 1)


def test_bracket_rejects_empty_horizon():
    with pytest.raises(ValueError):
        sd_win_truncated_oracle(SdPattern.STANDARD_ORDER, ModelClass.CLASS1, REFERENCE, 0)


def test_stats_examples():
    s1 = sd_stats(ModelClass.CLASS1, REFERENCE)
    assert s1.resolution_prob == Fraction(5, 12) and s1.expected_length == Fraction(12, 5)
    s23 = sd_stats(ModelClass.CLASS23, REFERENCE)
    assert s23.resolution_prob == Fraction(7, 16) and s23.expected_length == Fraction(16, 7)
    assert s1.first_kicker_win is None
    assert sd_stats(ModelClass.CLASS1, REFERENCE, SdPattern.STANDARD_ORDER).first_kicker_win == Fraction(3, 5)


@pytest.mark.parametrize("params", [Params(1, 1), Params(0, 0)])
def test_degenerate_parameters(params):
    stats = sd_stats(ModelClass.CLASS1, params, SdPattern.STANDARD_ORDER)
    assert stats.resolution_prob == 0 and stats.expected_length == math.inf
    assert stats.first_kicker_win is None
    for pattern, cls in CASES:
        with pytest.raises(DegenerateParameters):
            sd_win(pattern, cls, params)


probs = st.fractions(min_value=0, max_value=1, max_denominator=50)


@st.composite
def params_strategy(draw, strict=False):
    p = draw(probs)
    q = draw(probs.filter(lambda q: q <= p and (q < p or not strict)))
    if p == 1 and q == 1:
        q = Fraction(1, 2)
    return Params(p, q)


@given(params_strategy())
def test_round_probabilities_sum_to_one(params):
    for cls in ModelClass:
        assert sum(round_probabilities(cls, params)) == 1


@given(params_strategy())
def test_resolution_independent_of_pattern(params):
    for cls in ModelClass:
        first_wins, second_wins, _ = round_probabilities(cls, params)
        r = resolution_probability(cls, params)
        assert r == first_wins + second_wins
        stats = sd_stats(cls, params)
        if r > 0:
            assert stats.expected_length * r == 1


@given(params_strategy())
def test_closed_forms_equal_periodic_oracle(params):
    for pattern, cls in CASES:
        if resolution_probability(cls, params) == 0:
            with pytest.raises(DegenerateParameters):
                sd_win(pattern, cls, params)
            continue
        value = sd_win(pattern, cls, params)
        assert value == periodic_oracle(pattern, cls, params)
        assert 0 <= value <= 1


@given(st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=100))
def test_symmetry_at_equal_probabilities(p):
    params = Params(p, p)
    for cls in ModelClass:
        assert sd_win(SdPattern.STANDARD_ORDER, cls, params) == Fraction(1, 2)
        assert sd_win(SdPattern.ALTERNATING_ORDER, cls, params) == Fraction(1, 2)
        # the one-first pattern is the two-first pattern seen from the other side
        two_first = sd_win(SdPattern.DOUBLE_ALT_TWO_FIRST, cls, params)
        assert two_first + sd_win(SdPattern.DOUBLE_ALT_ONE_FIRST, cls, params) == 1


@given(params_strategy(strict=True))
def test_first_mover_advantage_under_m1(params):
    if resolution_probability(ModelClass.CLASS1, params) > 0:
        assert sd_win(SdPattern.STANDARD_ORDER, ModelClass.CLASS1, params) > Fraction(1, 2)
