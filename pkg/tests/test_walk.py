import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loqc_parity.walk import (
    DomainError,
    WalkProblem,
    absorb_prob,
    log_p_add,
    markov_exact,
    mean_encoder_uses,
    mean_passage_closed,
    p_add,
    p_re,
)
from oracles import walk_by_propagation

GRID_P = [0.51, 0.6, 2 / 3, 0.75, 0.8]


def test_p_add_three_quarters_exact():
    assert p_add(Fraction(3, 4), 4) == Fraction(120, 121)


def test_p_add_two_thirds_exact():
    assert p_add(Fraction(2, 3), 4) == Fraction(30, 31)


def test_p_re_two_thirds_exact():
    assert p_re(Fraction(2, 3), 4) == Fraction(8, 15)


def test_symmetric_walk_branch():
    assert p_add(Fraction(1, 2), 4) == Fraction(4, 5)
    assert p_re(0.5, 4) == pytest.approx(0.25)
    # Just inside the tolerance the linear branch is used; just outside, the closed form.
    assert p_add(0.5 + 1e-13, 4) == pytest.approx(0.8, abs=1e-12)
    assert p_add(0.5 + 1e-9, 4) == pytest.approx(0.8, abs=1e-8)


def test_zero_width_add_is_lost():
    assert p_add(Fraction(3, 4), 0) == 0


def test_negative_width_rejected():
    with pytest.raises(DomainError):
        p_add(0.75, -1)
    with pytest.raises(DomainError):
        p_re(0.75, 0)


def test_walk_problem_validation():
    with pytest.raises(DomainError):
        WalkProblem(0.5, 1, 1, 1)
    with pytest.raises(DomainError):
        WalkProblem(1.5, 0, 3, 1)
    with pytest.raises(DomainError):
        WalkProblem(0.5, 0, 3, 5)


def test_mean_add_steps_value():
    # Conditional mean of the T_3/4 adding walk at w=4; quoted as about 1.8828.
    value = mean_encoder_uses("add", Fraction(3, 4), 4)
    assert float(value) == pytest.approx(1.8826446, abs=1e-7)
    assert float(value) == pytest.approx(1.8828, abs=5e-4)


def test_mean_re_steps_values():
    assert mean_encoder_uses("re_success", Fraction(2, 3), 4) == Fraction(23, 5)
    assert mean_encoder_uses("re_fail", Fraction(2, 3), 4) == Fraction(71, 35)


def test_width_one_reencoding():
    assert mean_encoder_uses("re_fail", 0.75, 1) is None
    assert mean_encoder_uses("re_success", 0.75, 1) == 0
    assert p_re(0.75, 1) == 1


def test_closed_passage_rejects_low_p():
    with pytest.raises(DomainError):
        mean_passage_closed(WalkProblem(0.5, -4, 1, 0))
    with pytest.raises(DomainError):
        mean_passage_closed(WalkProblem(0.4, -4, 1, 0))


@pytest.mark.parametrize("p", GRID_P)
@pytest.mark.parametrize("w", [1, 2, 5, 12, 20])
def test_closed_forms_against_propagation(p, w):
    pr, tr, _ = walk_by_propagation(p, -w, 1, 0)
    assert float(p_add(p, w)) == pytest.approx(pr, abs=1e-10)
    assert float(mean_encoder_uses("add", p, w)) == pytest.approx(tr, rel=1e-9)
    if w >= 2:
        pr, tr, tl = walk_by_propagation(p, 0, w, 1)
        assert float(p_re(p, w)) == pytest.approx(pr, abs=1e-10)
        assert float(mean_encoder_uses("re_success", p, w)) == pytest.approx(tr, rel=1e-9)
        assert float(mean_encoder_uses("re_fail", p, w)) == pytest.approx(tl, rel=1e-9)


@pytest.mark.parametrize("p", [0.3, 0.45, 0.5])
def test_low_p_falls_back_to_markov(p):
    w = 5
    _, tr, tl = walk_by_propagation(p, 0, w, 1)
    assert mean_encoder_uses("re_success", p, w) == pytest.approx(tr, rel=1e-9)
    assert mean_encoder_uses("re_fail", p, w) == pytest.approx(tl, rel=1e-9)
    _, ta, _ = walk_by_propagation(p, -w, 1, 0)
    assert mean_encoder_uses("add", p, w) == pytest.approx(ta, rel=1e-9)


def test_markov_exact_against_propagation():
    prob = WalkProblem(0.6, -3, 4, 1)
    sol = markov_exact(prob)
    pr, tr, tl = walk_by_propagation(0.6, -3, 4, 1)
    assert sol.absorb_prob_right == pytest.approx(pr, abs=1e-12)
    assert sol.mean_steps_right == pytest.approx(tr, rel=1e-10)
    assert sol.mean_steps_left == pytest.approx(tl, rel=1e-10)


def test_markov_exact_zero_probability_wall_is_nan():
    sol = markov_exact(WalkProblem(1.0, -3, 2, 0))
    assert sol.absorb_prob_right == 1.0
    assert sol.mean_steps_right == pytest.approx(2.0)
    assert math.isnan(sol.mean_steps_left)


def test_log_p_add_survives_rounding():
    # p_add rounds to 1.0 here but its logarithm is still resolvable.
    assert float(p_add(0.8, 60)) == 1.0
    value = log_p_add(0.8, 60)
    assert value < 0
    assert value == pytest.approx(math.log1p(-0.25**60) - math.log1p(-0.25**61), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(
    num=st.integers(1, 99),
    left=st.integers(-8, -1),
    right=st.integers(1, 8),
)
def test_absorption_probabilities_complement(num, left, right):
    p = Fraction(num, 100)
    prob = WalkProblem(p, left, right, 0)
    mirror = WalkProblem(1 - p, -right, -left, 0)
    assert absorb_prob(prob) + absorb_prob(mirror) == 1


@settings(max_examples=60, deadline=None)
@given(num=st.integers(51, 99), w=st.integers(1, 15))
def test_p_add_increases_with_width(num, w):
    p = Fraction(num, 100)
    assert p_add(p, w + 1) > p_add(p, w)


@settings(max_examples=60, deadline=None)
@given(num=st.integers(51, 99), w=st.integers(2, 15))
def test_closed_mean_passage_matches_stage_means(num, w):
    p = Fraction(num, 100)
    assert mean_passage_closed(WalkProblem(p, -w, 1, 0)) == mean_encoder_uses("add", p, w)
    assert mean_passage_closed(WalkProblem(p, 0, w, 1)) == mean_encoder_uses("re_success", p, w)
