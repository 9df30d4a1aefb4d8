from __future__ import annotations

import math
from fractions import Fraction

import pytest

from dss_alloc.analysis import optimal_alpha
from dss_alloc.conditions import (
    classify,
    constant_prob_m1_optimal_alpha,
    fixed_scaled_nonoptimality_threshold,
    fixed_scaled_optimality_threshold,
    fixed_shifted_nonoptimality_threshold,
    fixed_shifted_optimality_threshold,
    optimal_alpha_profile,
    prob_scaled_nonoptimality_threshold,
    prob_scaled_optimality_threshold,
    prob_shifted_nonoptimality_threshold,
    prob_shifted_optimality_threshold,
    scaled_prob_m1_optimal_range,
)
from dss_alloc.errors import ConfigurationError
from dss_alloc.models import FixedSize, Probabilistic, ScaledExp, ShiftedExp, SmallExp


# brute-force oracles: recompute each per-alpha term from its printed formula

def fixed_scaled_opt_term(nodes: int, m: int, alpha: int) -> float:
    return 1 + (nodes - 1) / (alpha * math.comb(m * alpha - 1, alpha - 1)) ** (1 / (alpha - 1))


def prob_shifted_nonopt_term(m: int, dm: float, alpha: int) -> float:
    K = m * alpha - alpha + 1
    kernel = m * (dm * K + alpha * alpha) / (alpha * (dm + 1) * K)
    return 1 - kernel ** (1 / (alpha - 1))


# --- scaled-exponential thresholds -------------------------------------------

def test_fixed_scaled_optimality_reference_value():
    result = fixed_scaled_optimality_threshold(40, 2, 20)
    assert result.value == Fraction(15, 2)
    assert result.witness_alpha == 2
    # terms match the formula recomputed independently
    for alpha, term in result.terms:
        assert float(term) == pytest.approx(fixed_scaled_opt_term(40, 2, alpha), rel=1e-12)


def test_fixed_scaled_nonoptimality_reference_value():
    result = fixed_scaled_nonoptimality_threshold(40, 2, 20)
    assert result.value == 27
    assert result.witness_alpha == 2


def test_prob_scaled_reference_values():
    opt = prob_scaled_optimality_threshold(2, 20)
    assert opt.value == Fraction(5, 6)
    assert opt.witness_alpha == 2
    non = prob_scaled_nonoptimality_threshold(2, 20)
    assert non.value == Fraction(1, 3)
    assert non.witness_alpha == 2


def test_prob_scaled_m1_nonoptimality_is_vacuous():
    # the kernel collapses to 1 for m = 1, so every term is 0
    result = prob_scaled_nonoptimality_threshold(1, 15)
    assert result.value == 0
    assert all(term == 0 for _, term in result.terms)


# --- shifted-exponential thresholds ------------------------------------------

def test_fixed_shifted_optimality_reference_value():
    result = fixed_shifted_optimality_threshold(40, 2, 3.0, 1.0, 20)
    assert result.value == Fraction(79, 14)
    assert result.witness_alpha == 2


def test_fixed_shifted_nonoptimality_reference_value():
    result = fixed_shifted_nonoptimality_threshold(40, 2, 3.0, 1.0, 20)
    assert result.witness_alpha == 4
    assert float(result.value) == pytest.approx(0.775 ** (1 / 3) * 37 + 3, rel=1e-12)
    terms = dict(result.terms)
    assert terms[2] == Fraction(173, 4)  # 13/12 * 39 + 1 stays exact at alpha = 2


def test_prob_shifted_optimality_reference_value():
    result = prob_shifted_optimality_threshold(2, 3.0, 1.0, 20)
    assert result.value == Fraction(37, 42)
    assert result.witness_alpha == 2


def test_prob_shifted_nonoptimality_reference_value():
    result = prob_shifted_nonoptimality_threshold(2, 3.0, 1.0, 20)
    assert result.witness_alpha == 4
    assert float(result.value) == pytest.approx(1 - 0.775 ** (1 / 3), rel=1e-12)
    terms = dict(result.terms)
    assert terms[2] == Fraction(-1, 12)  # negative terms are reported, not clipped
    for alpha, term in result.terms:
        assert float(term) == pytest.approx(prob_shifted_nonopt_term(2, 3.0, alpha), rel=1e-9)


def test_prob_shifted_m1_nonoptimality_can_fire():
    # m = 1 keeps a genuine threshold here: alpha = 2 beats alpha = 1 for small p
    result = prob_shifted_nonoptimality_threshold(1, 3.0, 1.0, 10)
    assert result.value == Fraction(1, 8)
    assert result.witness_alpha == 2
    better = optimal_alpha(Probabilistic(0.05), ShiftedExp(3.0, 1.0), 20, 1)
    assert better.alpha_star > 1


def test_prob_shifted_all_negative_terms_mean_no_witness():
    # delta = 0 collapses to the memoryless model where alpha = 1 always wins
    result = prob_shifted_nonoptimality_threshold(1, 0.0, 1.0, 10)
    assert result.value == 0
    assert result.witness_alpha is None
    assert all(term < 0 for _, term in result.terms)


def test_zero_shift_classifies_as_always_optimal():
    report = classify(Probabilistic(0.05), ShiftedExp(0.0, 1.0), 1, alpha_max=10)
    assert report.verdict == "optimal"


# --- classify ------------------------------------------------------------------

def test_classify_fixed_scaled_verdicts():
    assert classify(FixedSize(7), ScaledExp(1.0), 2, nodes=40).verdict == "optimal"
    assert classify(FixedSize(8), ScaledExp(1.0), 2, nodes=40).verdict == "indeterminate"
    assert classify(FixedSize(27), ScaledExp(1.0), 2, nodes=40).verdict == "non-optimal"
    assert classify(FixedSize(26), ScaledExp(1.0), 2, nodes=40).verdict == "indeterminate"


def test_classify_prob_scaled_verdicts():
    assert classify(Probabilistic(0.9), ScaledExp(1.0), 2, nodes=40).verdict == "optimal"
    assert classify(Probabilistic(0.5), ScaledExp(1.0), 2, nodes=40).verdict == "indeterminate"
    assert classify(Probabilistic(0.3), ScaledExp(1.0), 2, nodes=40).verdict == "non-optimal"


def test_classify_boundaries_are_exact():
    # the alpha = 2 terms are exact rationals; comparisons against them are
    # exact too, so float(1 / 3), which rounds just below the true rational,
    # lands on the non-optimal side rather than being absorbed into the gap
    report = classify(Probabilistic(1 / 3), ScaledExp(1.0), 2, nodes=40)
    assert report.verdict == "non-optimal"
    assert classify(Probabilistic(0.34), ScaledExp(1.0), 2, nodes=40).verdict == "indeterminate"
    assert classify(Probabilistic(0.25), ScaledExp(1.0), 2, nodes=40).verdict == "non-optimal"


def test_classify_requires_nodes_for_fixed_access():
    with pytest.raises(ConfigurationError):
        classify(FixedSize(5), ScaledExp(1.0), 2)


def test_classify_rejects_uncovered_service_models():
    with pytest.raises(ConfigurationError):
        classify(FixedSize(5), SmallExp(1.0), 2, nodes=40)


def test_classify_verdicts_agree_with_exhaustive_search():
    # one certified point of each kind, cross-checked by enumeration
    surely = classify(FixedSize(5), ScaledExp(1.0), 2, nodes=40)
    assert surely.verdict == "optimal"
    assert optimal_alpha(FixedSize(5), ScaledExp(1.0), 40, 2).alpha_star == 1

    surely_not = classify(FixedSize(30), ScaledExp(1.0), 2, nodes=40)
    assert surely_not.verdict == "non-optimal"
    assert optimal_alpha(FixedSize(30), ScaledExp(1.0), 40, 2).alpha_star > 1


# --- m = 1 special cases ---------------------------------------------------------

@pytest.mark.parametrize(
    "p,want",
    [(0.2, (1.5, 4.0)), (0.5, (0.0, 1.0)), (0.1, (4.0, 9.0))],
)
def test_scaled_m1_bracket_values(p, want):
    lo, hi = scaled_prob_m1_optimal_range(p)
    assert lo == pytest.approx(want[0], abs=1e-12)
    assert hi == pytest.approx(want[1], rel=1e-12)


def test_scaled_m1_bracket_rejects_degenerate_p():
    with pytest.raises(ConfigurationError):
        scaled_prob_m1_optimal_range(0.0)
    with pytest.raises(ConfigurationError):
        scaled_prob_m1_optimal_range(1.0)


def test_constant_m1_candidates_follow_the_stationary_point():
    check = constant_prob_m1_optimal_alpha(0.7)
    assert check.candidates == (2, 3)  # p/(1-p) = 7/3 sits between them
    assert check.brute_force_alpha == 1
    assert not check.agrees

    check = constant_prob_m1_optimal_alpha(0.5)
    assert check.candidates == (1,)
    assert check.brute_force_alpha == 1
    assert check.agrees

    check = constant_prob_m1_optimal_alpha(0.8)
    assert check.candidates == (4,)  # exactly 0.8/0.2 = 4 via decimal-exact p
    assert check.brute_force_alpha == 1
    assert not check.agrees


def test_constant_m1_brute_force_is_the_true_argmax():
    # alpha * (1-p)^alpha peaks near -1/ln(1-p); verify against a dense scan
    for p in (0.3, 0.5, 0.7, 0.9):
        check = constant_prob_m1_optimal_alpha(p, alpha_max=100)
        best = max(range(1, 101), key=lambda a: a * (1 - p) ** a)
        assert check.brute_force_alpha == best


# --- conjecture probing -----------------------------------------------------------

def test_optimal_alpha_profile_reports_monotone_growth():
    profile, nondecreasing = optimal_alpha_profile(
        ScaledExp(1.0), 40, 3, "r", [8, 10, 12, 13], "service_rate"
    )
    assert [alpha for _, alpha in profile] == [1, 3, 7, 13]
    assert nondecreasing
