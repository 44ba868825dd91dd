import math
from fractions import Fraction

import numpy as np
import pytest

from poientropy.bounds import (
    ConditionViolated,
    MomentSummary,
    NoApplicableBound,
    a_of_lambda,
    b_of_lambda,
    best_independent_bound,
    entropy_bound_general,
    entropy_bound_independent,
    entropy_bound_independent_sharp,
    g_of_p,
)
from poientropy.chenstein import ChenSteinCoefficients, coefficients_independent, tv_upper_agg
from poientropy.exact import exact_distribution, pmf_entropy
from poientropy.logspace import LogScalar
from poientropy.poisson import poisson_entropy_series

BRACKET_CONST = (6.0 * math.log(2.0 * math.pi) + 1.0) / 12.0

# Independent mpmath recomputation (40 digits) of the first arithmetic-system
# case: lam = a n (n+1), theta = 2a(2n+1)/3 with a = 1e-10, n = 1e8.
EX1_COROLLARY_EPS = 0.5878672480574357
EX1_PROPOSITION_EPS = 0.2047351801396994
EX1_G = 0.008844365973021746
EX1_POINT = 8.224326143783586
EX1_REL = 0.012446927356744598


def _ex1_moments():
    lam = 1e-10 * (10**8 * (10**8 + 1))
    theta = 2e-10 * (2 * 10**8 + 1) / 3.0
    return MomentSummary(lam=lam, sum_p_squared=theta * lam, m=10**8)


def _coeffs(b1=0.0, b2=0.0, b3=0.0, lam=1.0, m=None, log2_m=None):
    return ChenSteinCoefficients(
        b1=LogScalar.from_float(b1),
        b2=LogScalar.from_float(b2),
        b3=LogScalar.from_float(b3),
        lam=LogScalar.from_float(lam),
        m=m,
        log2_m=log2_m,
    )


class TestAOfLambda:
    def test_equals_twice_unclamped_agg_exactly(self):
        for probs in ([0.01] * 10, [0.3, 0.2], [0.9, 0.9, 0.9]):
            coeffs = coefficients_independent(probs)
            assert a_of_lambda(coeffs) == 2.0 * tv_upper_agg(coeffs)

    def test_independent_reference(self):
        coeffs = coefficients_independent([0.01] * 10)
        expected = 2.0 * (-math.expm1(-0.1) / 0.1) * 1e-3
        assert a_of_lambda(coeffs) == pytest.approx(expected, rel=1e-12)

    def test_orientation_model_value(self):
        b1 = Fraction(31 * 4060**2, 2**30)
        b2 = Fraction(30 * 406 * 3654, 2**28)
        coeffs = _coeffs(b1=float(b1), b2=float(b2), lam=4060.0, log2_m=30.0)
        assert a_of_lambda(coeffs) == pytest.approx(
            float(2 * (b1 + b2) / 4060), rel=1e-12
        )
        assert a_of_lambda(coeffs) == pytest.approx(3.161e-4, rel=1e-3)

    def test_zero_coefficients(self):
        assert a_of_lambda(_coeffs(lam=2.0, m=5)) == 0.0


class TestBOfLambda:
    def test_boundary_case_lam_1_m_2(self):
        # Exponent is -(1 + ln(1/e)) = 0, so b is the bare bracket
        # 1 + 1 + (6 ln(2 pi) + 1)/12.
        expected = 2.0 + BRACKET_CONST
        assert float(b_of_lambda(1.0, m=2)) == pytest.approx(expected, rel=1e-12)

    def test_log_value_retained_under_underflow(self):
        b = b_of_lambda(1e6, m=10**8)
        assert float(b) == 0.0
        m1 = 10**8 - 1
        expected_log = (
            math.log(1e12 + BRACKET_CONST)
            - (1e6 + m1 * (math.log(m1) - math.log(1e6) - 1.0))
        )
        assert b.logmag == pytest.approx(expected_log, rel=1e-12)

    def test_log2_m_form(self):
        b = b_of_lambda(4060.0, log2_m=30.0)
        m1 = 2.0**30 - 1.0
        expected_log = math.log(4060.0**2 + BRACKET_CONST) - (
            4060.0 + m1 * (math.log(m1) - math.log(4060.0) - 1.0)
        )
        assert float(b) == 0.0
        assert b.logmag == pytest.approx(expected_log, rel=1e-12)

    def test_positive_exponent_returns_large_value(self):
        # m - 1 < lam e flips the exponent sign; the value is huge but real.
        b = b_of_lambda(10.0, m=3)
        expected = (100.0 + BRACKET_CONST) * math.exp(
            -(10.0 + 2.0 * (math.log(2.0) - math.log(10.0) - 1.0))
        )
        assert float(b) == pytest.approx(expected, rel=1e-12)

    def test_small_mean_includes_positive_part_term(self):
        b = b_of_lambda(0.5, m=4)
        bracket = 0.5 * (1.0 - math.log(0.5)) + 0.25 + BRACKET_CONST
        expected = bracket * math.exp(
            -(0.5 + 3.0 * (math.log(3.0) - math.log(0.5) - 1.0))
        )
        assert float(b) == pytest.approx(expected, rel=1e-12)

    def test_huge_log2_m_underflows_to_zero_gracefully(self):
        b = b_of_lambda(LogScalar.from_log(800.0), log2_m=2000.0)
        assert b.sign == 0

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            b_of_lambda(1.0)
        with pytest.raises(ValueError):
            b_of_lambda(1.0, m=4, log2_m=2.0)
        with pytest.raises(ValueError):
            b_of_lambda(1.0, m=1)
        with pytest.raises(ValueError):
            b_of_lambda(0.0, m=4)


class TestGeneralBound:
    @pytest.mark.parametrize(
        "n,k,expected_rel",
        [(30, 27, 0.16e-2), (50, 48, 1.5e-9), (100, 95, 1.6e-19)],
    )
    def test_orientation_rows_match_reference(self, n, k, expected_rel):
        from poientropy.models import hypercube_coefficients

        report = entropy_bound_general(hypercube_coefficients(n, k))
        assert report.relative_error == pytest.approx(expected_rel, rel=0.05)

    def test_report_structure(self):
        coeffs = coefficients_independent([0.01] * 50)
        report = entropy_bound_general(coeffs)
        assert report.theorem_id == "theorem4"
        assert report.convention == "two-sided-centered"
        lo, hi = report.interval
        assert hi - lo == pytest.approx(2.0 * report.epsilon, rel=1e-12)
        assert lo <= report.point_estimate <= hi
        assert report.point_estimate == report.h_poisson.nats
        assert report.epsilon == pytest.approx(report.a_term + report.b_term, rel=1e-12)
        assert report.relative_error == pytest.approx(
            report.epsilon / report.h_poisson.nats, rel=1e-12
        )
        assert len(report.conditions) == 2
        assert all(c.satisfied for c in report.conditions)

    def test_a_condition_violation(self):
        with pytest.raises(ConditionViolated, match="a\\(lambda\\)"):
            entropy_bound_general(_coeffs(b1=1.0, lam=1.0, m=100))

    def test_lambda_condition_violation(self):
        with pytest.raises(ConditionViolated, match="lambda"):
            entropy_bound_general(_coeffs(b1=1e-4, lam=5.0, m=3))

    def test_condition_error_carries_actual_values(self):
        try:
            entropy_bound_general(_coeffs(b1=1.0, lam=1.0, m=100))
        except ConditionViolated as exc:
            failed = [c for c in exc.checks if not c.satisfied]
            assert failed[0].name == "a(lambda)"
            assert failed[0].actual == pytest.approx(
                2.0 * -math.expm1(-1.0), rel=1e-12
            )
        else:
            pytest.fail("expected ConditionViolated")

    def test_monotone_in_each_coefficient(self):
        # a ln((m+2)/a) increases in a below 1/2, so epsilon grows with each b.
        base = dict(b1=1e-3, b2=5e-4, b3=1e-4, lam=100.0, m=10**6)
        eps0 = entropy_bound_general(_coeffs(**base)).epsilon
        for name in ("b1", "b2", "b3"):
            grown = dict(base)
            grown[name] *= 4.0
            assert entropy_bound_general(_coeffs(**grown)).epsilon > eps0

    def test_extreme_range_mean_beyond_float(self):
        # lam = e^800 with m = 2^2000: everything must stay finite in logs.
        coeffs = ChenSteinCoefficients(
            b1=LogScalar.from_log(-2000.0),
            b2=LogScalar.zero(),
            b3=LogScalar.zero(),
            lam=LogScalar.from_log(800.0),
            log2_m=2000.0,
        )
        report = entropy_bound_general(coeffs)
        expected_h = 0.5 * (math.log(2.0 * math.pi) + 1.0 + 800.0)
        assert report.h_poisson.nats == pytest.approx(expected_h, rel=1e-12)
        assert report.epsilon == 0.0
        assert report.epsilon_log == pytest.approx(
            math.log(2.0) - 2800.0 + math.log(2000.0 * math.log(2.0) + 2800.0),
            rel=1e-6,
        )


class TestIndependentBound:
    def test_reference_case(self):
        report = entropy_bound_independent(_ex1_moments())
        assert report.theorem_id == "corollary1"
        assert report.epsilon == pytest.approx(EX1_COROLLARY_EPS, rel=1e-12)
        assert report.epsilon == pytest.approx(0.588, abs=2e-3)
        assert report.convention == "one-sided-midpoint"
        lo, hi = report.interval
        assert hi == report.h_poisson.nats
        assert hi - lo == pytest.approx(report.epsilon, rel=1e-12)

    def test_zero_second_moment_leaves_only_truncation_term(self):
        moments = MomentSummary(lam=1.0, sum_p_squared=0.0, m=10)
        report = entropy_bound_independent(moments)
        assert report.a_term == 0.0
        assert report.epsilon == pytest.approx(float(b_of_lambda(1.0, m=10)), rel=1e-12)

    def test_condition_violation(self):
        moments = MomentSummary(lam=2.0, sum_p_squared=1.8, m=3)
        with pytest.raises(ConditionViolated, match="tv_factor_sum_p2"):
            entropy_bound_independent(moments)

    def test_contains_exact_gap_for_small_system(self):
        rng = np.random.default_rng(17)
        probs = rng.uniform(0.0, 0.05, 50)
        moments = MomentSummary.from_probs(probs)
        report = entropy_bound_independent(moments)
        h_z = poisson_entropy_series(moments.lam, tol=1e-10).nats
        h_w = pmf_entropy(exact_distribution(probs)).nats
        assert 0.0 <= h_z - h_w <= report.epsilon + 1e-9


class TestGOfP:
    def test_reference_case(self):
        assert g_of_p(_ex1_moments()) == pytest.approx(EX1_G, rel=1e-12)

    def test_small_mean_uses_tv_branch(self):
        moments = MomentSummary(lam=0.1, sum_p_squared=0.005, m=10)
        expected = 2.0 * 0.05 * -math.expm1(-0.1)
        assert g_of_p(moments) == pytest.approx(expected, rel=1e-12)

    def test_improvement_factor_limit(self):
        # theta -> 0, lam -> inf: g / (2 theta (1 - e^-lam)) -> 3/(4e).
        moments = MomentSummary(lam=1e6, sum_p_squared=1e6 * 1e-8, m=10**9)
        ratio = g_of_p(moments) / (2.0 * moments.theta)
        assert ratio == pytest.approx(3.0 / (4.0 * math.e), rel=1e-3)

    def test_domain_error_at_theta_one(self):
        moments = MomentSummary(lam=1.0, sum_p_squared=1.0, m=2)
        with pytest.raises(ValueError, match="theta"):
            g_of_p(moments)


class TestIndependentSharpBound:
    def test_reference_case(self):
        report = entropy_bound_independent_sharp(_ex1_moments())
        assert report.theorem_id == "proposition1"
        assert report.epsilon == pytest.approx(EX1_PROPOSITION_EPS, rel=1e-12)
        assert report.point_estimate == pytest.approx(EX1_POINT, rel=1e-12)
        assert report.relative_error == pytest.approx(EX1_REL, rel=1e-12)
        assert report.epsilon == pytest.approx(0.205, abs=2e-3)
        assert report.point_estimate == pytest.approx(8.224, abs=2e-3)

    def test_zero_second_moment_leaves_only_truncation_term(self):
        moments = MomentSummary(lam=1.0, sum_p_squared=0.0, m=10)
        report = entropy_bound_independent_sharp(moments)
        assert report.epsilon == pytest.approx(float(b_of_lambda(1.0, m=10)), rel=1e-12)

    def test_g_condition_violation(self):
        # theta = 0.9 at moderate mean saturates the min at 1 - e^-lam, and
        # g = 2 * 0.9 * (1 - e^-10) > 1/2.
        moments = MomentSummary(lam=10.0, sum_p_squared=9.0, m=100)
        with pytest.raises(ConditionViolated, match="g"):
            entropy_bound_independent_sharp(moments)

    def test_no_improvement_when_min_saturates(self):
        # Wherever min(...) picks 1 - e^-lam, g equals the plain coefficient
        # 2c and the two raw main terms coincide; the sharp rule never loses.
        for lam, theta, m in ((10.0, 0.5, 10**6), (0.2, 0.9, 100)):
            moments = MomentSummary(lam=lam, sum_p_squared=theta * lam, m=m)
            g = g_of_p(moments)
            two_c = 2.0 * theta * -math.expm1(-lam)
            log_m2 = math.log(m + 2)
            prop_term = g * math.log((m + 2) / g)
            cor_term = two_c * (log_m2 - math.log(two_c))
            assert prop_term >= cor_term - 1e-12 * max(1.0, cor_term)


class TestBestIndependentBound:
    def test_sharp_rule_wins_reference_case(self):
        report = best_independent_bound(_ex1_moments())
        assert report.theorem_id == "proposition1"
        assert report.epsilon == pytest.approx(EX1_PROPOSITION_EPS, rel=1e-12)

    def test_tie_goes_to_plain_rule_at_high_theta(self):
        moments = MomentSummary(lam=0.2, sum_p_squared=0.18, m=10)
        report = best_independent_bound(moments)
        assert report.theorem_id == "corollary1"

    def test_no_applicable_bound_lists_all_failures(self):
        moments = MomentSummary.from_probs([0.9, 0.9])
        with pytest.raises(NoApplicableBound) as excinfo:
            best_independent_bound(moments)
        failed = {c.name for c in excinfo.value.checks if not c.satisfied}
        assert "tv_factor_sum_p2" in failed
        assert "lambda" in failed
        assert "g" in failed

    def test_crossover_regression(self):
        # At lam = 1e6, m = 1e8 the sharpened rule strictly improves for
        # small theta; for theta = 0.9 its coefficient saturates to the plain
        # one (equal raw bounds) and both rules' hypotheses fail anyway.
        sharp = entropy_bound_independent_sharp(_ex1_moments())
        plain = entropy_bound_independent(_ex1_moments())
        assert sharp.epsilon < plain.epsilon

        moments_high = MomentSummary(lam=1e6, sum_p_squared=0.9e6, m=10**8)
        with pytest.raises(ConditionViolated):
            entropy_bound_independent(moments_high)
        with pytest.raises(ConditionViolated):
            entropy_bound_independent_sharp(moments_high)
        g = g_of_p(moments_high)
        assert g == pytest.approx(2.0 * 0.9 * -math.expm1(-1e6), rel=1e-12)


class TestCertificateSoundness:
    def test_sign_and_containment_on_random_systems(self):
        rng = np.random.default_rng(23)
        for _ in range(60):
            n = int(rng.integers(20, 200))
            probs = rng.uniform(0.0, 0.1, n)
            moments = MomentSummary.from_probs(probs)
            h_z = poisson_entropy_series(moments.lam, tol=1e-10).nats
            h_w = pmf_entropy(exact_distribution(probs)).nats
            gap = h_z - h_w
            assert gap >= -1e-9  # Poisson maximises entropy at fixed mean
            best = best_independent_bound(moments)
            assert gap <= best.epsilon + 1e-9
            general = entropy_bound_general(coefficients_independent(probs))
            assert abs(gap) <= general.epsilon + 1e-9
