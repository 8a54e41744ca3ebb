import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fogm import (
    DomainError,
    NonEmptyRequired,
    NonFiniteValue,
    Polynomial,
    ScalarObjective,
    check_gradient,
    parse_objective,
    power_four_thirds,
    quadratic,
)


class TestQuadratic:
    def test_gradient_examples(self):
        obj = quadratic(3)
        assert obj.gradient(0) == -6.0
        assert obj.gradient(3) == 0.0
        assert obj.evaluate(5) == 4.0

    def test_metadata(self):
        obj = quadratic(3)
        assert obj.extremum == 3.0
        assert obj.lipschitz_mu == 2.0
        assert obj.strong_lambda == 2.0
        assert obj.lipschitz_order == 1.0
        assert obj.convexity_order == 1.0

    def test_gradient_vanishes_at_extremum(self):
        for c in (-7.5, 0.0, 3.0, 1e4):
            assert abs(quadratic(c).gradient(c)) <= 1e-12


class TestPowerFourThirds:
    def test_gradient_examples(self):
        # hand differentiation of |t|^(4/3): (4/3)|t|^(1/3)*sign(t)
        obj = power_four_thirds(0)
        assert obj.gradient(8) == pytest.approx(8.0 / 3.0, rel=1e-12)
        assert obj.gradient(-8) == pytest.approx(-8.0 / 3.0, rel=1e-12)
        assert power_four_thirds(100).gradient(100) == 0.0

    def test_evaluate_example(self):
        # 8^(4/3) = (8^(1/3))^4 = 2^4 = 16 by hand
        assert power_four_thirds(0).evaluate(-8) == pytest.approx(16.0, rel=1e-12)

    def test_metadata(self):
        obj = power_four_thirds(100)
        assert obj.extremum == 100.0
        assert obj.lipschitz_order == 0.4
        assert obj.lipschitz_mu == 1.0
        assert obj.strong_lambda is None
        assert obj.convexity_order is None


class TestCheckGradient:
    def test_quadratic_points(self):
        assert check_gradient(quadratic(3), [-1.0, 0.0, 7.0]) <= 1e-6

    def test_pow43_points(self):
        assert check_gradient(power_four_thirds(0), [1.0, 10.0]) <= 1e-6

    def test_empty_points(self):
        with pytest.raises(NonEmptyRequired):
            check_gradient(quadratic(0), [])

    def test_non_finite(self):
        bad = ScalarObjective(evaluate=lambda t: math.inf, gradient=lambda t: 0.0)
        with pytest.raises(NonFiniteValue):
            check_gradient(bad, [1.0])

    @pytest.mark.parametrize("factory,c", [(quadratic, 3.0), (quadratic, -5.0),
                                           (power_four_thirds, 0.0), (power_four_thirds, 100.0)])
    def test_corpus_grid(self, factory, c):
        obj = factory(c)
        grid = [c - 10.0 + 0.2 * i for i in range(101)]
        if factory is power_four_thirds:
            grid = [t for t in grid if abs(t - c) >= 1e-3]
        assert check_gradient(obj, grid) <= 1e-6


class TestCorpusInvariants:
    @pytest.mark.parametrize("factory", [quadratic, power_four_thirds])
    def test_gradient_changes_sign_across_extremum(self, factory):
        obj = factory(2.5)
        left = [obj.gradient(2.5 - x) for x in (0.01, 0.1, 1.0, 5.0)]
        right = [obj.gradient(2.5 + x) for x in (0.01, 0.1, 1.0, 5.0)]
        assert all(g < 0 for g in left)
        assert all(g > 0 for g in right)

    @given(
        c=st.floats(-1e3, 1e3, allow_nan=False),
        t=st.floats(-1e3, 1e3, allow_nan=False),
    )
    @settings(max_examples=200)
    def test_translation_equivariance(self, c, t):
        assert quadratic(c).evaluate(t) == quadratic(0).evaluate(t - c)

    def test_objectives_are_pure(self):
        obj = power_four_thirds(7)
        assert obj.evaluate(1.234) == obj.evaluate(1.234)
        assert obj.gradient(1.234) == obj.gradient(1.234)

    @pytest.mark.parametrize("factory", [quadratic, power_four_thirds])
    def test_gradient_nondecreasing_on_grid(self, factory):
        obj = factory(-1.5)
        grads = [obj.gradient(-1.5 - 10 + 0.1 * i) for i in range(201)]
        assert all(b >= a for a, b in zip(grads, grads[1:]))


class TestParseObjective:
    def test_quadratic_id(self):
        obj = parse_objective("quadratic:c=3")
        assert obj.extremum == 3.0
        assert obj.gradient(0) == -6.0

    def test_pow43_id(self):
        assert parse_objective("pow43:c=100").extremum == 100.0

    def test_default_parameter(self):
        assert parse_objective("quadratic").extremum == 0.0

    def test_whitespace_and_float_values(self):
        assert parse_objective("quadratic: c = -2.5 ").extremum == -2.5

    def test_unknown_name(self):
        with pytest.raises(DomainError):
            parse_objective("rosenbrock:c=1")

    def test_bad_value(self):
        with pytest.raises(DomainError):
            parse_objective("quadratic:c=zero")

    def test_unknown_key(self):
        with pytest.raises(DomainError):
            parse_objective("quadratic:scale=2")

    def test_malformed_pair(self):
        with pytest.raises(DomainError):
            parse_objective("quadratic:c")


class TestPolynomial:
    def test_degree_drops_by_one(self):
        p = Polynomial((1.0, 2.0, 3.0, 4.0))  # degree 3
        assert p.degree == 3
        assert p.derivative().degree == 2
        assert p.derivative(3).degree == 0

    def test_exact_derivatives(self):
        p = Polynomial((0.0, 0.0, 0.0, 2.0))  # 2 t^3
        assert p.derivative(1).evaluate(2.0) == 24.0  # 6 t^2
        assert p.derivative(2).evaluate(2.0) == 24.0  # 12 t
        assert p.derivative(3).evaluate(2.0) == 12.0
        assert p.derivative(4).evaluate(2.0) == 0.0

    def test_zero_polynomial(self):
        p = Polynomial(())
        assert p.evaluate(3.0) == 0.0
        assert p.degree == 0

    def test_horner_evaluation(self):
        p = Polynomial((1.0, -2.0, 0.5))
        t = 1.7
        assert p.evaluate(t) == pytest.approx(1.0 - 2.0 * t + 0.5 * t * t, rel=1e-15)
