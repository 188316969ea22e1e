"""Delta derivatives, delta integrals, and the h_k monomials.

Expected values come from independent oracles: forward-difference
algebra on the lattice cases, classical antiderivatives on the dense
cases, the composite-midpoint reference integral, and the literal
nested-integral recursion for h_k.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from tsineq import (
    DomainError,
    MissingDerivative,
    NotDifferentiableHere,
    PointNotInScale,
    TimeScale,
    TsFunction,
    delta_derivative,
    delta_integral,
    forward_jump,
    graininess,
    h_monomial,
    h_monomial_recursive,
    parse_timescale,
    poly_function,
    reference_integral,
    trig_function,
)
from tsineq.calculus import delta_integral_parts

from conftest import discrete_scales, rational_polys


class TestDeltaDerivative:
    def test_forward_difference_on_z(self, zscale, square):
        # (f(4) - f(3)) / 1
        assert delta_derivative(zscale, square, 3, 1) == 7

    def test_second_difference_on_z(self, zscale, square):
        assert delta_derivative(zscale, square, 3, 2) == 2

    def test_quantum_difference_quotient(self, square):
        ts = TimeScale.qscale(2, 0, 4)
        # ((qt)^2 - t^2) / ((q-1) t) = (q+1) t at t=2
        assert delta_derivative(ts, square, 2, 1) == 6

    def test_dense_uses_analytic_derivative(self, rscale, square):
        assert delta_derivative(rscale, square, 0.5, 1) == 1.0
        assert delta_derivative(rscale, square, 0.5, 2) == 2.0

    def test_dense_finite_difference_fallback(self, rscale):
        f = TsFunction(fn=lambda t: t * t * t, label="cube")
        got = delta_derivative(rscale, f, 0.5, 1)
        assert abs(got - 0.75) < 1e-9

    def test_fd_at_segment_edge_raises(self, rscale):
        f = TsFunction(fn=lambda t: t * t, label="bare")
        with pytest.raises(MissingDerivative):
            delta_derivative(rscale, f, 0, 1)

    def test_isolated_maximum(self, zscale, square):
        with pytest.raises(NotDifferentiableHere):
            delta_derivative(zscale, square, 8, 1)

    def test_left_dense_maximum_uses_analytic(self, rscale, square):
        assert delta_derivative(rscale, square, 1, 1) == 2

    def test_exact_rational_quotient(self):
        ts = TimeScale.from_points([0, Fraction(1, 3), 1])
        f = poly_function([0, 0, 1])
        got = delta_derivative(ts, f, 0, 1)
        assert got == Fraction(1, 3)
        assert isinstance(got, Fraction)

    def test_junction_second_derivative_rejected(self):
        # f' jumps at the dense-to-gap junction, so f is not twice
        # delta-differentiable there
        ts = parse_timescale("U(R[0,1];2;3)")
        f = poly_function([0, 0, 1])
        with pytest.raises(NotDifferentiableHere):
            delta_derivative(ts, f, 1, 2)

    def test_junction_matched_function_accepted(self):
        # spliced so the dense-side slope equals the jump quotient at t=1
        ts = parse_timescale("U(R[0,1];2;3)")
        f = poly_function([0, 3])  # slope 3 == (f(2)-f(1))/1
        assert delta_derivative(ts, f, 1, 2) == 0

    def test_second_derivative_scattered_then_dense(self):
        # sigma(1) = 2 starts a dense piece: quotient uses the classical
        # derivative there
        ts = parse_timescale("U(0;1;R[2,3])")
        f = poly_function([0, 0, 1])
        # fD(1) = 3, fD(2) = 4 -> (4 - 3) / 1
        assert delta_derivative(ts, f, 1, 2) == 1

    def test_bad_order(self, zscale, square):
        with pytest.raises(DomainError):
            delta_derivative(zscale, square, 3, 3)

    def test_point_not_in_scale(self, zscale, square):
        with pytest.raises(PointNotInScale):
            delta_derivative(zscale, square, 3.25, 1)


class TestProductRule:
    @given(discrete_scales(), rational_polys(max_degree=3), rational_polys(max_degree=3))
    @settings(max_examples=40, deadline=None)
    def test_product_rule_exact_at_scattered_points(self, ts, f, g):
        fg = TsFunction(fn=lambda t: f.fn(t) * g.fn(t), label="fg")
        for t in ts.scattered_in(ts.min, ts.max):
            if ts.sigma(t) == t:
                continue
            lhs = delta_derivative(ts, fg, t, 1)
            rhs = delta_derivative(ts, f, t, 1) * g.fn(t) + f.fn(ts.sigma(t)) * delta_derivative(
                ts, g, t, 1
            )
            assert lhs == rhs


class TestDeltaIntegral:
    def test_integer_sum(self, zscale):
        assert delta_integral(zscale, poly_function([0, 1]), 0, 3) == 3

    def test_classical_integral(self, rscale):
        assert abs(delta_integral(rscale, poly_function([0, 1]), 0, 1) - 0.5) < 1e-12

    def test_quantum_sum(self):
        ts = TimeScale.qscale(2, 0, 4)
        assert delta_integral(ts, poly_function([0, 1]), 1, 4) == 5

    def test_degenerate_window_is_zero(self, rscale, square):
        assert delta_integral(rscale, square, 0.5, 0.5) == 0

    def test_exactness_on_rational_windows(self):
        ts = TimeScale.from_points([Fraction(1, 2), Fraction(3, 4), 1, 2])
        got = delta_integral(ts, poly_function([0, 0, 1]), Fraction(1, 2), 2)
        # sum of mu * t^2: (1/4)(1/4) + (1/4)(9/16) + 1
        assert got == Fraction(1, 16) + Fraction(9, 64) + 1
        assert isinstance(got, Fraction)

    def test_additivity_hybrid(self):
        ts = parse_timescale("U(R[0,1];2;3)")
        f = poly_function([1, -1, 0, 1])
        whole = delta_integral(ts, f, 0, 3)
        split = delta_integral(ts, f, 0, 1) + delta_integral(ts, f, 1, 3)
        assert abs(whole - split) < 1e-12

    @given(discrete_scales(), rational_polys())
    @settings(max_examples=40, deadline=None)
    def test_additivity_exact_on_discrete(self, ts, f):
        pts = [s[0] for s in ts.segments]
        a, c, b = pts[0], pts[len(pts) // 2], pts[-1]
        assert delta_integral(ts, f, a, b) == delta_integral(ts, f, a, c) + delta_integral(
            ts, f, c, b
        )

    @given(discrete_scales(), rational_polys())
    @settings(max_examples=40, deadline=None)
    def test_triangle_inequality_exact_on_discrete(self, ts, f):
        absf = TsFunction(fn=lambda t: abs(f.fn(t)), label="|f|")
        assert abs(delta_integral(ts, f, ts.min, ts.max)) <= delta_integral(
            ts, absf, ts.min, ts.max
        )

    def test_triangle_inequality_dense(self, rscale):
        f = trig_function(1.0, 7.0, 0.3)
        absf = TsFunction(fn=None, label="|f|", fn_vec=lambda xs: abs(f.fn_vec(xs)))
        lhs = abs(delta_integral(rscale, f, 0, 1))
        rhs = delta_integral_parts(
            rscale, lambda t: abs(f.fn(t)), lambda xs, lo, hi: abs(f.fn_vec(xs)), 0, 1
        )
        assert lhs <= rhs + 1e-10


class TestIntegrationByParts:
    @given(discrete_scales(), rational_polys(max_degree=3), rational_polys(max_degree=3))
    @settings(max_examples=40, deadline=None)
    def test_residual_zero_on_discrete(self, ts, f, g):
        a, b = ts.min, ts.max
        lhs = delta_integral_parts(
            ts,
            lambda t: f.fn(t) * delta_derivative(ts, g, t, 1),
            None,
            a,
            b,
        )
        rhs = (
            f.fn(b) * g.fn(b)
            - f.fn(a) * g.fn(a)
            - delta_integral_parts(
                ts,
                lambda t: delta_derivative(ts, f, t, 1) * g.fn(ts.sigma(t)),
                None,
                a,
                b,
            )
        )
        assert lhs == rhs


class TestReferenceIntegral:
    def test_identical_on_discrete(self, zscale, square):
        for level in (1, 4, 8):
            assert reference_integral(zscale, square, 0, 5, level) == delta_integral(
                zscale, square, 0, 5
            )

    def test_convergence_to_adaptive_value(self, rscale, square):
        adaptive = delta_integral(rscale, square, 0, 1)
        assert abs(reference_integral(rscale, square, 0, 1, 16) - adaptive) < 1e-9

    def test_error_shrinks_with_level(self, rscale):
        f = trig_function(1.0, 3.0, 0.1)
        exact = delta_integral(rscale, f, 0, 1)
        errors = [abs(reference_integral(rscale, f, 0, 1, lvl) - exact) for lvl in (4, 8, 12)]
        assert errors[0] > errors[1] > errors[2]

    def test_additivity_with_aligned_panels(self):
        ts = TimeScale.reals(0, 2)
        f = trig_function(1.0, 2.0, 0.0)
        whole = reference_integral(ts, f, 0, 2, 17)
        split = reference_integral(ts, f, 0, 1, 16) + reference_integral(ts, f, 1, 2, 16)
        assert abs(whole - split) < 1e-12

    def test_level_validation(self, rscale, square):
        with pytest.raises(DomainError):
            reference_integral(rscale, square, 0, 1, 0)


class TestHMonomials:
    def test_h0_is_one(self, zscale):
        assert h_monomial(zscale, 0, 5, 2) == 1

    def test_h1_is_displacement(self):
        for ts in (TimeScale.integers(0, 6), TimeScale.reals(0, 1), TimeScale.qscale(2, 0, 4)):
            pts = ts.notable_points(ts.min, ts.max)[:3]
            for t in pts:
                for s in pts:
                    assert h_monomial(ts, 1, t, s) == t - s

    def test_dense_closed_form(self, rscale):
        assert h_monomial(rscale, 2, 1, 0) == Fraction(1, 2)
        assert h_monomial(rscale, 3, Fraction(3, 4), Fraction(1, 4)) == Fraction(1, 48)

    def test_integer_falling_factorial(self, zscale):
        assert h_monomial(zscale, 2, 3, 0) == 3
        # binom(5, 3)
        assert h_monomial(zscale, 3, 5, 0) == 10

    def test_reversed_arguments_on_z(self, zscale):
        # binom(-2, 2) = 3
        assert h_monomial(zscale, 2, 2, 4) == 3

    def test_closed_forms_match_recursion_exactly(self):
        zs = TimeScale.integers(0, 6)
        rs = TimeScale.reals(0, 1)
        for k in range(1, 5):
            assert h_monomial(zs, k, 5, 1) == h_monomial_recursive(zs, k, 5, 1)
            got = h_monomial(rs, k, Fraction(7, 8), Fraction(1, 8))
            ref = h_monomial_recursive(rs, k, Fraction(7, 8), Fraction(1, 8))
            assert abs(got - ref) < 1e-9

    def test_sweep_matches_recursion_on_quantum(self):
        ts = TimeScale.qscale(2, 0, 4)
        for k in (2, 3):
            assert h_monomial(ts, k, 8, 1) == h_monomial_recursive(ts, k, 8, 1)

    def test_sweep_matches_recursion_on_hybrid(self):
        ts = parse_timescale("U(R[0,1];2;3)")
        got = h_monomial(ts, 2, 3, 0)
        ref = h_monomial_recursive(ts, 2, 3, 0)
        assert abs(got - ref) < 1e-9

    def test_hybrid_sweep_exact_for_rationals(self):
        ts = parse_timescale("U(R[0,1];2;3)")
        got = h_monomial(ts, 2, 3, 0)
        assert isinstance(got, (int, Fraction))

    def test_derivative_recovers_lower_monomial_on_discrete(self, zscale):
        for k in (0, 1, 2, 3):
            hk1 = TsFunction(fn=lambda t, k=k: h_monomial(zscale, k + 1, t, 2), label="h")
            for t in (2, 3, 5):
                assert delta_derivative(zscale, hk1, t, 1) == h_monomial(zscale, k, t, 2)

    def test_k_range_checks(self, zscale):
        with pytest.raises(DomainError):
            h_monomial(zscale, 9, 3, 0)
        with pytest.raises(DomainError):
            h_monomial(zscale, -1, 3, 0)

    def test_points_must_be_in_scale(self, zscale):
        with pytest.raises(PointNotInScale):
            h_monomial(zscale, 2, 3.5, 0)
