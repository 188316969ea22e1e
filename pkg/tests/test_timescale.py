"""Time scale structure: jumps, graininess, classification, descriptors."""

from fractions import Fraction

import pytest
from hypothesis import given, settings

from tsineq import (
    EndpointNotInScale,
    ParseError,
    PointNotInScale,
    TimeScale,
    ValidationError,
    parse_timescale,
)

from conftest import discrete_scales, hybrid_scales


class TestConstruction:
    def test_segments_sorted_and_merged(self):
        ts = TimeScale([(2, 2), (0, 1), (1, 1.5)])
        assert ts.segments == ((0, 1.5), (2, 2))

    def test_touching_point_absorbed_into_interval(self):
        ts = TimeScale([(0, 1), (1, 1)])
        assert ts.segments == ((0, 1),)

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            TimeScale([])

    def test_reversed_segment_rejected(self):
        with pytest.raises(ValidationError):
            TimeScale([(2, 1)])

    def test_min_max(self):
        ts = TimeScale([(0, 1), (3, 3), (5, 6)])
        assert ts.min == 0 and ts.max == 6


class TestJumps:
    def test_integer_sigma_rho(self, zscale):
        assert zscale.sigma(3) == 4
        assert zscale.rho(3) == 2
        assert zscale.mu(3) == 1

    def test_dense_interior_is_its_own_jump(self, rscale):
        assert rscale.sigma(0.5) == 0.5
        assert rscale.rho(0.5) == 0.5
        assert rscale.mu(0.5) == 0

    def test_quantum_sigma(self):
        ts = TimeScale.qscale(2, 0, 4)
        assert ts.sigma(4) == 8
        assert ts.mu(4) == 4

    def test_clamping_at_extremes(self, zscale):
        assert zscale.sigma(8) == 8
        assert zscale.rho(0) == 0

    def test_point_not_in_scale(self, zscale):
        with pytest.raises(PointNotInScale):
            zscale.sigma(3.5)

    def test_exact_membership(self):
        ts = TimeScale([(Fraction(1, 3), Fraction(1, 3)), (1, 2)])
        assert ts.contains(Fraction(1, 3))
        assert not ts.contains(0.3333333333333333)
        assert ts.contains(1.5)


class TestClassification:
    def test_isolated(self, zscale):
        c = zscale.classify(3)
        assert c.classification == "isolated"

    def test_dense(self, rscale):
        assert rscale.classify(0.5).classification == "dense"

    def test_mixed(self):
        ts = parse_timescale("U(R[0,1];2)")
        assert ts.classify(1).classification == "left-dense right-scattered"
        assert ts.classify(2).right_dense  # sigma clamps at the maximum

    @given(discrete_scales())
    @settings(max_examples=40)
    def test_jump_inequalities(self, ts):
        for p in [ts.min, ts.max] + ts.scattered_in(ts.min, ts.max):
            assert ts.sigma(p) >= p
            assert ts.rho(p) <= p
            assert ts.mu(p) >= 0

    @given(hybrid_scales())
    @settings(max_examples=40)
    def test_jump_inequalities_hybrid(self, ts):
        for p in ts.notable_points(ts.min, ts.max):
            assert ts.sigma(p) >= p
            assert ts.rho(p) <= p
            assert ts.mu(p) >= 0


class TestMeasureAtoms:
    def test_pure_discrete(self, zscale):
        atoms = zscale.measure_atoms(0, 3)
        assert atoms == [("pt", 0, 1), ("pt", 1, 1), ("pt", 2, 1)]

    def test_excludes_right_endpoint(self, zscale):
        assert all(a[1] < 3 for a in zscale.measure_atoms(0, 3))

    def test_dense_window(self, rscale):
        assert rscale.measure_atoms(0, 1) == [("iv", 0, 1)]

    def test_hybrid_tiling(self):
        ts = parse_timescale("U(R[0,1];2;3)")
        atoms = ts.measure_atoms(0, 3)
        assert atoms == [("iv", 0, 1), ("pt", 1, 1), ("pt", 2, 1)]

    def test_degenerate_window(self, rscale):
        assert rscale.measure_atoms(0.5, 0.5) == []

    def test_endpoint_must_be_scale_point(self, zscale):
        with pytest.raises(EndpointNotInScale):
            zscale.measure_atoms(0, 3.5)


class TestDescriptors:
    @pytest.mark.parametrize(
        "text",
        ["R[0,1]", "Z[0,5]", "Q(2)[0,4]", "U(R[0,1];2;3)", "U(0;R[1,2];3;4)", "5"],
    )
    def test_roundtrip_label(self, text):
        assert parse_timescale(text).label == text

    def test_rational_values(self):
        ts = parse_timescale("U(1/3;R[1/2,3/4])")
        assert ts.contains(Fraction(1, 3))
        assert ts.contains(Fraction(5, 8))

    def test_q_scale_points(self):
        ts = parse_timescale("Q(3)[0,3]")
        assert [s[0] for s in ts.segments] == [1, 3, 9, 27]

    def test_fractional_q(self):
        ts = parse_timescale("Q(3/2)[0,2]")
        assert ts.contains(Fraction(9, 4))

    @pytest.mark.parametrize("bad", ["", "X[0,1]", "R[0]", "Z[0.5,2]", "Q(1)[0,2]"])
    def test_bad_descriptors(self, bad):
        with pytest.raises((ParseError, ValidationError)):
            parse_timescale(bad)

    def test_z_window_needs_order(self):
        with pytest.raises(ValidationError):
            TimeScale.integers(5, 1)
