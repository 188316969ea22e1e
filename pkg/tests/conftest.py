"""Shared fixtures and hypothesis strategies."""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tsineq import TimeScale, poly_function


@pytest.fixture
def zscale():
    return TimeScale.integers(0, 8)


@pytest.fixture
def rscale():
    return TimeScale.reals(0, 1)


@pytest.fixture
def q2scale():
    return TimeScale.qscale(2, 0, 5)


@pytest.fixture
def square():
    return poly_function([0, 0, 1])


def rationals(den=8, lo=-16, hi=16):
    """Small exact rationals with denominator dividing ``den``."""
    return st.builds(
        lambda n: Fraction(n, den), st.integers(min_value=lo * den, max_value=hi * den)
    ).map(lambda f: int(f) if f.denominator == 1 else f)


@st.composite
def discrete_scales(draw, min_points=3, max_points=9):
    """Purely scattered scales with exact rational points, gaps >= 1/4."""
    count = draw(st.integers(min_value=min_points, max_value=max_points))
    start = draw(rationals())
    gaps = draw(
        st.lists(
            st.integers(min_value=1, max_value=8),
            min_size=count - 1,
            max_size=count - 1,
        )
    )
    points = [start]
    for g in gaps:
        points.append(points[-1] + Fraction(g, 4))
    points = [int(p) if isinstance(p, Fraction) and p.denominator == 1 else p for p in points]
    return TimeScale.from_points(points)


@st.composite
def hybrid_scales(draw, max_scattered=3):
    """One dense interval with scattered rational points on both sides."""
    lo = draw(rationals(den=4, lo=-4, hi=4))
    length = Fraction(draw(st.integers(min_value=1, max_value=8)), 4)
    segments = [(lo, lo + length)]
    t = lo
    for _ in range(draw(st.integers(min_value=0, max_value=max_scattered))):
        t = t - Fraction(draw(st.integers(min_value=1, max_value=4)), 4)
        segments.append((t, t))
    t = lo + length
    for _ in range(draw(st.integers(min_value=0, max_value=max_scattered))):
        t = t + Fraction(draw(st.integers(min_value=1, max_value=4)), 4)
        segments.append((t, t))
    return TimeScale(segments)


@st.composite
def rational_polys(draw, max_degree=4):
    coeffs = draw(
        st.lists(
            st.integers(min_value=-4, max_value=4),
            min_size=1,
            max_size=max_degree + 1,
        )
    )
    return poly_function(coeffs)
