"""Delta calculus on finitely described time scales.

The delta derivative at a right-scattered point is the forward difference
quotient ``(f(sigma(t)) - f(t)) / mu(t)``; at a right-dense point it is
the classical derivative (analytic when supplied, otherwise a central
finite difference confined to the containing dense segment).  The delta
integral over ``[a, b)`` is the sum of ``mu(t) f(t)`` over right-scattered
points plus classical integrals over dense pieces.

Scattered sums use whatever arithmetic the inputs carry: feed Fractions
and the result is an exact Fraction.  Dense pieces always go through
float quadrature.

The generalized monomials ``h_k(t, s)`` (``h_0 = 1``,
``h_{k+1}(t, s)`` the integral of ``h_k(., s)`` from s to t) are computed
by an exact piecewise-polynomial sweep along the scale: within a dense
segment ``h_k(., s)`` is a degree-k polynomial which integrates in closed
form, and every scattered point contributes a jump term.  The sweep is
therefore exact for rational inputs on any scale, with closed-form fast
paths on purely dense and purely unit-step windows.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import (
    DomainError,
    MissingDerivative,
    NotDifferentiableHere,
    PointNotInScale,
)
from .exact import exact_div
from .functions import TsFunction
from .quadrature import TOL_QUAD, integrate_dense
from .timescale import TimeScale

H_FD_FACTOR = 1e-5
K_MAX = 8


def forward_jump(ts: TimeScale, t) -> object:
    """sigma(t); sigma(max) = max by the empty-inf convention."""
    return ts.sigma(t)


def backward_jump(ts: TimeScale, t) -> object:
    """rho(t); rho(min) = min."""
    return ts.rho(t)


def graininess(ts: TimeScale, t) -> object:
    """mu(t) = sigma(t) - t."""
    return ts.mu(t)


# ---------------------------------------------------------------------------
# delta derivative
# ---------------------------------------------------------------------------

def _classical_derivative(ts: TimeScale, f: TsFunction, t, seg) -> object:
    if f.d1 is not None:
        return f.d1(t)
    lo, hi = seg
    h = H_FD_FACTOR * float(hi - lo)
    h = min(h, float(t - lo), float(hi - t))
    if h <= 0.0:
        raise MissingDerivative(
            f"no analytic derivative for {f.label} and a central stencil at {t} "
            f"would leave the dense segment [{lo}, {hi}]"
        )
    tf = float(t)
    return (f.fn(tf + h) - f.fn(tf - h)) / (2.0 * h)


def _classical_second(ts: TimeScale, f: TsFunction, t, seg) -> object:
    if f.d2 is not None:
        return f.d2(t)
    lo, hi = seg
    if f.d1 is not None:
        h = H_FD_FACTOR * float(hi - lo)
        h = min(h, float(t - lo), float(hi - t))
        if h > 0.0:
            tf = float(t)
            return (f.d1(tf + h) - f.d1(tf - h)) / (2.0 * h)
        raise MissingDerivative(
            f"stencil for d2 of {f.label} at {t} leaves the segment [{lo}, {hi}]"
        )
    # second difference directly on f; h sized for the h^2 denominator
    h = max(1.22e-4 * float(hi - lo), 1e-8)
    h = min(h, float(t - lo), float(hi - t))
    if h <= 0.0:
        raise MissingDerivative(
            f"stencil for d2 of {f.label} at {t} leaves the segment [{lo}, {hi}]"
        )
    tf = float(t)
    return (f.fn(tf + h) - 2.0 * f.fn(tf) + f.fn(tf - h)) / (h * h)


def _left_classical_d1(f: TsFunction, t, seg):
    """Left-sided classical derivative of f at the right edge of a dense segment."""
    if f.d1 is not None:
        return f.d1(t)
    lo, hi = seg
    h = H_FD_FACTOR * float(hi - lo)
    h = min(h, float(t - lo) / 2)
    if h <= 0.0:
        raise MissingDerivative(
            f"no analytic derivative for {f.label}; cannot take a left-sided "
            f"stencil at {t} inside [{lo}, {hi}]"
        )
    tf = float(t)
    return (3.0 * f.fn(tf) - 4.0 * f.fn(tf - h) + f.fn(tf - 2.0 * h)) / (2.0 * h)


def _check_junction(ts: TimeScale, f: TsFunction, t, quotient, what: str) -> None:
    """A delta-differentiable function is continuous, so the forward
    quotient at a left-dense right-scattered point only defines a second
    derivative when f^Delta's dense-side limit matches its value there."""
    i = ts._segment_index(t)
    lo, hi = ts.segments[i]
    if lo == hi or t == lo:
        return  # isolated or left-scattered: scale-continuity is automatic
    left = _left_classical_d1(f, t, (lo, hi))
    if isinstance(left, (int, Fraction)) and isinstance(quotient, (int, Fraction)):
        mismatch = left != quotient
    else:
        scale = max(1.0, abs(float(left)), abs(float(quotient)))
        mismatch = abs(float(left) - float(quotient)) > 1e-8 * scale
    if mismatch:
        raise NotDifferentiableHere(
            f"{what} is discontinuous at the dense-to-gap junction {t} "
            f"(dense-side limit {left}, jump quotient {quotient}); "
            f"no second delta derivative exists there"
        )


def delta_derivative(ts: TimeScale, f: TsFunction, t, order: int = 1) -> object:
    """Delta derivative of order 1 or 2 at t.

    Raises :class:`NotDifferentiableHere` where the derivative is
    structurally undefined (isolated maximum, or a second derivative at a
    dense-to-gap junction where the first derivative jumps) and
    :class:`MissingDerivative` when a dense-segment derivative would need
    a stencil outside the scale.
    """
    if order not in (1, 2):
        raise DomainError(f"order must be 1 or 2, got {order}")
    i = ts._segment_index(t)
    if i < 0:
        raise PointNotInScale(f"{t} is not a point of {ts.label}")
    st = ts.sigma(t)
    if order == 2:
        if st > t:
            g_t = delta_derivative(ts, f, t, 1)
            _check_junction(ts, f, t, g_t, f"the delta derivative of {f.label}")
            g_st = delta_derivative(ts, f, st, 1)
            return exact_div(g_st - g_t, st - t)
        seg = ts.segments[i]
        if seg[0] == seg[1]:
            raise NotDifferentiableHere(
                f"{t} is an isolated maximum of {ts.label}; no right neighborhood"
            )
        return _classical_second(ts, f, t, seg)
    if st > t:
        return exact_div(f.fn(st) - f.fn(t), st - t)
    seg = ts.segments[i]
    if seg[0] == seg[1]:
        # sigma clamps at the top of the scale; an isolated max has no
        # right neighborhood and is outside the differentiability domain
        raise NotDifferentiableHere(
            f"{t} is an isolated maximum of {ts.label}; no right neighborhood"
        )
    return _classical_derivative(ts, f, t, seg)


# ---------------------------------------------------------------------------
# delta integral
# ---------------------------------------------------------------------------

def delta_integral_parts(
    ts: TimeScale,
    point_fn: Callable,
    dense_fn: Callable,
    a,
    b,
    breakpoints: Iterable = (),
    rel_tol: float = TOL_QUAD,
) -> object:
    """Workhorse integral with separate scattered/dense evaluators.

    ``point_fn`` is called at every right-scattered point of [a, b) and
    may return exact numbers; ``dense_fn(xs, lo, hi)`` must be vectorized
    over float node arrays and receives the bounds of the dense piece it
    is sampling (so finite-difference stencils can stay inside).  If the
    window has no dense part the result keeps the exact arithmetic of
    ``point_fn``.
    """
    atoms = ts.measure_atoms(a, b)
    scattered = 0
    dense = 0.0
    has_dense = False
    for atom in atoms:
        if atom[0] == "pt":
            _, t, mu = atom
            scattered = scattered + mu * point_fn(t)
        else:
            _, lo, hi = atom
            lo_f, hi_f = float(lo), float(hi)
            dense += integrate_dense(
                lambda xs: dense_fn(xs, lo_f, hi_f),
                lo_f,
                hi_f,
                breakpoints=breakpoints,
                rel_tol=rel_tol,
            )
            has_dense = True
    if not has_dense:
        return scattered
    return float(scattered) + dense


def delta_integral(ts: TimeScale, f: TsFunction, a, b, rel_tol: float = TOL_QUAD) -> object:
    """Delta integral of f over [a, b], a <= b, both scale points."""
    return delta_integral_parts(
        ts, f.fn, lambda xs, lo, hi: f.fn_vec(xs), a, b, rel_tol=rel_tol
    )


# ---------------------------------------------------------------------------
# generalized monomials h_k
# ---------------------------------------------------------------------------

def _poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_antideriv(coeffs):
    return [0] + [exact_div(c, i + 1) for i, c in enumerate(coeffs)]


def _h_closed_form(ts: TimeScale, k: int, t, s, lo, hi):
    i = ts._segment_index(lo)
    j = ts._segment_index(hi)
    if i == j and ts.segments[i][0] < ts.segments[i][1]:
        # purely dense span: (t - s)^k / k!
        return exact_div((t - s) ** k, math.factorial(k))
    atoms = ts.measure_atoms(lo, hi)
    if all(a[0] == "pt" and a[2] == 1 for a in atoms) and len(atoms) == hi - lo:
        # unit-step lattice between s and t: falling factorial / k!
        d = t - s
        num = 1
        for off in range(k):
            num = num * (d - off)
        return exact_div(num, math.factorial(k))
    return None


def _h_sweep(ts: TimeScale, k: int, t, s, lo, hi):
    atoms = ts.measure_atoms(lo, hi)
    n = len(atoms)
    vals = [1] * (n + 1)  # h_0 at the n+1 chain nodes (atom starts, then hi)
    polys: list = [[1] if a[0] == "iv" else None for a in atoms]
    rightward = s == lo
    for _ in range(k):
        new_vals = [0] * (n + 1)
        new_polys: list = [None] * n
        if rightward:
            acc = 0
            new_vals[0] = acc
            for i, atom in enumerate(atoms):
                if atom[0] == "pt":
                    acc = acc + atom[2] * vals[i]
                else:
                    _, plo, phi = atom
                    anti = _poly_antideriv(polys[i])
                    const = acc - _poly_eval(anti, plo)
                    new_polys[i] = [anti[0] + const] + anti[1:]
                    acc = _poly_eval(anti, phi) + const
                new_vals[i + 1] = acc
        else:
            acc = 0
            new_vals[n] = acc
            for i in range(n - 1, -1, -1):
                atom = atoms[i]
                if atom[0] == "pt":
                    acc = acc - atom[2] * vals[i]
                else:
                    _, plo, phi = atom
                    anti = _poly_antideriv(polys[i])
                    const = acc - _poly_eval(anti, phi)
                    new_polys[i] = [anti[0] + const] + anti[1:]
                    acc = _poly_eval(anti, plo) + const
                new_vals[i] = acc
        vals, polys = new_vals, new_polys
    return vals[n] if rightward else vals[0]


def h_monomial(ts: TimeScale, k: int, t, s) -> object:
    """Generalized monomial h_k(t, s) on the scale.

    Defined by h_0 = 1 and h_{k+1}(t, s) = integral of h_k(., s) from s
    to t; valid for either ordering of t and s.  Exact for rational
    inputs (the sweep never uses numeric quadrature).
    """
    if not isinstance(k, int) or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if k > K_MAX:
        raise DomainError(f"k = {k} exceeds the supported maximum {K_MAX}")
    if not ts.contains(t):
        raise PointNotInScale(f"{t} is not a point of {ts.label}")
    if not ts.contains(s):
        raise PointNotInScale(f"{s} is not a point of {ts.label}")
    if k == 0:
        return 1
    if t == s:
        return 0
    lo, hi = (t, s) if s > t else (s, t)
    closed = _h_closed_form(ts, k, t, s, lo, hi)
    if closed is not None:
        return closed
    return _h_sweep(ts, k, t, s, lo, hi)


def h_monomial_recursive(ts: TimeScale, k: int, t, s, rel_tol: float = TOL_QUAD) -> object:
    """Reference evaluation of h_k by literal nested delta integration.

    Exponentially slower than :func:`h_monomial`; used in tests to
    certify the sweep and the closed forms against the defining
    recursion.
    """
    if k == 0:
        return 1

    def level(u):
        return h_monomial_recursive(ts, k - 1, u, s, rel_tol=rel_tol)

    def level_vec(xs, lo, hi):
        return [float(level(x)) for x in xs]

    sign = 1
    a, b = s, t
    if t < s:
        sign, a, b = -1, t, s
    value = delta_integral_parts(ts, level, level_vec, a, b, rel_tol=rel_tol)
    return sign * value
