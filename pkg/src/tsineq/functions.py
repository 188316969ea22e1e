"""Evaluable functions on time scales.

A :class:`TsFunction` bundles a scalar evaluator with optional analytic
first/second classical derivatives (used on dense segments) and optional
vectorized evaluators for the quadrature engine.  Scalar evaluation is
exact-arithmetic friendly: polynomial families fed Fractions return
Fractions, which is what makes purely discrete computations exact.

Families provided here:

* ``poly``   -- dense or discrete, analytic derivatives, exact sup|f''|;
* ``trig``   -- a*sin(w*t + p), analytic derivatives, exact sup of any
  derivative via critical-point enumeration;
* ``table``  -- explicit point -> value map for discrete scales.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .errors import ParseError, PointNotInScale

Number = object  # int | float | Fraction, duck-typed arithmetic throughout


def _poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derive(coeffs: Sequence) -> list:
    return [i * c for i, c in enumerate(coeffs)][1:] or [0]


class TsFunction:
    """A function evaluable on a time scale window.

    Parameters
    ----------
    fn:
        Scalar evaluator.  Must accept every point of the window in use.
    d1, d2:
        Optional classical derivatives for dense segments.  When absent,
        dense-segment derivatives fall back to central finite differences
        and results are flagged approximate.
    fn_vec, d1_vec, d2_vec:
        Optional vectorized (ndarray -> ndarray) versions.  Defaults wrap
        the scalar forms.
    deriv_abs_max:
        Optional ``(order, lo, hi) -> float`` returning the exact maximum
        of |d^order f| on [lo, hi]; enables the analytic sup-bound path.
    """

    __slots__ = (
        "fn",
        "d1",
        "d2",
        "label",
        "fn_vec",
        "d1_vec",
        "d2_vec",
        "deriv_abs_max",
    )

    def __init__(
        self,
        fn: Callable,
        d1: Optional[Callable] = None,
        d2: Optional[Callable] = None,
        label: str = "f",
        fn_vec: Optional[Callable] = None,
        d1_vec: Optional[Callable] = None,
        d2_vec: Optional[Callable] = None,
        deriv_abs_max: Optional[Callable] = None,
    ):
        self.fn = fn
        self.d1 = d1
        self.d2 = d2
        self.label = label
        self.fn_vec = fn_vec or (lambda xs: np.array([float(fn(x)) for x in xs]))
        self.d1_vec = d1_vec or (None if d1 is None else lambda xs: np.array([float(d1(x)) for x in xs]))
        self.d2_vec = d2_vec or (None if d2 is None else lambda xs: np.array([float(d2(x)) for x in xs]))
        self.deriv_abs_max = deriv_abs_max

    def __call__(self, t):
        return self.fn(t)

    def scaled(self, c) -> "TsFunction":
        """c * f, preserving analytic derivative structure."""
        d1 = None if self.d1 is None else (lambda t, _d=self.d1: c * _d(t))
        d2 = None if self.d2 is None else (lambda t, _d=self.d2: c * _d(t))
        dmax = None
        if self.deriv_abs_max is not None:
            dmax = lambda order, lo, hi, _m=self.deriv_abs_max: abs(c) * _m(order, lo, hi)
        return TsFunction(
            fn=lambda t, _f=self.fn: c * _f(t),
            d1=d1,
            d2=d2,
            label=f"{c}*{self.label}",
            fn_vec=lambda xs, _f=self.fn_vec: float(c) * _f(xs),
            d1_vec=None if self.d1_vec is None else (lambda xs, _f=self.d1_vec: float(c) * _f(xs)),
            d2_vec=None if self.d2_vec is None else (lambda xs, _f=self.d2_vec: float(c) * _f(xs)),
            deriv_abs_max=dmax,
        )

    def __repr__(self):
        return f"TsFunction({self.label})"


# ---------------------------------------------------------------------------
# polynomial family
# ---------------------------------------------------------------------------

def _poly_abs_max(coeffs: Sequence, lo, hi) -> float:
    """Exact max of |p| on [lo, hi] via critical points of p."""
    lo_f, hi_f = float(lo), float(hi)
    candidates = [lo_f, hi_f]
    dc = _poly_derive(list(coeffs))
    arr = np.array([float(c) for c in dc], dtype=float)
    if np.any(arr[1:] != 0.0):
        roots = np.roots(arr[::-1])
        for r in roots:
            if abs(r.imag) < 1e-12 and lo_f <= r.real <= hi_f:
                candidates.append(float(r.real))
    return max(abs(float(_poly_eval(coeffs, c))) for c in candidates)


def poly_function(coeffs: Sequence, label: Optional[str] = None) -> TsFunction:
    """Polynomial sum(c_i t^i) with analytic derivatives and exact sup bounds."""
    coeffs = list(coeffs)
    if not coeffs:
        coeffs = [0]
    d1c = _poly_derive(coeffs)
    d2c = _poly_derive(d1c)
    if label is None:
        label = "poly:" + ",".join(str(c) for c in coeffs)
    fcoef = np.array([float(c) for c in coeffs])
    f1coef = np.array([float(c) for c in d1c])
    f2coef = np.array([float(c) for c in d2c])

    def _vec(cs):
        return lambda xs: np.polynomial.polynomial.polyval(np.asarray(xs, dtype=float), cs)

    def deriv_abs_max(order, lo, hi):
        c = coeffs
        for _ in range(order):
            c = _poly_derive(c)
        return _poly_abs_max(c, lo, hi)

    return TsFunction(
        fn=lambda t: _poly_eval(coeffs, t),
        d1=lambda t: _poly_eval(d1c, t),
        d2=lambda t: _poly_eval(d2c, t),
        label=label,
        fn_vec=_vec(fcoef),
        d1_vec=_vec(f1coef),
        d2_vec=_vec(f2coef),
        deriv_abs_max=deriv_abs_max,
    )


def constant_function(c, label: Optional[str] = None) -> TsFunction:
    return poly_function([c], label=label or f"const:{c}")


def identity_function() -> TsFunction:
    return poly_function([0, 1], label="poly:0,1")


# ---------------------------------------------------------------------------
# trigonometric family
# ---------------------------------------------------------------------------

def trig_function(amp: float = 1.0, omega: float = 1.0, phase: float = 0.0) -> TsFunction:
    """a*sin(w t + p); derivative sups computed exactly at critical points."""
    a, w, p = float(amp), float(omega), float(phase)

    def nth(t, order):
        # d^n/dt^n a sin(wt+p) = a w^n sin(wt + p + n pi/2)
        return a * w ** order * math.sin(w * t + p + order * math.pi / 2)

    def nth_vec(xs, order):
        return a * w ** order * np.sin(w * np.asarray(xs, dtype=float) + p + order * np.pi / 2)

    def deriv_abs_max(order, lo, hi):
        lo_f, hi_f = float(lo), float(hi)
        best = max(abs(nth(lo_f, order)), abs(nth(hi_f, order)))
        if w != 0.0:
            # critical points: w t + p + n pi/2 = pi/2 + k pi
            base = (math.pi / 2 - p - order * math.pi / 2) / w
            step = math.pi / abs(w)
            k0 = math.floor((lo_f - base) / step)
            for k in range(int(k0) - 1, int(k0) + int((hi_f - lo_f) / step) + 3):
                t = base + k * step
                if lo_f <= t <= hi_f:
                    best = max(best, abs(nth(t, order)))
        return best

    return TsFunction(
        fn=lambda t: nth(float(t), 0),
        d1=lambda t: nth(float(t), 1),
        d2=lambda t: nth(float(t), 2),
        label=f"trig:{amp},{omega},{phase}",
        fn_vec=lambda xs: nth_vec(xs, 0),
        d1_vec=lambda xs: nth_vec(xs, 1),
        d2_vec=lambda xs: nth_vec(xs, 2),
        deriv_abs_max=deriv_abs_max,
    )


# ---------------------------------------------------------------------------
# tables (discrete scales)
# ---------------------------------------------------------------------------

def table_function(mapping: Mapping, label: str = "table") -> TsFunction:
    """Explicit point -> value map; exact where the values are exact."""
    table = dict(mapping)

    def fn(t):
        try:
            return table[t]
        except KeyError:
            raise PointNotInScale(f"{t} is not a tabulated point of {label}") from None

    return TsFunction(fn=fn, label=label)


# ---------------------------------------------------------------------------
# function specs (CLI / sweep plans)
# ---------------------------------------------------------------------------

def parse_function_spec(spec: str) -> TsFunction:
    """Parse ``poly:c0,c1,...``, ``trig:amp,omega,phase`` or ``table:t=v,...``."""
    spec = spec.strip()
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "poly":
        try:
            coeffs = [Fraction(tok) for tok in body.split(",") if tok.strip()]
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad polynomial coefficients in {spec!r}: {exc}") from exc
        coeffs = [int(c) if c.denominator == 1 else c for c in coeffs]
        return poly_function(coeffs, label=spec)
    if kind == "trig":
        toks = [tok for tok in body.split(",") if tok.strip()]
        if len(toks) > 3:
            raise ParseError(f"trig spec takes at most amp,omega,phase: {spec!r}")
        vals = [float(t) for t in toks] + [1.0, 1.0, 0.0][len(toks):]
        return trig_function(*vals)
    if kind == "table":
        pairs = {}
        for item in body.split(","):
            if not item.strip():
                continue
            key, _, val = item.partition("=")
            if not val:
                raise ParseError(f"table entries look like t=v: {item!r}")
            k = Fraction(key)
            pairs[int(k) if k.denominator == 1 else k] = Fraction(val)
        return table_function(pairs, label=spec)
    raise ParseError(f"unknown function family {kind!r} in {spec!r}")
