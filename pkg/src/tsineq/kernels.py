"""Parameter functions, weight pairs, and the weighted Peano kernel.

The kernel attached to a window [a, b], a weight antiderivative w, a
parameter function psi: [0,1] -> [0,1] and a parameter lam is

    K(s, t) = w(s) - (w(a) + psi(lam) * (w(b) - w(a)) / 2)            s in [a, t)
    K(s, t) = w(s) - (w(a) + (1 + psi(1-lam)) * (w(b) - w(a)) / 2)    s in [t, b]

with the point s = t assigned to the second branch.  The coefficient

    Phi(lam) = (1 + psi(1-lam) - psi(lam)) / 2

weights the sampled function value in the bounds built on this kernel.
All scalar arithmetic here is exact-friendly: rational inputs yield
rational kernel values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import accel
from .calculus import h_monomial
from .errors import (
    DomainError,
    HypothesisViolated,
    ParseError,
    PointNotInScale,
    ValidationError,
    VariantMismatch,
)
from .exact import exact_div, half
from .functions import TsFunction, identity_function, poly_function
from .timescale import TimeScale

_PSI_GRID = 1001

KERNEL_VARIANTS = (
    "general",
    "midpoint-lambda",
    "dragomir-barnett",
    "quadratic-weight",
    "quantum",
)


# ---------------------------------------------------------------------------
# parameter functions psi
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParameterFunction:
    """psi: [0, 1] -> [0, 1], validated on a 1001-point grid at build time."""

    fn: Callable
    label: str

    def __call__(self, lam):
        return self.fn(lam)


def _validated(fn: Callable, label: str) -> ParameterFunction:
    for x in np.linspace(0.0, 1.0, _PSI_GRID):
        y = float(fn(float(x)))
        if not 0.0 <= y <= 1.0 + 1e-15:
            raise ValidationError(f"psi {label!r} leaves [0, 1]: psi({x}) = {y}")
    return ParameterFunction(fn=fn, label=label)


def psi_identity() -> ParameterFunction:
    return _validated(lambda lam: lam, "identity")


def psi_constant(c) -> ParameterFunction:
    if not 0 <= c <= 1:
        raise ValidationError(f"constant psi needs c in [0, 1], got {c}")
    return _validated(lambda lam: c, f"const:{c}")


def psi_power(p: int) -> ParameterFunction:
    if p < 1:
        raise ValidationError("power psi needs exponent >= 1")
    return _validated(lambda lam: lam ** p, f"power:{p}")


def psi_clamp(offset, slope) -> ParameterFunction:
    """Clamped affine map lam -> min(1, max(0, offset + slope*lam))."""

    def fn(lam):
        v = offset + slope * lam
        if v < 0:
            return 0 * v
        if v > 1:
            return 1 + 0 * v
        return v

    return _validated(fn, f"clamp:{offset},{slope}")


def psi_table(pairs: Sequence[tuple]) -> ParameterFunction:
    """Piecewise-linear psi through (lambda_i, value_i) knots."""
    knots = sorted(pairs)
    if not knots or knots[0][0] != 0 or knots[-1][0] != 1:
        raise ValidationError("psi table must cover lambda = 0 and lambda = 1")
    xs = [k[0] for k in knots]
    ys = [k[1] for k in knots]

    def fn(lam):
        for i in range(len(xs) - 1):
            if xs[i] <= lam <= xs[i + 1]:
                t = (lam - xs[i]) / (xs[i + 1] - xs[i])
                return ys[i] + t * (ys[i + 1] - ys[i])
        raise DomainError(f"lambda {lam} outside [0, 1]")

    return _validated(fn, "table:" + ",".join(f"{x}={y}" for x, y in knots))


def parse_psi_spec(spec: str) -> ParameterFunction:
    spec = spec.strip()
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind in ("identity", "id"):
        return psi_identity()
    if kind in ("const", "constant"):
        return psi_constant(Fraction(body))
    if kind == "power":
        return psi_power(int(body))
    if kind == "clamp":
        off, _, slope = body.partition(",")
        return psi_clamp(Fraction(off), Fraction(slope))
    if kind == "table":
        pairs = []
        for item in body.split(","):
            k, _, v = item.partition("=")
            pairs.append((Fraction(k), Fraction(v)))
        return psi_table(pairs)
    raise ParseError(f"unknown psi spec {spec!r}")


def phi(psi: ParameterFunction, lam) -> object:
    """(1 + psi(1 - lam) - psi(lam)) / 2, the sampled-value coefficient."""
    if not 0 <= lam <= 1:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return half(1 + psi(1 - lam) - psi(lam))


# ---------------------------------------------------------------------------
# weight pairs (nu, w) with w^Delta = nu
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightPair:
    """The weight nu >= 0 together with its delta antiderivative w."""

    nu: TsFunction
    w: TsFunction
    kind: str  # unit | quadratic | table | custom
    label: str

    def validate(self, ts: TimeScale, a, b, tol: float = 1e-9) -> None:
        """Check w(sigma(t)) - w(t) = mu(t) nu(t) at scattered points (exactly
        for exact inputs) and w' = nu on dense pieces; nu >= 0 throughout."""
        scale = max(1.0, abs(float(self.w.fn(a))), abs(float(self.w.fn(b))))
        for atom in ts.measure_atoms(a, b):
            if atom[0] == "pt":
                _, t, mu = atom
                nu_t = self.nu.fn(t)
                if nu_t < 0:
                    raise ValidationError(f"nu({t}) = {nu_t} is negative")
                lhs = self.w.fn(ts.sigma(t)) - self.w.fn(t)
                rhs = mu * nu_t
                if isinstance(lhs, (int, Fraction)) and isinstance(rhs, (int, Fraction)):
                    if lhs != rhs:
                        raise ValidationError(
                            f"w(sigma({t})) - w({t}) = {lhs} but mu*nu = {rhs}"
                        )
                elif abs(float(lhs) - float(rhs)) > tol * scale:
                    raise ValidationError(
                        f"w jump at {t} deviates from mu*nu beyond {tol}"
                    )
            else:
                _, lo, hi = atom
                xs = np.linspace(float(lo), float(hi), 33)
                nus = np.asarray(self.nu.fn_vec(xs), dtype=float)
                if np.any(nus < -tol * scale):
                    raise ValidationError(f"nu negative on [{lo}, {hi}]")
                if self.w.d1_vec is not None:
                    if np.max(np.abs(np.asarray(self.w.d1_vec(xs)) - nus)) > 1e-6 * scale:
                        raise ValidationError(f"w' != nu on [{lo}, {hi}]")


def unit_weight() -> WeightPair:
    """nu = 1, w(t) = t: the unweighted case."""
    return WeightPair(
        nu=poly_function([1], label="const:1"),
        w=identity_function(),
        kind="unit",
        label="unit",
    )


def quadratic_weight(ts: TimeScale, c=0) -> WeightPair:
    """w(t) = t^2 + c, whose delta derivative is nu(t) = sigma(t) + t.

    Valid only on windows where sigma(t) + t >= 0.
    """
    nu = TsFunction(
        fn=lambda t: ts.sigma(t) + t,
        label="sigma-plus-t",
        fn_vec=lambda xs: 2.0 * np.asarray(xs, dtype=float),
    )
    return WeightPair(
        nu=nu,
        w=poly_function([c, 0, 1], label=f"poly:{c},0,1"),
        kind="quadratic",
        label=f"quadratic:{c}",
    )


def table_weight(ts: TimeScale, wmap, label: str = "table") -> WeightPair:
    """Weight pair from a w-table on a discrete scale; nu derives from the jumps."""
    w = TsFunction(fn=lambda t: wmap[t], label=f"w-{label}")

    def nu_fn(t):
        mu = ts.mu(t)
        if mu == 0:
            raise DomainError(f"nu from a w-table is undefined at right-dense {t}")
        return (wmap[ts.sigma(t)] - wmap[t]) / mu

    return WeightPair(
        nu=TsFunction(fn=nu_fn, label=f"nu-{label}"),
        w=w,
        kind="table",
        label=label,
    )


def parse_weight_spec(spec: str, ts: TimeScale) -> WeightPair:
    spec = spec.strip()
    kind, _, body = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "unit":
        return unit_weight()
    if kind == "quadratic":
        c = Fraction(body) if body else Fraction(0)
        c = int(c) if c.denominator == 1 else c
        return quadratic_weight(ts, c)
    if kind in ("sigma-plus-t", "sigmaplust"):
        return quadratic_weight(ts, 0)
    if kind == "table":
        pairs = {}
        for item in body.split(","):
            k, _, v = item.partition("=")
            kk = Fraction(k)
            pairs[int(kk) if kk.denominator == 1 else kk] = Fraction(v)
        return table_weight(ts, pairs, label=spec)
    raise ParseError(f"unknown weight spec {spec!r}")


# ---------------------------------------------------------------------------
# kernel spec and evaluation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    """Window, weight pair, parameter function and lambda for one kernel."""

    weight: WeightPair
    psi: ParameterFunction
    lam: object
    a: object
    b: object
    variant: str = "general"
    ts: Optional[TimeScale] = field(default=None, compare=False)
    fault: Optional[str] = field(default=None, compare=False)  # test-only fault injection

    def __post_init__(self):
        if not 0 <= self.lam <= 1:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.variant not in KERNEL_VARIANTS:
            raise VariantMismatch(f"unknown kernel variant {self.variant!r}")
        if self.variant in ("midpoint-lambda", "dragomir-barnett"):
            if self.weight.kind != "unit" or self.psi.label != "identity":
                raise VariantMismatch(
                    f"variant {self.variant!r} needs the unit weight and identity psi"
                )
            if self.variant == "dragomir-barnett" and self.lam != 0:
                raise VariantMismatch("dragomir-barnett fixes lambda = 0")
        if self.variant == "quadratic-weight" and self.weight.kind != "quadratic":
            raise VariantMismatch("quadratic-weight variant needs w(t) = t^2 + c")

    @property
    def phi(self):
        return phi(self.psi, self.lam)

    def constants(self):
        """Branch constants (c1, c2) subtracted from w(s)."""
        w, psi, lam, a, b = self.weight.w.fn, self.psi, self.lam, self.a, self.b
        wa, wb = w(a), w(b)
        span = wb - wa
        c1 = wa + psi(lam) * half(span)
        c2 = wa + (1 + psi(1 - lam)) * half(span)
        return c1, c2


def peano_kernel(spec: KernelSpec, s, t):
    """K(s, t): value at s with branch point t (s = t takes the second branch)."""
    a, b = spec.a, spec.b
    if not a <= s <= b or not a <= t <= b:
        raise PointNotInScale(f"kernel arguments must lie in [{a}, {b}]")
    if spec.ts is not None and not (spec.ts.contains(s) and spec.ts.contains(t)):
        raise PointNotInScale("kernel arguments must be scale points")
    if spec.variant in ("midpoint-lambda", "dragomir-barnett"):
        lam = spec.lam
        if s < t:
            return s - (a + lam * half(b - a))
        return s - (a + (2 - lam) * half(b - a))
    if spec.variant == "quadratic-weight":
        lam = spec.lam
        if s < t:
            return s * s - a * a - lam * half(b * b - a * a)
        return s * s - a * a - (2 - lam) * half(b * b - a * a)
    c1, c2 = spec.constants()
    w = spec.weight.w.fn
    if s < t:
        return w(s) - c1
    return w(s) - c2


def kernel_values_dense(spec: KernelSpec, svals: np.ndarray, t) -> np.ndarray:
    """Vectorized K(., t) on dense nodes (float lane)."""
    svals = np.asarray(svals, dtype=float)
    wvals = np.asarray(spec.weight.w.fn_vec(svals), dtype=float)
    c1, c2 = spec.constants()
    return accel.piecewise_kernel(svals, wvals, float(t), float(c1), float(c2))


def kernel_crossings(spec: KernelSpec, ts: TimeScale) -> list[float]:
    """Sign-change locations of each kernel branch inside dense pieces.

    Used as quadrature breakpoints when integrating |K|; w is
    nondecreasing on the scale (nu >= 0) so each branch crosses zero at
    most once per dense piece.
    """
    c1, c2 = (float(c) for c in spec.constants())
    w = spec.weight.w.fn_vec
    out = []
    for lo, hi in ts.dense_pieces(spec.a, spec.b):
        lo_f, hi_f = float(lo), float(hi)
        wlo, whi = (float(v) for v in np.asarray(w(np.array([lo_f, hi_f])), dtype=float))
        for c in (c1, c2):
            if (wlo - c) * (whi - c) < 0.0:
                x0, x1 = lo_f, hi_f
                f0 = wlo - c
                for _ in range(64):
                    xm = 0.5 * (x0 + x1)
                    fm = float(w(np.array([xm]))[0]) - c
                    if f0 * fm <= 0.0:
                        x1 = xm
                    else:
                        x0, f0 = xm, fm
                out.append(0.5 * (x0 + x1))
    return sorted(out)


def kernel_moments_h2(spec: KernelSpec, t):
    """Closed-form moments of the unit-weight kernel through h_2.

    Returns ``(abs_moment, signed_moment)``: the integrals of |K(., t)|
    and K(., t) over [a, b] expressed via the generalized monomial h_2 at
    the two anchor points ``a + psi(lam)(b-a)/2`` and
    ``a + (1 + psi(1-lam))(b-a)/2``.  Both anchors must be scale points
    and t must lie between them, else :class:`HypothesisViolated`.
    """
    if spec.weight.kind != "unit":
        raise VariantMismatch("h_2 kernel moments require the unit weight w(t) = t")
    ts = spec.ts
    if ts is None:
        raise HypothesisViolated("kernel_moments_h2 needs a KernelSpec bound to a scale")
    a, b, psi, lam = spec.a, spec.b, spec.psi, spec.lam
    p1 = a + psi(lam) * half(b - a)
    p2 = a + (1 + psi(1 - lam)) * half(b - a)
    for p in (p1, p2):
        if not ts.contains(p):
            raise HypothesisViolated(f"anchor point {p} is not a scale point")
    if not p1 <= t <= p2:
        raise HypothesisViolated(f"branch point {t} outside the anchor bracket [{p1}, {p2}]")
    h2 = lambda u, v: h_monomial(ts, 2, u, v)
    abs_moment = h2(a, p1) + h2(t, p1) + h2(t, p2) + h2(b, p2)
    signed_moment = h2(t, p1) - h2(a, p1) + h2(b, p2) - h2(t, p2)
    return abs_moment, signed_moment
