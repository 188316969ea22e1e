"""Evaluation of the weighted Ostrowski-type bounds and their slack.

Each evaluator computes both sides of one displayed bound on a concrete
scenario (scale, window, function, weight, psi, lambda, branch point),
records every intermediate integral, and reports the slack
``rhs - lhs``.  On purely scattered windows with rational inputs all
arithmetic stays in :class:`fractions.Fraction`, so the holds-decision
there is exact rather than a tolerance event.

The three bounds:

* ``IneqMR1`` -- second-order weighted bound whose right side is
  ``M / (int nu)^2`` times the double moment of |K|;
* ``IneqMR2`` -- Gruss-type bound: the Chebyshev functional of the
  kernel against f^Delta, bounded by the product of the two standard
  deviations (Cauchy-Schwarz);
* ``Thm1.4`` -- first-order weighted bound ``M1 * int |K|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import accel
from .calculus import delta_derivative, delta_integral_parts
from .errors import (
    DegenerateWindow,
    HypothesisViolated,
    NotDifferentiableHere,
    UnboundedSuspicion,
    ValidationError,
)
from .exact import exact_div, half, is_exact as _is_exact
from .functions import TsFunction
from .kernels import KernelSpec, kernel_crossings, kernel_values_dense, peano_kernel
from .quadrature import TOL_QUAD
from .timescale import TimeScale

TOL_INEQ_ABS = 1e-8
TOL_INEQ_REL = 1e-8
N_GRID_M = 2048

H_FD_FACTOR = 1e-5


def _fd1_vec(f: TsFunction, xs: np.ndarray, lo: float, hi: float) -> np.ndarray:
    if f.d1_vec is not None:
        return np.asarray(f.d1_vec(xs), dtype=float)
    h0 = H_FD_FACTOR * (hi - lo)
    h = np.minimum(h0, np.minimum(xs - lo, hi - xs))
    return (np.asarray(f.fn_vec(xs + h), dtype=float) - np.asarray(f.fn_vec(xs - h), dtype=float)) / (2.0 * h)


# ---------------------------------------------------------------------------
# scenario
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """One concrete instantiation of the bound hypotheses."""

    ts: TimeScale
    a: object
    b: object
    f: TsFunction
    spec: KernelSpec
    x: object

    def __post_init__(self):
        for p, name in ((self.a, "a"), (self.b, "b"), (self.x, "x")):
            if not self.ts.contains(p):
                raise ValidationError(f"{name} = {p} is not a point of {self.ts.label}")
        if self.b < self.a:
            raise ValidationError("window endpoints out of order")
        if not self.a <= self.x <= self.b:
            raise ValidationError(f"x = {self.x} outside [{self.a}, {self.b}]")
        if self.spec.a != self.a or self.spec.b != self.b:
            raise ValidationError("kernel spec window differs from scenario window")

    @property
    def scenario_id(self) -> str:
        return "|".join(
            str(v)
            for v in (
                self.ts.label,
                self.a,
                self.b,
                self.f.label,
                self.spec.weight.label,
                self.spec.psi.label,
                self.spec.lam,
                self.x,
            )
        )

    def validate(self, order: int = 2, need_m: bool = True) -> None:
        """Check differentiability everywhere the chosen bound needs it.

        The second-order bound additionally uses f^Delta at both window
        ends and at sigma(s) for every measure point s.  Raises
        :class:`DegenerateWindow` for a == b and propagates derivative
        errors from probe evaluations.
        """
        if self.a == self.b:
            raise DegenerateWindow(f"window [{self.a}, {self.b}] is degenerate")
        ts, f = self.ts, self.f
        for atom in ts.measure_atoms(self.a, self.b):
            if atom[0] != "pt":
                continue
            t = atom[1]
            delta_derivative(ts, f, t, 1)
            if order >= 2:
                delta_derivative(ts, f, ts.sigma(t), 1)
                delta_derivative(ts, f, t, 2)
        if order >= 2:
            delta_derivative(ts, f, self.a, 1)
            delta_derivative(ts, f, self.b, 1)
        if need_m and ts.is_discrete_window(self.a, self.b):
            if not ts.scattered_in(self.a, self.b, open_interval=True):
                raise HypothesisViolated(
                    "no interior scale points: the sup bound has an empty domain"
                )


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

CSV_FIELDS = (
    "theorem_id",
    "scale",
    "a",
    "b",
    "x",
    "lambda",
    "psi",
    "weight",
    "lhs",
    "rhs",
    "slack",
    "holds",
    "M",
    "approx_flags",
)


def fmt12(value) -> str:
    """Locale-independent 12-significant-digit formatting for CSV/JSON."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return "%.12g" % float(value)


@dataclass(frozen=True)
class InequalityReport:
    """Both sides of one evaluated bound plus provenance."""

    theorem_id: str
    scale: str
    a: object
    b: object
    x: object
    lam: object
    psi: str
    weight: str
    lhs: object
    rhs: object
    slack: object
    holds: bool
    M: Optional[object] = None
    intermediates: dict = field(default_factory=dict)
    approx_flags: frozenset = frozenset()
    exact: bool = False

    def to_csv_row(self) -> list[str]:
        data = self.to_flat_dict()
        return [data[k] for k in CSV_FIELDS]

    def to_flat_dict(self) -> dict:
        return {
            "theorem_id": self.theorem_id,
            "scale": self.scale,
            "a": fmt12(self.a),
            "b": fmt12(self.b),
            "x": fmt12(self.x),
            "lambda": fmt12(self.lam),
            "psi": self.psi,
            "weight": self.weight,
            "lhs": fmt12(self.lhs),
            "rhs": fmt12(self.rhs),
            "slack": fmt12(self.slack),
            "holds": fmt12(self.holds),
            "M": fmt12(self.M),
            "approx_flags": "|".join(sorted(self.approx_flags)),
        }


@dataclass(frozen=True)
class SupBound:
    """A certified upper bound for sup |f^Delta...| over the open window."""

    value: object
    attained_at: Optional[object]
    method: str  # analytic | grid | supplied

    def __float__(self):
        return float(self.value)


def _holds(slack, rhs, tol_abs: float, tol_rel: float) -> bool:
    return float(slack) >= -(tol_abs + tol_rel * abs(float(rhs)))


# ---------------------------------------------------------------------------
# sup bound M
# ---------------------------------------------------------------------------

def estimate_M(
    scn: Scenario,
    order: int = 2,
    override=None,
    n_grid: int = N_GRID_M,
) -> SupBound:
    """sup of |f^DeltaDelta| (order 2) or |f^Delta| (order 1) over (a, b).

    Exact maxima over scattered points; closed-form or sampled maxima
    over dense segments.  Scattered endpoints are excluded (the sup is
    over the open window); dense grids sample the closure of each piece,
    since for a continuous integrand the open sup equals the closed max.
    """
    if override is not None:
        return SupBound(value=override, attained_at=None, method="supplied")
    ts, f, a, b = scn.ts, scn.f, scn.a, scn.b
    best = None
    arg = None
    method = "analytic"
    for p in ts.scattered_in(a, b, open_interval=True):
        try:
            v = abs(delta_derivative(ts, f, p, order))
        except NotDifferentiableHere:
            continue
        if best is None or v > best:
            best, arg = v, p
    for lo, hi in ts.dense_pieces(a, b):
        lo_f, hi_f = float(lo), float(hi)
        if f.deriv_abs_max is not None:
            v = f.deriv_abs_max(order, lo_f, hi_f)
            if best is None or v > best:
                best, arg = v, None
            continue
        method = "grid"
        coarse = _grid_max(ts, f, order, lo_f, hi_f, n_grid)
        fine = _grid_max(ts, f, order, lo_f, hi_f, 2 * n_grid)
        if fine > 10.0 * max(coarse, 1e-300):
            raise UnboundedSuspicion(
                f"|f^({order})| grid max grows from {coarse} to {fine} under refinement"
            )
        if best is None or fine > best:
            best, arg = fine, None
    if best is None:
        raise HypothesisViolated("sup bound has an empty domain on this window")
    return SupBound(value=best, attained_at=arg, method=method)


def _grid_max(ts, f, order, lo, hi, n) -> float:
    xs = np.linspace(lo, hi, n)
    if order == 2 and f.d2_vec is not None:
        return float(np.max(np.abs(np.asarray(f.d2_vec(xs), dtype=float))))
    if order == 1 and f.d1_vec is not None:
        return float(np.max(np.abs(np.asarray(f.d1_vec(xs), dtype=float))))
    vals = [abs(float(delta_derivative(ts, f, float(x), order))) for x in xs[1:-1]]
    return max(vals) if vals else 0.0


# ---------------------------------------------------------------------------
# shared integrals
# ---------------------------------------------------------------------------

class _Parts:
    """Lazy cache of the integrals shared by the evaluators."""

    def __init__(self, scn: Scenario, tol_quad: float):
        self.scn = scn
        self.tol = tol_quad
        self.flags: set[str] = set()
        self.spec = scn.spec
        self.crossings = kernel_crossings(scn.spec, scn.ts)
        if not scn.ts.is_discrete_window(scn.a, scn.b):
            self.flags.add("quadrature")
            if scn.f.d1 is None:
                self.flags.add("fd-derivative")
        self._cache: dict = {}

    def _integral(self, key, point_fn, dense_fn, breakpoints=()):
        if key not in self._cache:
            self._cache[key] = delta_integral_parts(
                self.scn.ts,
                point_fn,
                dense_fn,
                self.scn.a,
                self.scn.b,
                breakpoints=breakpoints,
                rel_tol=self.tol,
            )
        return self._cache[key]

    # individual integrals -------------------------------------------------

    def I_nu(self):
        nu = self.spec.weight.nu
        return self._integral("I_nu", nu.fn, lambda xs, lo, hi: nu.fn_vec(xs))

    def I_K(self):
        spec, x = self.spec, self.scn.x
        return self._integral(
            "I_K",
            lambda t: peano_kernel(spec, t, x),
            lambda xs, lo, hi: kernel_values_dense(spec, xs, x),
            breakpoints=(self.scn.x,),
        )

    def I_K2(self):
        spec, x = self.spec, self.scn.x
        return self._integral(
            "I_K2",
            lambda t: peano_kernel(spec, t, x) ** 2,
            lambda xs, lo, hi: kernel_values_dense(spec, xs, x) ** 2,
            breakpoints=(self.scn.x,),
        )

    def I_K_abs(self):
        return self._cache.setdefault("I_K_abs", self.abs_kernel_integral(self.scn.x))

    def I_nu_f_sigma(self):
        ts, f, nu = self.scn.ts, self.scn.f, self.spec.weight.nu
        return self._integral(
            "I_nu_f_sigma",
            lambda t: nu.fn(t) * f.fn(ts.sigma(t)),
            lambda xs, lo, hi: np.asarray(nu.fn_vec(xs), dtype=float)
            * np.asarray(f.fn_vec(xs), dtype=float),
        )

    def I_nu_fdelta_sigma(self):
        ts, f, nu = self.scn.ts, self.scn.f, self.spec.weight.nu
        return self._integral(
            "I_nu_fdelta_sigma",
            lambda t: nu.fn(t) * delta_derivative(ts, f, ts.sigma(t), 1),
            lambda xs, lo, hi: np.asarray(nu.fn_vec(xs), dtype=float)
            * _fd1_vec(f, xs, lo, hi),
        )

    def I_fdelta(self):
        ts, f = self.scn.ts, self.scn.f
        return self._integral(
            "I_fdelta",
            lambda t: delta_derivative(ts, f, t, 1),
            lambda xs, lo, hi: _fd1_vec(f, xs, lo, hi),
        )

    def I_fdelta2(self):
        ts, f = self.scn.ts, self.scn.f
        return self._integral(
            "I_fdelta2",
            lambda t: delta_derivative(ts, f, t, 1) ** 2,
            lambda xs, lo, hi: _fd1_vec(f, xs, lo, hi) ** 2,
        )

    def I_K_fdelta(self):
        ts, f, spec, x = self.scn.ts, self.scn.f, self.spec, self.scn.x
        return self._integral(
            "I_K_fdelta",
            lambda t: peano_kernel(spec, t, x) * delta_derivative(ts, f, t, 1),
            lambda xs, lo, hi: kernel_values_dense(spec, xs, x) * _fd1_vec(f, xs, lo, hi),
            breakpoints=(x,),
        )

    # |K| machinery ---------------------------------------------------------

    def _abs_K(self, values, svals, t):
        out = abs(values) if not isinstance(values, np.ndarray) else np.abs(values)
        if self.spec.fault == "drop-branch1-abs":
            # test-only fault injection: forget the first branch of |K|
            if isinstance(out, np.ndarray):
                out = np.where(np.asarray(svals) < float(t), 0.0, out)
            elif svals < t:
                out = 0 * out
        return out

    def abs_kernel_integral(self, t):
        """Integral of |K(s, t)| over [a, b] in s."""
        spec = self.spec
        return delta_integral_parts(
            self.scn.ts,
            lambda s: self._abs_K(peano_kernel(spec, s, t), s, t),
            lambda xs, lo, hi: self._abs_K(kernel_values_dense(spec, xs, t), xs, t),
            self.scn.a,
            self.scn.b,
            breakpoints=(t, *self.crossings),
            rel_tol=self.tol,
        )

    def double_abs_moment(self):
        """Double moment: integral over t of |K(t, x)| * integral over s of |K(s, t)|."""
        if "double_abs" in self._cache:
            return self._cache["double_abs"]
        scn, spec = self.scn, self.spec
        ts, a, b, x = scn.ts, scn.a, scn.b, scn.x
        if ts.is_discrete_window(a, b) and spec.fault is None:
            value = self._double_abs_discrete()
        else:
            value = delta_integral_parts(
                ts,
                lambda t: self._abs_K(peano_kernel(spec, t, x), t, x)
                * self.abs_kernel_integral(t),
                lambda xs, lo, hi: self._abs_K(kernel_values_dense(spec, xs, x), xs, x)
                * np.array([float(self.abs_kernel_integral(float(t))) for t in xs]),
                a,
                b,
                breakpoints=(x, *self.crossings),
                rel_tol=self.tol,
            )
        self._cache["double_abs"] = value
        return value

    def _double_abs_discrete(self):
        """Prefix-sum form of the double moment on purely scattered windows."""
        scn, spec = self.scn, self.spec
        atoms = scn.ts.measure_atoms(scn.a, scn.b)
        pts = [atm[1] for atm in atoms]
        mu = [atm[2] for atm in atoms]
        w = spec.weight.w.fn
        wvals = [w(p) for p in pts]
        c1, c2 = spec.constants()
        abs_ktx = [abs(peano_kernel(spec, p, scn.x)) for p in pts]
        if _is_exact(c1, c2, *pts, *mu, *wvals, *abs_ktx):
            suf2 = sum(m * abs(wv - c2) for m, wv in zip(mu, wvals))
            pre1 = 0
            total = 0
            for m, wv, k in zip(mu, wvals, abs_ktx):
                total += m * k * (pre1 + suf2)
                pre1 += m * abs(wv - c1)
                suf2 -= m * abs(wv - c2)
            return total
        return accel.double_moment_discrete(
            np.array([float(p) for p in pts]),
            np.array([float(m) for m in mu]),
            np.array([float(v) for v in wvals]),
            np.array([float(k) for k in abs_ktx]),
            float(c1),
            float(c2),
        )


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

def _boundary_mix(spec, va, vb):
    """psi(lam) * va + (1 - psi(1 - lam)) * vb, halved."""
    return half(spec.psi(spec.lam) * va + (1 - spec.psi(1 - spec.lam)) * vb)


def _report(scn, theorem_id, lhs, rhs, M, intermediates, flags, tol_abs, tol_rel, exact_holds=None):
    slack = rhs - lhs  # stays a Fraction when both sides are exact
    holds = _holds(slack, rhs, tol_abs, tol_rel) if exact_holds is None else exact_holds
    return InequalityReport(
        theorem_id=theorem_id,
        scale=scn.ts.label,
        a=scn.a,
        b=scn.b,
        x=scn.x,
        lam=scn.spec.lam,
        psi=scn.spec.psi.label,
        weight=scn.spec.weight.label,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        holds=holds,
        M=M,
        intermediates={k: float(v) for k, v in intermediates.items()},
        approx_flags=frozenset(flags),
        exact=not flags and _is_exact(lhs, rhs),
    )


def montgomery_residual(scn: Scenario, tol_quad: float = TOL_QUAD):
    """|LHS - RHS| of the kernel identity behind all three bounds.

    LHS is the bracketed sampled/boundary combination times the weight
    mass; RHS is the kernel-against-f^Delta integral plus the weighted
    mean of f(sigma(.)).  Exactly zero on discrete windows with rational
    inputs; quadrature-level small otherwise.
    """
    scn.validate(order=1, need_m=False)
    parts = _Parts(scn, tol_quad)
    spec, f = scn.spec, scn.f
    bracket = spec.phi * f.fn(scn.x) + _boundary_mix(spec, f.fn(scn.a), f.fn(scn.b))
    left = bracket * parts.I_nu()
    right = parts.I_K_fdelta() + parts.I_nu_f_sigma()
    return abs(left - right)


def eval_weighted_ostrowski(
    scn: Scenario,
    m_override=None,
    tol_quad: float = TOL_QUAD,
    tol_abs: float = TOL_INEQ_ABS,
    tol_rel: float = TOL_INEQ_REL,
) -> InequalityReport:
    """Second-order weighted bound (theorem id ``IneqMR1``)."""
    scn.validate(order=2, need_m=True)
    parts = _Parts(scn, tol_quad)
    spec, f, ts = scn.spec, scn.f, scn.ts
    ph = spec.phi
    I_nu = parts.I_nu()
    if not I_nu > 0:
        raise ValidationError(f"weight mass over the window must be positive, got {I_nu}")
    I_K = parts.I_K()
    I_nfd = parts.I_nu_fdelta_sigma()
    I_nfs = parts.I_nu_f_sigma()
    D = parts.double_abs_moment()
    sup = estimate_M(scn, order=2, override=m_override)
    if sup.method == "grid":
        parts.flags.add("m-grid")
    elif sup.method == "supplied":
        parts.flags.add("m-supplied")
    fd_a = delta_derivative(ts, f, scn.a, 1)
    fd_b = delta_derivative(ts, f, scn.b, 1)

    t1 = ph * ph * f.fn(scn.x)
    t2 = -exact_div(I_K * I_nfd, I_nu * I_nu)
    t3 = exact_div(_boundary_mix(spec, fd_a, fd_b) * I_K, I_nu)
    t4 = -exact_div(ph * I_nfs, I_nu)
    t5 = _boundary_mix(spec, f.fn(scn.a), f.fn(scn.b)) * ph
    lhs = abs(t1 + t2 + t3 + t4 + t5)
    rhs = exact_div(sup.value * D, I_nu * I_nu)
    inter = {
        "phi": ph,
        "I_nu": I_nu,
        "I_K": I_K,
        "I_nu_fdelta_sigma": I_nfd,
        "I_nu_f_sigma": I_nfs,
        "double_abs_moment": D,
        "term_phi2_f": t1,
        "term_double_mean": t2,
        "term_boundary_fdelta": t3,
        "term_mean_f_sigma": t4,
        "term_boundary_f": t5,
        "M": sup.value,
    }
    return _report(scn, "IneqMR1", lhs, rhs, sup.value, inter, parts.flags, tol_abs, tol_rel)


def eval_ostrowski_gruss(
    scn: Scenario,
    tol_quad: float = TOL_QUAD,
    tol_abs: float = TOL_INEQ_ABS,
    tol_rel: float = TOL_INEQ_REL,
) -> InequalityReport:
    """Gruss-type bound (theorem id ``IneqMR2``)."""
    scn.validate(order=1, need_m=False)
    parts = _Parts(scn, tol_quad)
    spec, f = scn.spec, scn.f
    a, b = scn.a, scn.b
    span = b - a
    ph = spec.phi
    I_nu = parts.I_nu()
    I_K = parts.I_K()
    I_K2 = parts.I_K2()
    I_fd = parts.I_fdelta()
    I_fd2 = parts.I_fdelta2()
    I_nfs = parts.I_nu_f_sigma()
    bracket = ph * f.fn(scn.x) + _boundary_mix(spec, f.fn(a), f.fn(b))
    lhs = abs(
        exact_div(bracket * I_nu, span)
        - exact_div(I_nfs, span)
        - exact_div((f.fn(b) - f.fn(a)) * I_K, span * span)
    )
    var_K = exact_div(I_K2, span) - exact_div(I_K, span) ** 2
    var_fd = exact_div(I_fd2, span) - exact_div(I_fd, span) ** 2
    clamped = False
    exact = _is_exact(lhs, var_K, var_fd)
    for name, v in (("var_K", var_K), ("var_fdelta", var_fd)):
        if v < 0:
            if float(v) < -tol_quad:
                raise ValidationError(f"{name} = {v} is negative beyond quadrature noise")
            clamped = True
    if clamped:
        parts.flags.add("variance-clamped")
    var_K_c = max(var_K, 0 * var_K)
    var_fd_c = max(var_fd, 0 * var_fd)
    rhs = math.sqrt(float(var_K_c)) * math.sqrt(float(var_fd_c))
    exact_holds = None
    if exact:
        # sqrt is the only float step; decide holds on the squared form
        exact_holds = lhs * lhs <= var_K_c * var_fd_c or _holds(
            rhs - float(lhs), rhs, tol_abs, tol_rel
        )
    inter = {
        "phi": ph,
        "I_nu": I_nu,
        "I_K": I_K,
        "I_K2": I_K2,
        "I_fdelta": I_fd,
        "I_fdelta2": I_fd2,
        "I_nu_f_sigma": I_nfs,
        "var_K": var_K_c,
        "var_fdelta": var_fd_c,
        "bracket": bracket,
    }
    return _report(
        scn, "IneqMR2", lhs, rhs, None, inter, parts.flags, tol_abs, tol_rel, exact_holds
    )


def eval_first_order_ostrowski(
    scn: Scenario,
    m_override=None,
    tol_quad: float = TOL_QUAD,
    tol_abs: float = TOL_INEQ_ABS,
    tol_rel: float = TOL_INEQ_REL,
) -> InequalityReport:
    """First-order weighted bound (theorem id ``Thm1.4``); M is sup |f^Delta|."""
    scn.validate(order=1, need_m=True)
    parts = _Parts(scn, tol_quad)
    spec, f = scn.spec, scn.f
    ph = spec.phi
    I_nu = parts.I_nu()
    I_nfs = parts.I_nu_f_sigma()
    bracket = ph * f.fn(scn.x) + _boundary_mix(spec, f.fn(scn.a), f.fn(scn.b))
    lhs = abs(bracket * I_nu - I_nfs)
    sup = estimate_M(scn, order=1, override=m_override)
    if sup.method == "grid":
        parts.flags.add("m-grid")
    elif sup.method == "supplied":
        parts.flags.add("m-supplied")
    abs_K = parts.I_K_abs()
    rhs = sup.value * abs_K
    inter = {
        "phi": ph,
        "I_nu": I_nu,
        "I_nu_f_sigma": I_nfs,
        "I_K_abs": abs_K,
        "identity_kf": abs(parts.I_K_fdelta()),
        "M1": sup.value,
    }
    return _report(scn, "Thm1.4", lhs, rhs, sup.value, inter, parts.flags, tol_abs, tol_rel)
