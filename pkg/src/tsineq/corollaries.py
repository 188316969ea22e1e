"""Specialized bound evaluators for the standard scales.

Every evaluator here implements its displayed formula directly -- h_2
brackets, plain sums, q-sums with Jackson weights, or classical
QUADPACK integrals -- rather than delegating to the general evaluators
in :mod:`tsineq.inequalities`.  That makes the agreement between a
specialization and the general bound on its native scale a genuine
cross-check of two independent computations; each report carries the
general evaluation's values in its intermediates for that comparison.

Identifiers
-----------
``corthm1``     midpoint-lambda form on an arbitrary scale (h_2 bracket)
``corDB``       the lambda = 0 case extending the classical second-order
                bound to arbitrary scales
``cor1``        continuous second-order bound (classical integrals)
``cor2``        integer second-order bound (plain sums)
``Ineqcor3``    quantum second-order bound (q-sums)
``corMR2``      Gruss bound with the quadratic weight w = t^2 + c
``corMR2-l0``   its lambda = 0 form
``cor3``        continuous Gruss bound
``cor4``        integer Gruss bound (forward differences)
``cor5``        quantum Gruss bound
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.integrate import quad as _scipy_quad

from .calculus import delta_derivative, delta_integral_parts, h_monomial
from .errors import HypothesisViolated, UnknownCorollary
from .exact import exact_div, half, is_exact as _is_exact
from .functions import TsFunction
from .inequalities import (
    InequalityReport,
    Scenario,
    TOL_INEQ_ABS,
    TOL_INEQ_REL,
    _holds,
    estimate_M,
    eval_ostrowski_gruss,
    eval_weighted_ostrowski,
)
from .kernels import (
    KernelSpec,
    WeightPair,
    phi as phi_of,
    psi_identity,
    quadratic_weight,
    unit_weight,
)
from .timescale import TimeScale

COROLLARY_IDS = (
    "corthm1",
    "corDB",
    "cor1",
    "cor2",
    "Ineqcor3",
    "corMR2",
    "corMR2-l0",
    "cor3",
    "cor4",
    "cor5",
)


def _fn(obj):
    return obj.fn if isinstance(obj, TsFunction) else obj


def _mk_report(cid, scale, a, b, x, lam, psi_label, weight_label, lhs, rhs, M, inter, exact_holds=None):
    slack = rhs - lhs
    holds = _holds(slack, rhs, TOL_INEQ_ABS, TOL_INEQ_REL) if exact_holds is None else exact_holds
    return InequalityReport(
        theorem_id=cid,
        scale=scale,
        a=a,
        b=b,
        x=x,
        lam=lam,
        psi=psi_label,
        weight=weight_label,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        holds=holds,
        M=M,
        intermediates={k: float(v) for k, v in inter.items()},
        approx_flags=frozenset(),
        exact=_is_exact(lhs, rhs),
    )


def _attach_general(report: InequalityReport, general: InequalityReport) -> InequalityReport:
    inter = dict(report.intermediates)
    inter["general_lhs"] = float(general.lhs)
    inter["general_rhs"] = float(general.rhs)
    inter["general_lhs_diff"] = float(report.lhs) - float(general.lhs)
    inter["general_rhs_diff"] = float(report.rhs) - float(general.rhs)
    return dataclasses.replace(report, intermediates=inter)


def _gruss_rhs(var_k, var_f):
    var_k = max(var_k, 0 * var_k)
    var_f = max(var_f, 0 * var_f)
    return math.sqrt(float(var_k)) * math.sqrt(float(var_f)), var_k, var_f


def _gruss_exact_holds(lhs, var_k, var_f):
    if _is_exact(lhs, var_k, var_f):
        return lhs * lhs <= max(var_k, 0 * var_k) * max(var_f, 0 * var_f)
    return None


# ---------------------------------------------------------------------------
# arbitrary-scale corollaries via h_2 brackets
# ---------------------------------------------------------------------------

def _corthm1_like(cid, ts, a, b, f, lam, x, m_override, consistency):
    """Shared engine for corthm1 (any lambda) and corDB (lambda = 0)."""
    psi = psi_identity()
    p1 = a + lam * half(b - a)
    p2 = a + (2 - lam) * half(b - a)
    for p in (p1, p2):
        if not ts.contains(p):
            raise HypothesisViolated(f"anchor point {p} is not a scale point")
    if not p1 <= x <= p2:
        raise HypothesisViolated(f"x = {x} outside the anchor bracket [{p1}, {p2}]")
    h2 = lambda u, v: h_monomial(ts, 2, u, v)
    span = b - a
    bracket = h2(x, p1) - h2(a, p1) + h2(b, p2) - h2(x, p2)

    def kernel(t):
        return t - p1 if t < x else t - p2

    h2a, h2b2 = h2(a, p1), h2(b, p2)

    def weight_fn(t):
        return abs(kernel(t)) * (h2a + h2(t, p1) + h2(t, p2) + h2b2)

    rhs_int = delta_integral_parts(
        ts,
        weight_fn,
        lambda xs, lo, hi: np.array([float(weight_fn(float(t))) for t in xs]),
        a,
        b,
        breakpoints=(x, p1, p2),
    )
    I_fds = delta_integral_parts(
        ts,
        lambda s: delta_derivative(ts, f, ts.sigma(s), 1),
        lambda xs, lo, hi: _dense_d1(f, xs, lo, hi),
        a,
        b,
    )
    I_fs = delta_integral_parts(
        ts,
        lambda t: f.fn(ts.sigma(t)),
        lambda xs, lo, hi: np.asarray(f.fn_vec(xs), dtype=float),
        a,
        b,
    )
    fd_a = delta_derivative(ts, f, a, 1)
    fd_b = delta_derivative(ts, f, b, 1)
    scn = _general_scenario(ts, a, b, f, unit_weight(), psi, lam, x)
    sup = estimate_M(scn, order=2, override=m_override)

    lhs = abs(
        (lam * lam - 2 * lam + 1) * f.fn(x)
        - exact_div(I_fds * bracket, span * span)
        + exact_div(lam * half(fd_a + fd_b) * bracket, span)
        - exact_div((1 - lam) * I_fs, span)
        + lam * (1 - lam) * half(f.fn(a) + f.fn(b))
    )
    rhs = exact_div(sup.value * rhs_int, span * span)
    inter = {
        "h2_bracket": bracket,
        "I_fdelta_sigma": I_fds,
        "I_f_sigma": I_fs,
        "rhs_integral": rhs_int,
        "M": sup.value,
    }
    rep = _mk_report(cid, ts.label, a, b, x, lam, "identity", "unit", lhs, rhs, sup.value, inter)
    if consistency:
        rep = _attach_general(rep, eval_weighted_ostrowski(scn, m_override=m_override))
    return rep


def _dense_d1(f, xs, lo, hi):
    if f.d1_vec is not None:
        return np.asarray(f.d1_vec(xs), dtype=float)
    h = np.minimum(1e-5 * (hi - lo), np.minimum(xs - lo, hi - xs))
    return (np.asarray(f.fn_vec(xs + h)) - np.asarray(f.fn_vec(xs - h))) / (2.0 * h)


def _general_scenario(ts, a, b, f, weight, psi, lam, x) -> Scenario:
    spec = KernelSpec(weight=weight, psi=psi, lam=lam, a=a, b=b, ts=ts)
    return Scenario(ts=ts, a=a, b=b, f=f, spec=spec, x=x)


def eval_corthm1(ts, a, b, f, lam, x, m_override=None, consistency=True):
    return _corthm1_like("corthm1", ts, a, b, f, lam, x, m_override, consistency)


def eval_corDB(ts, a, b, f, x, m_override=None, consistency=True):
    return _corthm1_like("corDB", ts, a, b, f, 0, x, m_override, consistency)


# ---------------------------------------------------------------------------
# continuous corollaries (independent classical integration via QUADPACK)
# ---------------------------------------------------------------------------

def _quad(fn, a, b, points=()):
    pts = sorted(p for p in points if a < p < b)
    val, _ = _scipy_quad(fn, a, b, points=pts or None, limit=400, epsabs=1e-12, epsrel=1e-12)
    return val


def _crossings_float(w, a, b, consts):
    out = []
    for c in consts:
        f0, f1 = w(a) - c, w(b) - c
        if f0 * f1 < 0.0:
            x0, x1 = a, b
            for _ in range(80):
                xm = 0.5 * (x0 + x1)
                if (w(xm) - c) * f0 <= 0.0:
                    x1 = xm
                else:
                    x0, f0 = xm, w(xm) - c
            out.append(0.5 * (x0 + x1))
    return out


def eval_cor1(a, b, f, w, nu, psi, lam, x, m_override=None, consistency=True):
    """Continuous second-order bound; f and w need analytic derivatives."""
    a_f, b_f, x_f = float(a), float(b), float(x)
    lam_f = float(lam)
    ph = float(phi_of(psi, lam_f))
    wf, nuf, ff = _fn(w), _fn(nu), _fn(f)
    f1 = f.d1 if isinstance(f, TsFunction) and f.d1 else None
    if f1 is None:
        raise HypothesisViolated("the continuous corollary needs an analytic f'")
    wa, wb = wf(a_f), wf(b_f)
    c1 = wa + psi(lam_f) * (wb - wa) / 2.0
    c2 = wa + (1 + psi(1 - lam_f)) * (wb - wa) / 2.0

    def K(t, branch_pt):
        return wf(t) - (c1 if t < branch_pt else c2)

    cross = _crossings_float(wf, a_f, b_f, (c1, c2))
    I_nu = _quad(nuf, a_f, b_f)
    I_K = _quad(lambda t: K(t, x_f), a_f, b_f, points=[x_f])
    I_nfd = _quad(lambda s: nuf(s) * f1(s), a_f, b_f)
    I_nf = _quad(lambda t: nuf(t) * ff(t), a_f, b_f)
    inner = lambda t: _quad(lambda s: abs(K(s, t)), a_f, b_f, points=[t, *cross])
    D = _quad(lambda t: abs(K(t, x_f)) * inner(t), a_f, b_f, points=[x_f, *cross])
    if m_override is not None:
        M = float(m_override)
    elif isinstance(f, TsFunction) and f.deriv_abs_max is not None:
        M = f.deriv_abs_max(2, a_f, b_f)
    else:
        raise HypothesisViolated("no way to bound |f''| for the continuous corollary")
    lhs = abs(
        ph * ph * ff(x_f)
        - I_K * I_nfd / I_nu ** 2
        + (psi(lam_f) * f1(a_f) + (1 - psi(1 - lam_f)) * f1(b_f)) / (2 * I_nu) * I_K
        - ph * I_nf / I_nu
        + (psi(lam_f) * ff(a_f) + (1 - psi(1 - lam_f)) * ff(b_f)) / 2 * ph
    )
    rhs = M * D / I_nu ** 2
    inter = {"I_nu": I_nu, "I_K": I_K, "I_nu_fprime": I_nfd, "I_nu_f": I_nf, "double_abs": D, "M": M}
    rep = _mk_report("cor1", f"R[{a},{b}]", a, b, x, lam, psi.label, getattr(w, "label", "w"), lhs, rhs, M, inter)
    if consistency:
        ts = TimeScale.reals(a, b)
        pair = WeightPair(nu=nu, w=w, kind="custom", label=getattr(w, "label", "w"))
        scn = _general_scenario(ts, a, b, f, pair, psi, lam, x)
        rep = _attach_general(rep, eval_weighted_ostrowski(scn, m_override=m_override))
    return rep


def eval_cor3(a, b, f, w, psi, lam, x, consistency=True):
    """Continuous Gruss bound; w carries the weight via its derivative."""
    a_f, b_f, x_f = float(a), float(b), float(x)
    lam_f = float(lam)
    span = b_f - a_f
    ph = float(phi_of(psi, lam_f))
    wf, ff = _fn(w), _fn(f)
    w1 = w.d1 if isinstance(w, TsFunction) and w.d1 else None
    f1 = f.d1 if isinstance(f, TsFunction) and f.d1 else None
    if w1 is None or f1 is None:
        raise HypothesisViolated("the continuous Gruss corollary needs analytic w' and f'")
    wa, wb = wf(a_f), wf(b_f)
    c1 = wa + psi(lam_f) * (wb - wa) / 2.0
    c2 = wa + (1 + psi(1 - lam_f)) * (wb - wa) / 2.0

    def K(t):
        return wf(t) - (c1 if t < x_f else c2)

    I_w1 = _quad(w1, a_f, b_f)
    I_w1f = _quad(lambda t: w1(t) * ff(t), a_f, b_f)
    I_K = _quad(K, a_f, b_f, points=[x_f])
    I_K2 = _quad(lambda t: K(t) ** 2, a_f, b_f, points=[x_f])
    I_f1 = _quad(f1, a_f, b_f)
    I_f12 = _quad(lambda t: f1(t) ** 2, a_f, b_f)
    lhs = abs(
        (ph * ff(x_f) + (psi(lam_f) * ff(a_f) + (1 - psi(1 - lam_f)) * ff(b_f)) / 2) * I_w1 / span
        - I_w1f / span
        - (ff(b_f) - ff(a_f)) * I_K / span ** 2
    )
    var_k = I_K2 / span - (I_K / span) ** 2
    var_f = I_f12 / span - (I_f1 / span) ** 2
    rhs, var_k, var_f = _gruss_rhs(var_k, var_f)
    inter = {"I_w1": I_w1, "I_w1_f": I_w1f, "I_K": I_K, "I_K2": I_K2, "var_K": var_k, "var_fprime": var_f}
    rep = _mk_report("cor3", f"R[{a},{b}]", a, b, x, lam, psi.label, getattr(w, "label", "w"), lhs, rhs, None, inter)
    if consistency:
        ts = TimeScale.reals(a, b)
        nu = TsFunction(fn=w1, label="w'", fn_vec=lambda xs: np.array([w1(float(v)) for v in xs]))
        pair = WeightPair(nu=nu, w=w, kind="custom", label=getattr(w, "label", "w"))
        scn = _general_scenario(ts, a, b, f, pair, psi, lam, x)
        rep = _attach_general(rep, eval_ostrowski_gruss(scn))
    return rep


# ---------------------------------------------------------------------------
# integer corollaries (plain sums; exact with rational inputs)
# ---------------------------------------------------------------------------

def eval_cor2(a, b, f, w, nu, psi, lam, x, m_override=None, consistency=True):
    """Integer second-order bound; f must be defined on a..b+1."""
    a, b, x = int(a), int(b), int(x)
    ff, wf, nuf = _fn(f), _fn(w), _fn(nu)
    ph = phi_of(psi, lam)
    wa, wb = wf(a), wf(b)
    c1 = wa + psi(lam) * half(wb - wa)
    c2 = wa + (1 + psi(1 - lam)) * half(wb - wa)
    K = lambda t: wf(t) - (c1 if t < x else c2)
    rng = range(a, b)
    S_nu = sum(nuf(t) for t in rng)
    S_K = sum(K(t) for t in rng)
    S_nfd = sum(nuf(s) * (ff(s + 2) - ff(s + 1)) for s in rng)
    S_nf = sum(nuf(t) * ff(t + 1) for t in rng)
    D = sum(abs(K(t)) * sum(abs(wf(s) - (c1 if s < t else c2)) for s in rng) for t in rng)
    if m_override is not None:
        M = m_override
    else:
        if b - a < 2:
            raise HypothesisViolated("no interior points to bound the second difference")
        M = max(abs(ff(t + 2) - 2 * ff(t + 1) + ff(t)) for t in range(a + 1, b))
    lhs = abs(
        ph * ph * ff(x)
        - exact_div(S_K * S_nfd, S_nu * S_nu)
        + exact_div(
            half(psi(lam) * (ff(a + 1) - ff(a)) + (1 - psi(1 - lam)) * (ff(b + 1) - ff(b))) * S_K,
            S_nu,
        )
        - exact_div(ph * S_nf, S_nu)
        + half(psi(lam) * ff(a) + (1 - psi(1 - lam)) * ff(b)) * ph
    )
    rhs = exact_div(M * D, S_nu * S_nu)
    inter = {"S_nu": S_nu, "S_K": S_K, "S_nu_fdelta_sigma": S_nfd, "S_nu_f_sigma": S_nf, "double_abs": D, "M": M}
    rep = _mk_report("cor2", f"Z[{a},{b}]", a, b, x, lam, psi.label, "custom", lhs, rhs, M, inter)
    if consistency:
        ts = TimeScale.integers(a, b + 1)
        fts = f if isinstance(f, TsFunction) else TsFunction(fn=ff, label="f")
        pair = WeightPair(
            nu=TsFunction(fn=nuf, label="nu"),
            w=TsFunction(fn=wf, label="w"),
            kind="custom",
            label="custom",
        )
        scn = _general_scenario(ts, a, b, fts, pair, psi, lam, x)
        rep = _attach_general(rep, eval_weighted_ostrowski(scn, m_override=m_override))
    return rep


def eval_cor4(a, b, f, w, psi, lam, x, consistency=True):
    """Integer Gruss bound via forward differences."""
    a, b, x = int(a), int(b), int(x)
    ff, wf = _fn(f), _fn(w)
    ph = phi_of(psi, lam)
    span = b - a
    wa, wb = wf(a), wf(b)
    c1 = wa + psi(lam) * half(wb - wa)
    c2 = wa + (1 + psi(1 - lam)) * half(wb - wa)
    K = lambda t: wf(t) - (c1 if t < x else c2)
    rng = range(a, b)
    dw = lambda t: wf(t + 1) - wf(t)
    df = lambda t: ff(t + 1) - ff(t)
    S_dw = sum(dw(t) for t in rng)
    S_dwf = sum(dw(t) * ff(t + 1) for t in rng)
    S_K = sum(K(t) for t in rng)
    S_K2 = sum(K(t) ** 2 for t in rng)
    S_df = sum(df(t) for t in rng)
    S_df2 = sum(df(t) ** 2 for t in rng)
    lhs = abs(
        exact_div((ph * ff(x) + half(psi(lam) * ff(a) + (1 - psi(1 - lam)) * ff(b))) * S_dw, span)
        - exact_div(S_dwf, span)
        - exact_div((ff(b) - ff(a)) * S_K, span * span)
    )
    var_k = exact_div(S_K2, span) - exact_div(S_K, span) ** 2
    var_f = exact_div(S_df2, span) - exact_div(S_df, span) ** 2
    exact_holds = _gruss_exact_holds(lhs, var_k, var_f)
    rhs, var_k, var_f = _gruss_rhs(var_k, var_f)
    inter = {"S_dw": S_dw, "S_K": S_K, "S_K2": S_K2, "var_K": var_k, "var_df": var_f}
    rep = _mk_report(
        "cor4", f"Z[{a},{b}]", a, b, x, lam, psi.label, "custom", lhs, rhs, None, inter, exact_holds
    )
    if consistency:
        ts = TimeScale.integers(a, b)
        fts = f if isinstance(f, TsFunction) else TsFunction(fn=ff, label="f")
        pair = WeightPair(
            nu=TsFunction(fn=dw, label="delta-w"),
            w=TsFunction(fn=wf, label="w"),
            kind="custom",
            label="custom",
        )
        scn = _general_scenario(ts, a, b, fts, pair, psi, lam, x)
        rep = _attach_general(rep, eval_ostrowski_gruss(scn))
    return rep


# ---------------------------------------------------------------------------
# quantum corollaries (q-sums with Jackson weights)
# ---------------------------------------------------------------------------

def _q_points(q, m, n):
    pts = [q ** j for j in range(m, n)]
    mus = [(q - 1) * q ** j for j in range(m, n)]
    return pts, mus


def eval_Ineqcor3(q, m, n, f, w, nu, psi, lam, x, m_override=None, consistency=True):
    """Quantum second-order bound; f must be defined up to q^(n+1)."""
    if not q > 1:
        raise HypothesisViolated("the quantum corollary needs q > 1")
    ff, wf, nuf = _fn(f), _fn(w), _fn(nu)
    ph = phi_of(psi, lam)
    a, b = q ** m, q ** n
    pts, mus = _q_points(q, m, n)
    wa, wb = wf(a), wf(b)
    c1 = wa + psi(lam) * half(wb - wa)
    c2 = wa + (1 + psi(1 - lam)) * half(wb - wa)
    K = lambda t, bp: wf(t) - (c1 if t < bp else c2)
    S_nu = sum(mu * nuf(t) for t, mu in zip(pts, mus))
    S_K = sum(mu * K(t, x) for t, mu in zip(pts, mus))
    S_nfd = sum(
        mu * nuf(t) * exact_div(ff(q * q * t) - ff(q * t), (q - 1) * q * t)
        for t, mu in zip(pts, mus)
    )
    S_nf = sum(mu * nuf(t) * ff(q * t) for t, mu in zip(pts, mus))
    D = sum(
        mu_j * abs(K(tj, x)) * sum(mu_i * abs(K(ti, tj)) for ti, mu_i in zip(pts, mus))
        for tj, mu_j in zip(pts, mus)
    )
    if m_override is not None:
        M = m_override
    else:
        if n - m < 2:
            raise HypothesisViolated("no interior points to bound the q-difference")
        M = max(
            exact_div(abs(ff(q * q * t) - (q + 1) * ff(q * t) + q * ff(t)), q * (q - 1) ** 2 * t * t)
            for t in (q ** j for j in range(m + 1, n))
        )
    term3_num = q ** n * psi(lam) * (ff(q ** (m + 1)) - ff(q ** m)) + q ** m * (
        1 - psi(1 - lam)
    ) * (ff(q ** (n + 1)) - ff(q ** n))
    lhs = abs(
        ph * ph * ff(x)
        - exact_div(S_K * S_nfd, S_nu * S_nu)
        + exact_div(term3_num, 2 * q ** (m + n) * (q - 1) * S_nu) * S_K
        - exact_div(ph * S_nf, S_nu)
        + half(psi(lam) * ff(a) + (1 - psi(1 - lam)) * ff(b)) * ph
    )
    rhs = exact_div(M * D, S_nu * S_nu)
    inter = {"S_nu": S_nu, "S_K": S_K, "S_nu_fdelta_sigma": S_nfd, "S_nu_f_sigma": S_nf, "double_abs": D, "M": M}
    rep = _mk_report("Ineqcor3", f"Q({q})[{m},{n}]", a, b, x, lam, psi.label, "custom", lhs, rhs, M, inter)
    if consistency:
        ts = TimeScale.qscale(q, m, n + 1)
        fts = f if isinstance(f, TsFunction) else TsFunction(fn=ff, label="f")
        pair = WeightPair(
            nu=TsFunction(fn=nuf, label="nu"),
            w=TsFunction(fn=wf, label="w"),
            kind="custom",
            label="custom",
        )
        scn = _general_scenario(ts, a, b, fts, pair, psi, lam, x)
        rep = _attach_general(rep, eval_weighted_ostrowski(scn, m_override=m_override))
    return rep


def eval_cor5(q, m, n, f, w, psi, lam, x, consistency=True):
    """Quantum Gruss bound."""
    if not q > 1:
        raise HypothesisViolated("the quantum corollary needs q > 1")
    ff, wf = _fn(f), _fn(w)
    ph = phi_of(psi, lam)
    a, b = q ** m, q ** n
    span = b - a
    pts, mus = _q_points(q, m, n)
    wa, wb = wf(a), wf(b)
    c1 = wa + psi(lam) * half(wb - wa)
    c2 = wa + (1 + psi(1 - lam)) * half(wb - wa)
    K = lambda t: wf(t) - (c1 if t < x else c2)
    dqw = lambda t: exact_div(wf(q * t) - wf(t), (q - 1) * t)
    dqf = lambda t: exact_div(ff(q * t) - ff(t), (q - 1) * t)
    S_dw = sum(mu * dqw(t) for t, mu in zip(pts, mus))
    S_dwf = sum(mu * dqw(t) * ff(q * t) for t, mu in zip(pts, mus))
    S_K = sum(mu * K(t) for t, mu in zip(pts, mus))
    S_K2 = sum(mu * K(t) ** 2 for t, mu in zip(pts, mus))
    S_df = sum(mu * dqf(t) for t, mu in zip(pts, mus))
    S_df2 = sum(mu * dqf(t) ** 2 for t, mu in zip(pts, mus))
    lhs = abs(
        exact_div((ph * ff(x) + half(psi(lam) * ff(a) + (1 - psi(1 - lam)) * ff(b))) * S_dw, span)
        - exact_div(S_dwf, span)
        - exact_div((ff(b) - ff(a)) * S_K, span * span)
    )
    var_k = exact_div(S_K2, span) - exact_div(S_K, span) ** 2
    var_f = exact_div(S_df2, span) - exact_div(S_df, span) ** 2
    exact_holds = _gruss_exact_holds(lhs, var_k, var_f)
    rhs, var_k, var_f = _gruss_rhs(var_k, var_f)
    inter = {"S_dqw": S_dw, "S_K": S_K, "S_K2": S_K2, "var_K": var_k, "var_dqf": var_f}
    rep = _mk_report(
        "cor5", f"Q({q})[{m},{n}]", a, b, x, lam, psi.label, "custom", lhs, rhs, None, inter, exact_holds
    )
    if consistency:
        ts = TimeScale.qscale(q, m, n)
        fts = f if isinstance(f, TsFunction) else TsFunction(fn=ff, label="f")
        pair = WeightPair(
            nu=TsFunction(fn=dqw, label="Dq-w"),
            w=TsFunction(fn=wf, label="w"),
            kind="custom",
            label="custom",
        )
        scn = _general_scenario(ts, a, b, fts, pair, psi, lam, x)
        rep = _attach_general(rep, eval_ostrowski_gruss(scn))
    return rep


# ---------------------------------------------------------------------------
# quadratic-weight Gruss corollaries (any scale)
# ---------------------------------------------------------------------------

def _corMR2_like(cid, ts, a, b, f, lam, x, consistency):
    span = b - a
    halfq = half(b * b - a * a)

    def K(t):
        if t < x:
            return t * t - a * a - lam * halfq
        return t * t - a * a - (2 - lam) * halfq

    def K_vec(xs, lo, hi):
        xs = np.asarray(xs, dtype=float)
        return np.where(
            xs < float(x),
            xs * xs - float(a * a) - float(lam * halfq),
            xs * xs - float(a * a) - float((2 - lam) * halfq),
        )

    nu_pt = lambda t: ts.sigma(t) + t
    nu_vec = lambda xs, lo, hi: 2.0 * np.asarray(xs, dtype=float)
    # branch zeros of K for quadrature breakpoints
    breaks = [x]
    for c in (a * a + lam * halfq, a * a + (2 - lam) * halfq):
        if c >= 0 and float(c) >= 0.0:
            r = math.sqrt(float(c))
            breaks.extend((r, -r))
    if a < 0:
        raise HypothesisViolated("sigma(t) + t must stay nonnegative: the window needs a >= 0")
    I = lambda p, d, br=(): delta_integral_parts(ts, p, d, a, b, breakpoints=br)
    S_nu = I(nu_pt, nu_vec)
    S_nf = I(
        lambda t: nu_pt(t) * f.fn(ts.sigma(t)),
        lambda xs, lo, hi: 2.0 * np.asarray(xs) * np.asarray(f.fn_vec(xs), dtype=float),
    )
    S_K = I(K, K_vec, breaks)
    S_K2 = I(lambda t: K(t) ** 2, lambda xs, lo, hi: K_vec(xs, lo, hi) ** 2, breaks)
    S_fd = I(
        lambda t: delta_derivative(ts, f, t, 1),
        lambda xs, lo, hi: _dense_d1(f, xs, lo, hi),
    )
    S_fd2 = I(
        lambda t: delta_derivative(ts, f, t, 1) ** 2,
        lambda xs, lo, hi: _dense_d1(f, xs, lo, hi) ** 2,
    )
    if cid == "corMR2-l0":
        sampled = exact_div(f.fn(x) * S_nu, span)
    else:
        sampled = exact_div(((1 - lam) * f.fn(x) + lam * half(f.fn(a) + f.fn(b))) * S_nu, span)
    lhs = abs(sampled - exact_div(S_nf, span) - exact_div((f.fn(b) - f.fn(a)) * S_K, span * span))
    var_k = exact_div(S_K2, span) - exact_div(S_K, span) ** 2
    var_f = exact_div(S_fd2, span) - exact_div(S_fd, span) ** 2
    exact_holds = _gruss_exact_holds(lhs, var_k, var_f)
    rhs, var_k, var_f = _gruss_rhs(var_k, var_f)
    inter = {"S_nu": S_nu, "S_K": S_K, "S_K2": S_K2, "var_K": var_k, "var_fdelta": var_f}
    rep = _mk_report(
        cid, ts.label, a, b, x, lam, "identity", "quadratic:0", lhs, rhs, None, inter, exact_holds
    )
    if consistency:
        scn = _general_scenario(ts, a, b, f, quadratic_weight(ts, 0), psi_identity(), lam, x)
        rep = _attach_general(rep, eval_ostrowski_gruss(scn))
    return rep


def eval_corMR2(ts, a, b, f, lam, x, consistency=True):
    return _corMR2_like("corMR2", ts, a, b, f, lam, x, consistency)


def eval_corMR2_l0(ts, a, b, f, x, consistency=True):
    return _corMR2_like("corMR2-l0", ts, a, b, f, 0, x, consistency)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_EVALUATORS = {
    "corthm1": eval_corthm1,
    "corDB": eval_corDB,
    "cor1": eval_cor1,
    "cor2": eval_cor2,
    "Ineqcor3": eval_Ineqcor3,
    "corMR2": eval_corMR2,
    "corMR2-l0": eval_corMR2_l0,
    "cor3": eval_cor3,
    "cor4": eval_cor4,
    "cor5": eval_cor5,
}


def eval_corollary(corollary_id: str, **params) -> InequalityReport:
    """Evaluate one named specialization on its native inputs."""
    try:
        fn = _EVALUATORS[corollary_id]
    except KeyError:
        raise UnknownCorollary(
            f"unknown corollary {corollary_id!r}; known: {', '.join(COROLLARY_IDS)}"
        ) from None
    return fn(**params)
