"""Scenario generation, sweeps, sharpness search, and the midpoint oracle.

A :class:`SweepPlan` expands deterministically (same plan + seed gives
the identical scenario list) into scenarios combining scales, functions,
weights, parameter functions, lambda values and branch points x.  The
sweep evaluates every scenario under every requested bound, records
per-scenario failures without aborting, and aggregates violations,
minimum slack and the maximum lhs/rhs ratio.

Discrete scale descriptors are read as windows on their natural ambient
lattice: a descriptor whose right edge is scattered gets two extra steps
appended beyond the window so the forward differences the bounds need at
the window's right end stay inside the scale.  The window itself (and
every integral and sup) is unchanged.

The sharpness search maximizes lhs/rhs over the (x, lambda) grid and
then refines the continuous coordinates by golden-section, reporting the
best ratio with its provenance; a ratio beyond 1 + tol is a reported
violation, which is the harness's most important output.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .calculus import delta_derivative
from .errors import (
    AllDegenerate,
    DegenerateWindow,
    DomainError,
    EmptyPlan,
    HypothesisViolated,
    MissingDerivative,
    NotDifferentiableHere,
    ParseError,
    PointNotInScale,
    TsineqError,
    ValidationError,
)
from .functions import TsFunction, parse_function_spec, table_function
from .inequalities import (
    CSV_FIELDS,
    InequalityReport,
    Scenario,
    TOL_INEQ_ABS,
    TOL_INEQ_REL,
    eval_first_order_ostrowski,
    eval_ostrowski_gruss,
    eval_weighted_ostrowski,
)
from .kernels import KernelSpec, parse_psi_spec, parse_weight_spec
from .quadrature import TOL_QUAD, midpoint_dense
from .timescale import TimeScale, parse_timescale

THEOREMS = ("IneqMR1", "IneqMR2", "Thm1.4")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

DEFAULT_LAMBDAS = tuple(Fraction(i, 10) for i in range(11))


def _skippable(exc: Exception) -> bool:
    return isinstance(
        exc,
        (
            DegenerateWindow,
            HypothesisViolated,
            NotDifferentiableHere,
            MissingDerivative,
            ValidationError,
            PointNotInScale,
            DomainError,
        ),
    )


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepPlan:
    """Deterministic description of a scenario sweep."""

    scales: tuple = ()
    functions: tuple = ()
    psis: tuple = ("identity",)
    lambdas: tuple = DEFAULT_LAMBDAS
    x_rule: str = "all"
    weights: tuple = ("unit",)
    theorems: tuple = ("IneqMR1",)
    n_random_scales: int = 0
    seed: int = 0
    max_scenarios: Optional[int] = None
    shuffle: bool = False
    fault: Optional[str] = None  # test fixture: kernel fault injection
    window: Optional[tuple] = None  # explicit [a, b] inside every scale

    def canonical(self) -> dict:
        return {
            "scales": list(self.scales),
            "functions": list(self.functions),
            "psis": list(self.psis),
            "lambdas": [str(l) for l in self.lambdas],
            "x_rule": self.x_rule,
            "weights": list(self.weights),
            "theorems": list(self.theorems),
            "n_random_scales": self.n_random_scales,
            "seed": self.seed,
            "max_scenarios": self.max_scenarios,
            "shuffle": self.shuffle,
            "fault": self.fault,
            "window": None if self.window is None else [str(v) for v in self.window],
        }

    @property
    def plan_hash(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def default_sweep_plan(
    theorems: Sequence[str] = THEOREMS,
    seed: int = 0,
    max_scenarios: Optional[int] = None,
) -> SweepPlan:
    """The shipped default plan: dense, integer, quantum and hybrid scales,
    polynomials up to degree 4, trig, random tables, three psi families,
    an 11-point lambda grid."""
    return SweepPlan(
        scales=(
            "R[0,1]",
            "R[-1,2]",
            "Z[0,9]",
            "Z[-3,6]",
            "Q(2)[0,5]",
            "Q(3)[0,4]",
            "U(R[0,1];2;3)",
            "U(0;R[1,2];3;4)",
            "U(0;1;R[2,3])",
            "U(-1;1/2;R[1,5/2])",
        ),
        functions=(
            "poly:0,1",
            "poly:0,0,1",
            "poly:1,-1,0,1",
            "poly:0,2,0,-1,1",
            "trig:1,1,0.5",
            "rand-table",
        ),
        psis=("identity", "power:2", "const:1/2"),
        lambdas=DEFAULT_LAMBDAS,
        x_rule="grid:3",
        theorems=tuple(theorems),
        n_random_scales=4,
        seed=seed,
        max_scenarios=max_scenarios,
        shuffle=max_scenarios is not None,
    )


# ---------------------------------------------------------------------------
# scenario generation
# ---------------------------------------------------------------------------

def _random_discrete_descriptor(rng: random.Random) -> str:
    count = rng.randint(4, 9)
    pts = sorted(rng.sample(range(-8, 13), count))
    return "U(" + ";".join(str(p) for p in pts) + ")"


def _random_hybrid_descriptor(rng: random.Random, dense_last: bool = False) -> str:
    """One dense interval with up to 5 scattered points, gaps >= 1/4.

    With ``dense_last`` the scattered points all precede the interval,
    which keeps smooth functions twice delta-differentiable on the window
    (no dense-to-gap junction where the first delta derivative jumps).
    """
    lo = Fraction(rng.randint(-16, 16), 4)
    length = Fraction(rng.randint(2, 8), 4)
    parts = [f"R[{lo},{lo + length}]"]
    t = lo
    for _ in range(rng.randint(1, 3)):
        t = t - Fraction(rng.randint(1, 4), 4)
        parts.insert(0, str(t))
    if not dense_last:
        t = lo + length
        for _ in range(rng.randint(1, 2)):
            t = t + Fraction(rng.randint(1, 4), 4)
            parts.append(str(t))
    return "U(" + ";".join(parts) + ")"


def extend_for_window(descriptor: str):
    """Parse a descriptor into (scale, window a, window b), appending two
    ambient steps past a scattered right edge so edge derivatives exist."""
    ts = parse_timescale(descriptor)
    a, b = ts.min, ts.max
    if ts.rho(b) == b:  # single point: nothing sensible to extend
        return ts, a, b
    if ts.classify(b).left_scattered is False:
        return ts, a, b
    d = descriptor.replace(" ", "")
    if d.startswith("Z["):
        inner = d[2:-1].split(",")
        ext = TimeScale.integers(int(inner[0]), int(inner[1]) + 2)
        return TimeScale(ext.segments, label=descriptor), a, b
    if d.startswith("Q("):
        qtxt, rest = d[2:].split(")[")
        mm, nn = rest[:-1].split(",")
        q = Fraction(qtxt)
        ext = TimeScale.qscale(int(q) if q.denominator == 1 else q, int(mm), int(nn) + 2)
        return TimeScale(ext.segments, label=descriptor), a, b
    gap = b - ts.rho(b)
    segs = list(ts.segments) + [(b + gap, b + gap), (b + 2 * gap, b + 2 * gap)]
    return TimeScale(segs, label=descriptor), a, b


def _x_candidates(ts: TimeScale, a, b, x_rule: str) -> list:
    if x_rule.startswith("grid:"):
        per_piece = int(x_rule.split(":", 1)[1])
    elif x_rule == "all":
        per_piece = 5
    else:
        return [Fraction(tok) for tok in x_rule.split(",")]
    xs = list(ts.scattered_in(a, b, open_interval=True))
    for lo, hi in ts.dense_pieces(a, b):
        for k in range(1, per_piece + 1):
            xs.append(lo + (hi - lo) * Fraction(k, per_piece + 1))
    return sorted(set(xs))


def _random_table(rng: random.Random, ts: TimeScale) -> TsFunction:
    values = {}
    for lo, hi in ts.segments:
        values[lo] = Fraction(rng.randint(-12, 12), rng.choice((1, 2, 3, 4)))
    return table_function(values, label=f"rand-table:{len(values)}")


def generate_scenarios(plan: SweepPlan):
    """Expand a plan into validated scenarios.

    Returns ``(scenarios, n_filtered)`` where the filtered count tallies
    combinations rejected by the hypothesis filter (degenerate windows,
    undefined derivatives, incompatible weight/scale pairs, dense scales
    with table functions).
    """
    if not plan.scales and plan.n_random_scales == 0:
        raise EmptyPlan("plan names no scales")
    if not plan.functions:
        raise EmptyPlan("plan names no functions")
    rng = random.Random(plan.seed)
    descriptors = list(plan.scales)
    for i in range(plan.n_random_scales):
        if i % 3 == 0:
            descriptors.append(_random_discrete_descriptor(rng))
        else:
            descriptors.append(_random_hybrid_descriptor(rng, dense_last=i % 3 == 1))

    need_order = 2 if any(t in ("IneqMR1",) for t in plan.theorems) else 1
    need_m = any(t in ("IneqMR1", "Thm1.4") for t in plan.theorems)

    scenarios = []
    filtered = 0
    for descriptor in descriptors:
        ts, a, b = extend_for_window(descriptor)
        if plan.window is not None:
            a, b = plan.window
            if not (ts.contains(a) and ts.contains(b)):
                raise ValidationError(
                    f"window [{a}, {b}] endpoints are not points of {descriptor}"
                )
        if a == b:
            filtered += 1
            continue
        for weight_spec in plan.weights:
            try:
                weight = parse_weight_spec(weight_spec, ts)
                weight.validate(ts, a, b)
            except TsineqError:
                filtered += 1
                continue
            for fn_spec in plan.functions:
                if fn_spec == "rand-table":
                    if not ts.is_discrete_window(a, b):
                        filtered += 1
                        continue
                    f = _random_table(rng, ts)
                else:
                    f = parse_function_spec(fn_spec)
                for psi_spec in plan.psis:
                    psi = parse_psi_spec(psi_spec)
                    for lam in plan.lambdas:
                        for x in _x_candidates(ts, a, b, plan.x_rule):
                            try:
                                spec = KernelSpec(
                                    weight=weight,
                                    psi=psi,
                                    lam=lam,
                                    a=a,
                                    b=b,
                                    ts=ts,
                                    fault=plan.fault,
                                )
                                scn = Scenario(ts=ts, a=a, b=b, f=f, spec=spec, x=x)
                                scn.validate(order=need_order, need_m=need_m)
                            except Exception as exc:
                                if _skippable(exc):
                                    filtered += 1
                                    continue
                                raise
                            scenarios.append(scn)
    if plan.shuffle:
        random.Random(plan.seed + 1).shuffle(scenarios)
    if plan.max_scenarios is not None:
        scenarios = scenarios[: plan.max_scenarios]
    return scenarios, filtered


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

_DISPATCH: dict[str, Callable] = {
    "IneqMR1": eval_weighted_ostrowski,
    "IneqMR2": eval_ostrowski_gruss,
    "Thm1.4": eval_first_order_ostrowski,
}


def evaluate_theorem(theorem_id: str, scn: Scenario, **kwargs) -> InequalityReport:
    try:
        fn = _DISPATCH[theorem_id]
    except KeyError:
        raise ValidationError(
            f"unknown theorem {theorem_id!r}; known: {', '.join(THEOREMS)}"
        ) from None
    return fn(scn, **kwargs)


@dataclass(frozen=True)
class ReportSet:
    """All reports of one sweep plus the aggregate summary."""

    plan_hash: str
    reports: tuple
    errors: tuple
    n_scenarios: int
    n_filtered: int
    tol_quad: float = TOL_QUAD

    @property
    def n_violations(self) -> int:
        return sum(1 for r in self.reports if not r.holds)

    @property
    def min_slack(self) -> float:
        return min((float(r.slack) for r in self.reports), default=float("nan"))

    @property
    def max_ratio(self) -> float:
        return max(
            (float(r.lhs) / max(float(r.rhs), self.tol_quad) for r in self.reports),
            default=float("nan"),
        )

    def summary(self) -> dict:
        return {
            "plan_hash": self.plan_hash,
            "n_scenarios": self.n_scenarios,
            "n_violations": self.n_violations,
            "min_slack": self.min_slack,
            "max_ratio": self.max_ratio,
        }

    def to_csv(self) -> str:
        lines = [",".join(CSV_FIELDS)]
        for rep in self.reports:
            lines.append(",".join(rep.to_csv_row()))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.to_csv())

    def write_json_summary(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, sort_keys=True, indent=2)
            fh.write("\n")


def run_sweep(
    plan: SweepPlan,
    jobs: int = 1,
    tol_quad: float = TOL_QUAD,
    tol_abs: float = TOL_INEQ_ABS,
    tol_rel: float = TOL_INEQ_REL,
) -> ReportSet:
    """Evaluate every scenario under every plan theorem.

    Per-scenario failures are recorded and never abort the sweep; the
    report order (and hence the CSV) is a pure function of the plan.
    """
    scenarios, filtered = generate_scenarios(plan)
    tasks = [(theorem, scn) for theorem in plan.theorems for scn in scenarios]

    def run(task):
        theorem, scn = task
        try:
            return (
                evaluate_theorem(
                    theorem, scn, tol_quad=tol_quad, tol_abs=tol_abs, tol_rel=tol_rel
                ),
                None,
            )
        except Exception as exc:  # recorded, not raised
            return None, (theorem, scn.scenario_id, f"{type(exc).__name__}: {exc}")

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, tasks))
    else:
        outcomes = [run(t) for t in tasks]
    reports = []
    errors = []
    for rep, err in outcomes:
        if rep is not None:
            reports.append(rep)
        else:
            errors.append(err)
    reports.sort(key=lambda r: (r.theorem_id, r.scale, str(r.a), str(r.b), r.psi, r.weight, str(r.lam), str(r.x)))
    return ReportSet(
        plan_hash=plan.plan_hash,
        reports=tuple(reports),
        errors=tuple(sorted(errors)),
        n_scenarios=len(scenarios),
        n_filtered=filtered,
        tol_quad=tol_quad,
    )


# ---------------------------------------------------------------------------
# sharpness search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharpnessResult:
    best_ratio: float
    argmax: tuple  # (x, lambda, scenario_id)
    trace: tuple   # ((iteration, ratio), ...)


def _golden_max(fn, lo: float, hi: float, iters: int = 30):
    """Golden-section maximization of fn over [lo, hi]; returns (x, fn(x))."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    best = max((fc, c), (fd, d))
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
            best = max(best, (fc, c))
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
            best = max(best, (fd, d))
    return best[1], best[0]


def sharpness_search(
    plan: SweepPlan,
    theorem_id: str,
    tol_quad: float = TOL_QUAD,
    refine_iters: int = 25,
) -> SharpnessResult:
    """Maximize lhs/rhs over the plan's scenarios, refining x and lambda.

    The rhs is floored at ``tol_quad`` in the ratio to avoid division
    blowup; :class:`AllDegenerate` is raised when every rhs is below the
    floor.  Golden-section refinement applies only to continuous
    coordinates: lambda always, x when it lies in a dense segment.
    """
    scenarios, _ = generate_scenarios(plan)
    if not scenarios:
        raise EmptyPlan("no scenarios to search")
    trace: list[tuple[int, float]] = []
    counter = [0]
    nondegenerate = [False]

    def ratio_of(scn: Scenario) -> float:
        try:
            rep = evaluate_theorem(theorem_id, scn, tol_quad=tol_quad)
        except Exception as exc:
            if _skippable(exc):
                return float("-inf")
            raise
        rhs = float(rep.rhs)
        if rhs > tol_quad:
            nondegenerate[0] = True
        value = float(rep.lhs) / max(rhs, tol_quad)
        counter[0] += 1
        trace.append((counter[0], value))
        return value

    best = (float("-inf"), None)
    for scn in scenarios:
        r = ratio_of(scn)
        if r > best[0]:
            best = (r, scn)
    if not nondegenerate[0]:
        raise AllDegenerate("every right-hand side is below the tolerance floor")
    best_scn = best[1]

    def rebuilt(x=None, lam=None) -> Scenario:
        spec = best_scn.spec
        new_spec = KernelSpec(
            weight=spec.weight,
            psi=spec.psi,
            lam=spec.lam if lam is None else lam,
            a=spec.a,
            b=spec.b,
            ts=spec.ts,
            fault=spec.fault,
        )
        return Scenario(
            ts=best_scn.ts,
            a=best_scn.a,
            b=best_scn.b,
            f=best_scn.f,
            spec=new_spec,
            x=best_scn.x if x is None else x,
        )

    # refine lambda over its neighborhood in [0, 1]
    lams = sorted(float(l) for l in plan.lambdas)
    lam0 = float(best_scn.spec.lam)
    idx = lams.index(lam0) if lam0 in lams else 0
    lo = lams[max(0, idx - 1)]
    hi = lams[min(len(lams) - 1, idx + 1)]
    if hi > lo:
        lam_star, r_lam = _golden_max(lambda l: ratio_of(rebuilt(lam=l)), lo, hi, refine_iters)
        if r_lam > best[0]:
            best = (r_lam, rebuilt(lam=lam_star))
            best_scn = best[1]

    # refine x when it lies strictly inside a dense piece
    xf = float(best_scn.x)
    for lo_p, hi_p in best_scn.ts.dense_pieces(best_scn.a, best_scn.b):
        lo_f, hi_f = float(lo_p), float(hi_p)
        if lo_f < xf < hi_f:
            others = sorted(float(x) for x in _x_candidates(best_scn.ts, best_scn.a, best_scn.b, plan.x_rule))
            left = max([v for v in others if v < xf], default=lo_f)
            right = min([v for v in others if v > xf], default=hi_f)
            lo_b = max(lo_f, left)
            hi_b = min(hi_f, right)
            if hi_b > lo_b:
                x_star, r_x = _golden_max(
                    lambda x: ratio_of(rebuilt(x=x)), lo_b, hi_b, refine_iters
                )
                if r_x > best[0]:
                    best = (r_x, rebuilt(x=x_star))
            break

    best_ratio = max(r for _, r in trace)
    final = best[1]
    return SharpnessResult(
        best_ratio=best_ratio,
        argmax=(final.x, final.spec.lam, final.scenario_id),
        trace=tuple(trace),
    )


# ---------------------------------------------------------------------------
# midpoint oracle
# ---------------------------------------------------------------------------

def reference_integral(ts: TimeScale, f: TsFunction, a, b, level: int = 12):
    """Independent oracle for the delta integral: exact scattered sums plus
    a non-adaptive composite midpoint rule with 2^level panels per dense
    piece.  Converges at O(4^-level) for smooth dense parts."""
    if level < 1:
        raise DomainError("level must be >= 1")
    total = 0
    dense = 0.0
    has_dense = False
    for atom in ts.measure_atoms(a, b):
        if atom[0] == "pt":
            _, t, mu = atom
            total = total + mu * f.fn(t)
        else:
            _, lo, hi = atom
            dense += midpoint_dense(f.fn_vec, lo, hi, 2 ** level)
            has_dense = True
    if not has_dense:
        return total
    return float(total) + dense
