"""Built-in desk-case table with frozen expected values.

Each case pins a quantity that was derived by an independent route
(closed-form integration, exhaustive finite sums, or falling-factorial
algebra) when this package was built.  ``tsineq selftest`` runs the
table and prints one PASS/FAIL line per case.
"""

from __future__ import annotations

from fractions import Fraction

from .calculus import delta_derivative, delta_integral, h_monomial
from .functions import poly_function
from .inequalities import (
    Scenario,
    estimate_M,
    eval_first_order_ostrowski,
    eval_ostrowski_gruss,
    eval_weighted_ostrowski,
    montgomery_residual,
)
from .kernels import KernelSpec, kernel_moments_h2, peano_kernel, phi, psi_identity, unit_weight
from .timescale import TimeScale

_T2 = poly_function([0, 0, 1])
_T1 = poly_function([0, 1])


def _scn(ts, a, b, x, lam=0):
    spec = KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=lam, a=a, b=b, ts=ts)
    return Scenario(ts=ts, a=a, b=b, f=_T2, spec=spec, x=x)


def _close(got, want, tol=1e-9):
    return abs(float(got) - float(want)) <= tol


def selftest_cases():
    Z = TimeScale.integers(0, 8)
    R = TimeScale.reals(0, 1)
    Q2 = TimeScale.qscale(2, 0, 5)

    def case(name, fn):
        return (name, fn)

    return [
        case("sigma on the integer lattice", lambda: Z.sigma(3) == 4),
        case("graininess on the quantum lattice", lambda: Q2.mu(4) == 4),
        case("first delta derivative of t^2 on Z", lambda: delta_derivative(Z, _T2, 3, 1) == 7),
        case("second delta derivative of t^2 on Z", lambda: delta_derivative(Z, _T2, 3, 2) == 2),
        case("first delta derivative of t^2 on Q(2)", lambda: delta_derivative(Q2, _T2, 2, 1) == 6),
        case("delta integral of t over Z[0,3]", lambda: delta_integral(Z, _T1, 0, 3) == 3),
        case("delta integral of t over R[0,1]", lambda: _close(delta_integral(R, _T1, 0, 1), 0.5)),
        case("delta integral of t over Q(2)[1,4]", lambda: delta_integral(Q2, _T1, 1, 4) == 5),
        case("h_0 is identically one", lambda: h_monomial(Z, 0, 5, 1) == 1),
        case("h_2 on the reals", lambda: h_monomial(R, 2, 1, 0) == Fraction(1, 2)),
        case("h_2 on the integers", lambda: h_monomial(Z, 2, 3, 0) == 3),
        case("phi at lambda=0", lambda: phi(psi_identity(), 0) == 1),
        case("phi at lambda=1", lambda: phi(psi_identity(), 1) == 0),
        case("phi at lambda=1/2", lambda: phi(psi_identity(), Fraction(1, 2)) == Fraction(1, 2)),
        case(
            "kernel first branch",
            lambda: _close(
                peano_kernel(
                    KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=0, a=0, b=1),
                    0.3,
                    0.5,
                ),
                0.3,
            ),
        ),
        case(
            "kernel second branch",
            lambda: _close(
                peano_kernel(
                    KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=0, a=0, b=1),
                    0.7,
                    0.5,
                ),
                -0.3,
            ),
        ),
        case(
            "kernel branch collapse at lambda=1",
            lambda: _close(
                peano_kernel(
                    KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=1, a=0, b=1),
                    0.3,
                    0.6,
                ),
                -0.2,
            ),
        ),
        case(
            "h_2 kernel moments at the midpoint",
            lambda: kernel_moments_h2(
                KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=0, a=0, b=1, ts=R),
                Fraction(1, 2),
            )
            == (Fraction(1, 4), 0),
        ),
        case(
            "h_2 kernel moments at the right end",
            lambda: kernel_moments_h2(
                KernelSpec(weight=unit_weight(), psi=psi_identity(), lam=0, a=0, b=1, ts=R),
                1,
            )
            == (Fraction(1, 2), Fraction(1, 2)),
        ),
        case(
            "second-order bound, dense desk case",
            lambda: (
                lambda rep: _close(rep.lhs, Fraction(1, 12)) and _close(rep.rhs, Fraction(7, 48))
            )(eval_weighted_ostrowski(_scn(R, 0, 1, 0.5))),
        ),
        case(
            "Gruss bound, dense desk case",
            lambda: (
                lambda rep: _close(rep.lhs, Fraction(1, 12)) and _close(rep.rhs, Fraction(1, 6))
            )(eval_ostrowski_gruss(_scn(R, 0, 1, 0.5))),
        ),
        case(
            "first-order bound, dense desk case",
            lambda: (
                lambda rep: _close(rep.lhs, Fraction(1, 12)) and _close(rep.rhs, Fraction(1, 2))
            )(eval_first_order_ostrowski(_scn(R, 0, 1, 0.5))),
        ),
        case(
            "kernel identity exact on the integers",
            lambda: montgomery_residual(_scn(Z, 0, 2, 1)) == 0,
        ),
        case("sup bound of t^2 on the reals", lambda: estimate_M(_scn(R, 0, 1, 0.5)).value == 2),
        case("sup bound of t^2 on the integers", lambda: estimate_M(_scn(Z, 0, 4, 2)).value == 2),
        case("sup bound of t^2 on Q(2)", lambda: estimate_M(_scn(Q2, 1, 8, 2)).value == 3),
    ]


def run_selftest(verbose: bool = True) -> int:
    """Run every desk case; returns 0 when all pass, 2 otherwise."""
    failures = 0
    for name, fn in selftest_cases():
        try:
            ok = bool(fn())
        except Exception as exc:
            ok = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        if verbose:
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1
    if verbose:
        total = len(selftest_cases())
        print(f"{total - failures}/{total} desk cases passed")
    return 0 if failures == 0 else 2
