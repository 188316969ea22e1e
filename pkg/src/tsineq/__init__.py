"""Calculus on time scales with numerical verification of weighted
Ostrowski and Ostrowski-Gruss bounds.

The package models finitely described time scales (unions of closed
intervals and scattered points), implements the delta calculus on them
(jump operators, delta derivatives and integrals, generalized h_k
monomials), builds the weighted Peano kernels driven by a parameter
function, and evaluates both sides of the associated second-order,
Gruss-type and first-order bounds, reporting slack and searching for
sharpness.  Purely discrete windows with rational data evaluate in exact
rational arithmetic.
"""

from .calculus import (
    backward_jump,
    delta_derivative,
    delta_integral,
    forward_jump,
    graininess,
    h_monomial,
    h_monomial_recursive,
)
from .corollaries import COROLLARY_IDS, eval_corollary
from .errors import (
    AllDegenerate,
    DegenerateWindow,
    DomainError,
    EmptyPlan,
    EndpointNotInScale,
    HypothesisViolated,
    MissingDerivative,
    NotDifferentiableHere,
    ParseError,
    PointNotInScale,
    QuadratureFailure,
    TsineqError,
    UnboundedSuspicion,
    UnknownCorollary,
    ValidationError,
    VariantMismatch,
)
from .functions import (
    TsFunction,
    constant_function,
    identity_function,
    parse_function_spec,
    poly_function,
    table_function,
    trig_function,
)
from .harness import (
    ReportSet,
    SharpnessResult,
    SweepPlan,
    default_sweep_plan,
    generate_scenarios,
    reference_integral,
    run_sweep,
    sharpness_search,
)
from .inequalities import (
    InequalityReport,
    Scenario,
    SupBound,
    estimate_M,
    eval_first_order_ostrowski,
    eval_ostrowski_gruss,
    eval_weighted_ostrowski,
    montgomery_residual,
)
from .kernels import (
    KernelSpec,
    ParameterFunction,
    WeightPair,
    kernel_moments_h2,
    parse_psi_spec,
    parse_weight_spec,
    peano_kernel,
    phi,
    psi_clamp,
    psi_constant,
    psi_identity,
    psi_power,
    psi_table,
    quadratic_weight,
    table_weight,
    unit_weight,
)
from .timescale import ScalePoint, TimeScale, parse_timescale

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
