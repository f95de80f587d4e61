"""Numerical laboratory for graded seminorms, metric P-norms, and
oscillatory-probe falsification of uniform directional-derivative
estimates on smooth-function spaces."""

from .driver import (
    DegenerateMapError,
    GrowthRecord,
    PrecisionBudgetError,
    ProbeParams,
    SweepResult,
    build_probe,
    estimate_residual_bound,
    find_s0,
    find_t0,
    fix_m,
    growth_sweep,
    residual_tz,
)
from .functions import (
    PERIODIC,
    UNIT_INTERVAL,
    GridSpec,
    SmoothFunction,
    constant,
    evaluate,
    jet_at,
    probe,
    probe_deriv_closed_form,
    seminorm_p,
    seminorm_profile,
    zero,
)
from .jets import MAX_ORDER, TaylorJet, deriv_from_jet, jet_add, jet_compose, jet_mul
from .maps import (
    CirclePullback,
    DomainViolation,
    PostComposition,
    SampledFunction,
    gateaux_fd,
)
from .primitives import (
    AffineMap,
    Cos,
    Exp,
    IdentityPlusExp,
    Polynomial,
    ScalarPrimitive,
    Sin,
    Tanh,
)
from .tameness import PNormSpec, TameCheckReport, check_tame_estimate, pnorm_eval

__version__ = "0.1.0"
