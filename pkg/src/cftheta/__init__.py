"""Continued fractions, approximation coefficients, and their symmetry.

The package computes continued-fraction expansions with rigorous precision
control (exact quadratic surds, outward-rounded interval reals), the
approximation coefficients theta_n = q_n^2*|x - p_n/q_n| by two
independent routes, and -- the centerpiece -- recovery of the partial
quotients and the entire coefficient sequence from a single pair of
consecutive coefficients.
"""

from .errors import (
    CrossCheckFailure,
    DomainError,
    InsufficientPrecision,
    PrecisionExhausted,
    RegionViolation,
)
from .exactreal import (
    BigRational,
    DEFAULT_CONTEXT,
    Dyadic,
    PrecisionContext,
    QuadraticSurd,
    RigorousReal,
    as_interval,
    certainly_gt,
    certainly_lt,
    exact_floor,
    exact_sqrt,
    floor_checked,
    squarefree_split,
    surd_recip_shift,
)
from .cfengine import (
    ContinuedFractionState,
    detect_period,
    expand,
    expand_states,
    gauss_step,
    natural_extension_step,
    past_of_prefix,
)
from .jager import (
    DynamicPair,
    GammaCertificate,
    JagerPair,
    ThetaValue,
    in_gamma,
    jager_pairs,
    psi,
    psi_inv,
    theta_by_definition,
    theta_by_perron,
    theta_next_by_perron,
    theta_sequence,
)
from .symmetry import (
    Direction,
    ReconstructionResult,
    RecoveredDigit,
    ThetaPair,
    digit_from_pair,
    digit_sequence_from_thetas,
    dk_step,
    reconstruct,
    step,
)
from .oracle import OracleEntry, OracleReport, brute_theta, crosscheck
from .fixtures import FIXTURES, PI_MINUS_3, fixture_decimal

__version__ = "0.1.0"

__all__ = [
    "BigRational",
    "ContinuedFractionState",
    "CrossCheckFailure",
    "DEFAULT_CONTEXT",
    "Direction",
    "DomainError",
    "Dyadic",
    "DynamicPair",
    "FIXTURES",
    "GammaCertificate",
    "InsufficientPrecision",
    "JagerPair",
    "OracleEntry",
    "OracleReport",
    "PI_MINUS_3",
    "PrecisionContext",
    "PrecisionExhausted",
    "QuadraticSurd",
    "ReconstructionResult",
    "RecoveredDigit",
    "RegionViolation",
    "RigorousReal",
    "ThetaPair",
    "ThetaValue",
    "as_interval",
    "brute_theta",
    "certainly_gt",
    "certainly_lt",
    "crosscheck",
    "detect_period",
    "digit_from_pair",
    "digit_sequence_from_thetas",
    "dk_step",
    "exact_floor",
    "exact_sqrt",
    "expand",
    "expand_states",
    "fixture_decimal",
    "floor_checked",
    "gauss_step",
    "in_gamma",
    "jager_pairs",
    "natural_extension_step",
    "past_of_prefix",
    "psi",
    "psi_inv",
    "reconstruct",
    "squarefree_split",
    "step",
    "surd_recip_shift",
    "theta_by_definition",
    "theta_by_perron",
    "theta_next_by_perron",
    "theta_sequence",
]
