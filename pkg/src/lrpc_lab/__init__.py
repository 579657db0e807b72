"""LRPC decoding lab: decoder, exact failure bounds, Monte Carlo validation."""

from .field import FieldContext, is_irreducible, make_field
from .linalg import (
    Subspace,
    gaussian_binomial,
    intersect,
    product_space,
    rref,
    sample_grassmannian,
    scale_subspace,
    solve,
    support,
)
from .lrpc import (
    DecodeOutcome,
    FailureReason,
    LrpcInstance,
    LrpcParams,
    decode,
    recover_coordinates,
    recover_support,
    sample_instance,
    syndrome,
    validate_params,
)
from .bounds import (
    BoundValue,
    asymptotic_bound,
    intersection_bound,
    legacy_bounds,
    lemma_bound,
    product_dim_bound,
    span_bound,
    span_bound_simplified,
    total_bound,
)
from .sim import (
    SimulationReport,
    TrialOutcome,
    clopper_pearson,
    lemma_oracle,
    run_simulation,
    run_trial,
    syndrome_uniformity_test,
)

__version__ = "0.1.0"
