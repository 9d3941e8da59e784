"""Contextuality, Kochen-Specker colorability, and infinite-tensor-product
sector numerics, with a REST service and a CLI front-end."""

__version__ = "0.1.0"

from .config import DEFAULT_TOLERANCES, Tolerances, load_tolerances
from .contextuality import (
    Context,
    KSInstance,
    Modality,
    ProbabilityAssignment,
    ValueAssignment,
    born_assignment,
    born_probability,
    context_from_observable,
    contexts_containing,
    extravalent,
    ks_colorability,
    ks_colorings,
    modality,
    verify_frame_function,
)
from .linalg import Ray, inner, kron, spectral
from .measurement import (
    BranchState,
    CascadeConfig,
    cascade_step,
    coherence_curve,
    premeasure,
    sample_outcome,
)
from .operators import (
    Product,
    Scale,
    SiteOp,
    Sum,
    identity_expr,
    intersector_decay,
    matrix_element,
    sector_block_report,
)
from .sequences import (
    ConstantTail,
    LogAmplitude,
    PeriodicTail,
    PowerLawTail,
    ProductStateSpec,
    SequenceSpec,
    classify_product,
    orthogonalization_curve,
    same_sector,
    truncated_overlap,
)
