"""Numerical toolkit for weighted subspace decompositions.

Core objects: weighted subspace families, their synthesis and frame
operators, operator-relative optimal bounds, and checkers that verify
bound-transfer statements against independently computed optima.
"""

from .errors import (
    AdmissibilityFailed,
    BlockOutsideSubspace,
    DeficientLocalFrame,
    DimensionMismatch,
    FramekitError,
    HypothesisFailed,
    IllConditionedSplit,
    InvalidConfig,
    LocalVectorOutsideSubspace,
    NotAFusionFrame,
    NotHermitian,
    NotPSD,
    NotSquare,
    OracleMismatch,
    ZeroDrazin,
)
from .frame_core import (
    BlockVector,
    FrameBounds,
    VectorFrame,
    WeightedSubspaceFamily,
    frame_bounds,
    frame_operator,
    fusion_analysis,
    fusion_bounds,
    fusion_operator,
    fusion_synthesis,
    fusion_synthesis_matrix,
    lift_local_frames,
    reconstruct,
)
from .instances import (
    GenSpec,
    Instance,
    PerturbedPair,
    THEOREM_IDS,
    build_instance,
    check_instance,
    default_suite_entries,
    gen_operator,
    gen_operator_pair,
    gen_perturbed_pair,
    spanning_family,
    spoiler_suite_entries,
)
from .kfusion import (
    KFusionInstance,
    KFusionVerdict,
    SampleReport,
    decide,
    k_lower_bound,
    verify_k_fusion,
)
from .numerics import (
    DouglasReport,
    Subspace,
    douglas_check,
    drazin,
    hermitian_eig,
    max_psd_scale,
    operator_norm,
    pinv,
    projection_lemma_check,
    projector,
    psd_scale_bisection,
    range_basis,
)
from .theorems import (
    LambdaKind,
    PerturbationConstants,
    TheoremReport,
    check_drazin,
    check_erasure,
    check_image_under_k,
    check_operator_perturbation,
    check_projection_perturbation,
    check_quadratic_perturbation,
    check_synthesis_perturbation,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityFailed",
    "BlockOutsideSubspace",
    "BlockVector",
    "DeficientLocalFrame",
    "DimensionMismatch",
    "DouglasReport",
    "FrameBounds",
    "FramekitError",
    "GenSpec",
    "HypothesisFailed",
    "IllConditionedSplit",
    "Instance",
    "InvalidConfig",
    "KFusionInstance",
    "KFusionVerdict",
    "LambdaKind",
    "LocalVectorOutsideSubspace",
    "NotAFusionFrame",
    "NotHermitian",
    "NotPSD",
    "NotSquare",
    "OracleMismatch",
    "PerturbationConstants",
    "PerturbedPair",
    "SampleReport",
    "Subspace",
    "THEOREM_IDS",
    "TheoremReport",
    "VectorFrame",
    "WeightedSubspaceFamily",
    "ZeroDrazin",
    "build_instance",
    "check_drazin",
    "check_erasure",
    "check_image_under_k",
    "check_instance",
    "check_operator_perturbation",
    "check_projection_perturbation",
    "check_quadratic_perturbation",
    "check_synthesis_perturbation",
    "decide",
    "default_suite_entries",
    "douglas_check",
    "drazin",
    "frame_bounds",
    "frame_operator",
    "fusion_analysis",
    "fusion_bounds",
    "fusion_operator",
    "fusion_synthesis",
    "fusion_synthesis_matrix",
    "gen_operator",
    "gen_operator_pair",
    "gen_perturbed_pair",
    "hermitian_eig",
    "k_lower_bound",
    "lift_local_frames",
    "max_psd_scale",
    "operator_norm",
    "pinv",
    "projection_lemma_check",
    "projector",
    "psd_scale_bisection",
    "range_basis",
    "reconstruct",
    "spanning_family",
    "spoiler_suite_entries",
    "verify_k_fusion",
]
