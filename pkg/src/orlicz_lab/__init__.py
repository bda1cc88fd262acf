"""Numerical laboratory for Orlicz ball geometry, Lagrangian-product capacities,
and explicit area-preserving embeddings with full verification."""

__version__ = "0.1.0"

from .errors import (
    ConfigError,
    ContainmentViolation,
    InfeasibleConstraints,
    LabError,
    NegativeArgument,
    NoConvergence,
    NonMonotoneFamily,
    NotSupported,
    OutOfDomain,
    SeamProximity,
    UnboundedConjugate,
)
from .young import (
    ConjugateFunction,
    Exp,
    Polynomial,
    Power,
    Scaled,
    ScaledExp,
    YoungFunction,
    biconjugate_value,
    conjugate,
    conjugate_inverse,
    conjugate_value_numeric,
    from_json_dict,
    standard_registry,
    validate_young,
    young_gap,
)
from .bodies import (
    BodyHandle,
    YoungTuple,
    amemiya_norm,
    boundary_section,
    conjugate_ball,
    luxemburg_norm,
    orlicz_ball,
    polar_dual,
    support,
    volume_mc,
)
from .capacity import (
    CapacityReport,
    GridSpec,
    capacity_dual_product,
    capacity_polar_bounds,
    capacity_report,
    index_products,
    inequality_suite,
    mahler_chain,
    strong_viterbo_check,
)
from .embedding import (
    EmbeddingSpec,
    ProductMap,
    SigmaMap,
    build_product,
    build_sigma,
    embed_report,
    feasibility_certificate,
    verify_containment_dual,
    verify_containment_polar,
)

__all__ = [
    "BodyHandle",
    "CapacityReport",
    "ConfigError",
    "ConjugateFunction",
    "ContainmentViolation",
    "EmbeddingSpec",
    "Exp",
    "GridSpec",
    "InfeasibleConstraints",
    "LabError",
    "NegativeArgument",
    "NoConvergence",
    "NonMonotoneFamily",
    "NotSupported",
    "OutOfDomain",
    "Polynomial",
    "Power",
    "ProductMap",
    "Scaled",
    "ScaledExp",
    "SeamProximity",
    "SigmaMap",
    "UnboundedConjugate",
    "YoungFunction",
    "YoungTuple",
    "amemiya_norm",
    "biconjugate_value",
    "boundary_section",
    "build_product",
    "build_sigma",
    "capacity_dual_product",
    "capacity_polar_bounds",
    "capacity_report",
    "conjugate",
    "conjugate_ball",
    "conjugate_inverse",
    "conjugate_value_numeric",
    "embed_report",
    "feasibility_certificate",
    "from_json_dict",
    "index_products",
    "inequality_suite",
    "luxemburg_norm",
    "mahler_chain",
    "orlicz_ball",
    "polar_dual",
    "standard_registry",
    "strong_viterbo_check",
    "support",
    "validate_young",
    "verify_containment_dual",
    "verify_containment_polar",
    "volume_mc",
    "young_gap",
]
