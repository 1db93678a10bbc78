"""Exact combinatorics and intersection theory for genus-0 strata of d-differentials."""

from strata0.divisors import (
    ExceptionalDivisorNontrivial,
    VolumeResult,
    blowup_is_trivial,
    d_mu_boundary_form,
    d_mu_psi_form,
    volume,
)
from strata0.intersection import (
    Boundary,
    ChowElement,
    DecoratedStratum,
    DivisorExpression,
    Psi,
    integrate,
    keel_relation,
    multiply,
    product_number,
    psi_boundary_expression,
    unit,
)
from strata0.strata import (
    Signature,
    WeightVector,
    TwoBlockPartition,
    MultiBlockPartition,
    StableTree,
    ExponentVector,
    WeilDivisorData,
    validate_signature,
    bundle_rank,
    enumerate_two_block,
    boundary_weight,
    enumerate_stable_trees,
    node_weights,
    edge_weight,
    principal_subcurves,
    exponent_vector,
    ideal_generators,
    in_ideal_support,
    fiber_projective_dim,
    enumerate_p_hat,
    m_value,
    exceptional_divisor,
    vanishing_orders,
)

__all__ = [
    "Boundary",
    "ChowElement",
    "DecoratedStratum",
    "DivisorExpression",
    "ExceptionalDivisorNontrivial",
    "Psi",
    "VolumeResult",
    "blowup_is_trivial",
    "d_mu_boundary_form",
    "d_mu_psi_form",
    "integrate",
    "keel_relation",
    "multiply",
    "product_number",
    "psi_boundary_expression",
    "unit",
    "volume",
    "Signature",
    "WeightVector",
    "TwoBlockPartition",
    "MultiBlockPartition",
    "StableTree",
    "ExponentVector",
    "WeilDivisorData",
    "validate_signature",
    "bundle_rank",
    "enumerate_two_block",
    "boundary_weight",
    "enumerate_stable_trees",
    "node_weights",
    "edge_weight",
    "principal_subcurves",
    "exponent_vector",
    "ideal_generators",
    "in_ideal_support",
    "fiber_projective_dim",
    "enumerate_p_hat",
    "m_value",
    "exceptional_divisor",
    "vanishing_orders",
]
