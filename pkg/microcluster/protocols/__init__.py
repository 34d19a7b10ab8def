"""Construction, bonding and reference-data protocols."""
from microcluster.protocols.closed_forms import (
    TABLE1_PRINTED,
    TABLE2_PRINTED,
    TABLE3_PRINTED,
    antidiagonal,
    binomial_transform_table,
    closed_form_table1,
    first_order_coefficient,
    reference_formulas,
    table1_row6_verdict,
)
from microcluster.protocols.expansion import alpha_constancy, coefficient_expansion, policy_search
from microcluster.protocols.microcluster import (
    MicroclusterHandle,
    build_microcluster,
    microcluster_fidelity,
)
from microcluster.protocols.pair_fusion import (
    PairFusionResult,
    PairFusionSpec,
    Strategy,
    calibrate_pipelines,
    fuse_pair,
    pair_target,
)
from microcluster.protocols.sweep import parse_p_grid, sweep_records

__all__ = [
    "TABLE1_PRINTED",
    "TABLE2_PRINTED",
    "TABLE3_PRINTED",
    "MicroclusterHandle",
    "PairFusionResult",
    "PairFusionSpec",
    "Strategy",
    "alpha_constancy",
    "antidiagonal",
    "binomial_transform_table",
    "build_microcluster",
    "calibrate_pipelines",
    "closed_form_table1",
    "coefficient_expansion",
    "first_order_coefficient",
    "fuse_pair",
    "microcluster_fidelity",
    "pair_target",
    "parse_p_grid",
    "policy_search",
    "reference_formulas",
    "sweep_records",
    "table1_row6_verdict",
]
