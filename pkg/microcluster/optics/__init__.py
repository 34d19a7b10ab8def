"""Photonic primitives: EPR source, Type-1 fusion, Pauli noise, measurements."""
from microcluster.optics.calibration import calibrate_byproducts, clifford_group, verify_byproducts
from microcluster.optics.fusion import (
    epr,
    failure_weights,
    fuse_fail,
    fuse_success,
    kraus_completeness,
    star_state,
    success_probability,
)
from microcluster.optics.measurement import (
    DEFAULT_BYPRODUCTS,
    ByproductTable,
    joined_pair_state,
    measure_y_remove,
    measure_z_remove,
    project_z_outcome,
)
from microcluster.optics.noise import (
    DEFAULT_POLICY,
    TABLE3_CAPS,
    ErrorPlacement,
    ErrorPlacementPolicy,
    NoiseModel,
    pauli_channel,
)

__all__ = [
    "DEFAULT_BYPRODUCTS",
    "DEFAULT_POLICY",
    "TABLE3_CAPS",
    "ByproductTable",
    "ErrorPlacement",
    "ErrorPlacementPolicy",
    "NoiseModel",
    "calibrate_byproducts",
    "clifford_group",
    "epr",
    "failure_weights",
    "fuse_fail",
    "fuse_success",
    "joined_pair_state",
    "kraus_completeness",
    "measure_y_remove",
    "measure_z_remove",
    "pauli_channel",
    "project_z_outcome",
    "star_state",
    "success_probability",
    "verify_byproducts",
]
