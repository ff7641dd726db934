"""Optimal covariant LOCC transformations between two-qubit pure states."""

from ._core import (
    ContractViolation,
    DimensionError,
    ParameterError,
    analytic_fidelity,
    channel_fidelity,
    check_cp,
    check_ppt,
    check_tp,
    choi_from_kraus,
    covariance_residual,
    d011_ppt_interval,
    export_json,
    kraus_from_choi,
    labels,
    objective_vector,
    published_kraus,
    scenarios,
    solve_point,
    sweep_csv,
)

__all__ = [
    "ContractViolation",
    "DimensionError",
    "ParameterError",
    "analytic_fidelity",
    "channel_fidelity",
    "check_cp",
    "check_ppt",
    "check_tp",
    "choi_from_kraus",
    "covariance_residual",
    "d011_ppt_interval",
    "export_json",
    "kraus_from_choi",
    "labels",
    "objective_vector",
    "published_kraus",
    "scenarios",
    "solve_point",
    "sweep_csv",
]
