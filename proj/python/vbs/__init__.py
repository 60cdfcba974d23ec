from ._vbs import (
    CapabilityError,
    ModelError,
    chain_report,
    check_report,
    marginal_values,
    plan_report,
    query_value,
    run_cli,
)

__all__ = [
    "CapabilityError",
    "ModelError",
    "chain_report",
    "check_report",
    "marginal_values",
    "plan_report",
    "query_value",
    "run_cli",
]
