"""Monte Carlo heat kernel and exit time toolkit (Python bindings)."""

from ._core import (
    ConfigError,
    ProcessModel,
    Region,
    ScaleFunction,
    cli,
    derive_constants,
    exit_prob,
    mean_exit_time,
    phi,
    phi_bounds,
    phi_power_closed_form,
    reference,
    run_acceptance,
    sample_path,
    set_thread_count,
    thread_count,
    transition_prob,
    verify_multiple_dh,
)

__all__ = [
    "ConfigError",
    "ProcessModel",
    "Region",
    "ScaleFunction",
    "cli",
    "derive_constants",
    "exit_prob",
    "mean_exit_time",
    "phi",
    "phi_bounds",
    "phi_power_closed_form",
    "reference",
    "run_acceptance",
    "sample_path",
    "set_thread_count",
    "thread_count",
    "transition_prob",
    "verify_multiple_dh",
]
