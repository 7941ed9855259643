"""Monte Carlo verification of the analytic laws."""

from .oracle import (
    DiscrepancyReport,
    ExitRecord,
    ExitRecords,
    MCConfig,
    MCEstimate,
    cell_averages,
    central_mask,
    compare,
    estimate_density,
    fraction_up,
    interpolated_cdf,
    ks_distance,
    mean_time,
    sample_stable,
    simulate_exit,
    simulate_reflected,
)

__all__ = [
    "DiscrepancyReport",
    "ExitRecord",
    "ExitRecords",
    "MCConfig",
    "MCEstimate",
    "cell_averages",
    "central_mask",
    "compare",
    "estimate_density",
    "fraction_up",
    "interpolated_cdf",
    "ks_distance",
    "mean_time",
    "sample_stable",
    "simulate_exit",
    "simulate_reflected",
]
