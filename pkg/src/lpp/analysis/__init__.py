from .bounds import (
    DeviationConstants,
    aks_reference_length,
    deviation_constants,
    optimize_epsilon,
    variance_upper_bound,
    xbar,
)
from .campaigns import (
    CampaignReport,
    aks_comparison,
    estimate_deviation,
    estimate_time_constant,
    sandwich_experiment,
)

__all__ = [
    "CampaignReport",
    "DeviationConstants",
    "aks_comparison",
    "aks_reference_length",
    "deviation_constants",
    "estimate_deviation",
    "estimate_time_constant",
    "optimize_epsilon",
    "sandwich_experiment",
    "variance_upper_bound",
    "xbar",
]
