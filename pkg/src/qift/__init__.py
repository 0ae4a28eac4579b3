"""Classical simulation of period finding under exact, approximate and integral Fourier transforms."""

from .bits import PhaseIndex, bit_reverse, h_sum, phase_index
from .errors import DomainError, InvalidArgument, ResourceLimitError
from .experiment import (
    RunConfig,
    ScanReport,
    fit_power_law,
    full_scan,
    peak_scan,
    random_runs,
    table_reproduce,
)
from .numtheory import Convergent, best_approx, gcd, mod_pow, multiplicative_order, success_window
from .shor import FactorJob, choose_n, run_factor
from .transform_spec import TransformSpec
from .transforms import (
    GaussianInt,
    PeriodicState,
    PhaseHistogram,
    RelProb,
    barenco_bound,
    full_distribution,
    prob,
    rp,
    unitary_check,
)

__all__ = [
    "Convergent", "DomainError", "FactorJob", "GaussianInt", "InvalidArgument", "PeriodicState",
    "PhaseHistogram", "PhaseIndex", "RelProb", "ResourceLimitError", "RunConfig", "ScanReport",
    "TransformSpec", "barenco_bound", "best_approx", "bit_reverse", "choose_n", "fit_power_law",
    "full_distribution", "full_scan", "gcd", "h_sum", "mod_pow", "multiplicative_order",
    "peak_scan", "phase_index", "prob", "random_runs", "rp", "run_factor", "success_window",
    "table_reproduce", "unitary_check",
]
