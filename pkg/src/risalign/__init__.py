"""risalign: phase alignment for reflecting surfaces from power readings only.

A passive reflecting surface delivers power ``|sum_k z_k exp(1j*theta_k)|^2``
for hidden complex gains ``z``. This package aligns the phases ``theta``
using nothing but scalar power readings — three probes per element pin down
that element's optimal phase in closed form — and ships the measurement
oracle, a random-search baseline, independent brute-force verifiers, and a
seeded Monte-Carlo harness with a CSV-emitting CLI.
"""

from .align import (
    DEFAULT_PROBE_ANGLES,
    DegenerateAnglesError,
    OptimizationTrace,
    RandomSearchAligner,
    SequentialAligner,
    closed_form_update,
    sequential_sweep,
    solve_three_point,
    three_point_coefficients,
)
from .channel import (
    compose_effective_gains,
    generate_channels,
    optimal_phases,
    optimal_power_bound,
    received_power,
)
from .experiments import (
    AggregateCurve,
    CdfTable,
    ExperimentConfig,
    ExperimentResult,
    TrialResult,
    aggregate_mean_curve,
    derive_seed,
    empirical_cdf,
    run_experiment,
    run_trial,
)
from .measurement import MeasurementRecord, PowerMeter, noise_variance
from .reference import (
    GridSizeError,
    brute_force_max,
    check_fixed_point_alignment,
)
from .validation import check_gains, check_phases, wrap_phase
from .verification import CheckResult, run_verification

__version__ = "0.1.0"

__all__ = [
    "AggregateCurve",
    "CdfTable",
    "CheckResult",
    "DEFAULT_PROBE_ANGLES",
    "DegenerateAnglesError",
    "ExperimentConfig",
    "ExperimentResult",
    "GridSizeError",
    "MeasurementRecord",
    "OptimizationTrace",
    "PowerMeter",
    "RandomSearchAligner",
    "SequentialAligner",
    "TrialResult",
    "aggregate_mean_curve",
    "brute_force_max",
    "check_fixed_point_alignment",
    "check_gains",
    "check_phases",
    "closed_form_update",
    "compose_effective_gains",
    "derive_seed",
    "empirical_cdf",
    "generate_channels",
    "noise_variance",
    "optimal_phases",
    "optimal_power_bound",
    "received_power",
    "run_experiment",
    "run_trial",
    "run_verification",
    "sequential_sweep",
    "solve_three_point",
    "three_point_coefficients",
    "wrap_phase",
]
