"""Energy-constrained entanglement distillability toolkit."""

from .distill import (
    DistillabilityVerdict,
    IndependenceReport,
    MonteCarloReport,
    average_energy,
    concurrence,
    delta_p,
    energy_histogram,
    estimate_df,
    estimate_p,
    find_nonconvexity_witness,
    independence_check,
    is_distillable,
    is_scd,
    p_via_independence,
    thermal_boundary,
    wcec_satisfied,
)
from .hamiltonians import (
    EnergyRange,
    ModelSpec,
    build,
    interaction_part,
    local_part,
    state_energy_bounds,
    target_energy_bounds_analytic,
)
from .linalg import (
    Spectrum,
    haar_unitary,
    hermitian_eig,
    kron,
    partial_trace,
    partial_transpose,
    spectral_function,
)
from .optimize import (
    LocalUnitaries,
    RangeResult,
    energy_range,
    qubit_unitary,
    qudit_unitary,
    target_energy,
    target_energy_range,
    w_class_target_range,
)
from .states import (
    QuantumState,
    StateSampler,
    bell_diagonal,
    ghz_class_sample,
    magnetized_state,
    random_mixed,
    random_pure,
    target_state,
    thermal_state,
    w_class_sample,
)

__version__ = "0.1.0"

__all__ = [
    "DistillabilityVerdict",
    "EnergyRange",
    "IndependenceReport",
    "LocalUnitaries",
    "ModelSpec",
    "MonteCarloReport",
    "QuantumState",
    "RangeResult",
    "Spectrum",
    "StateSampler",
    "average_energy",
    "bell_diagonal",
    "build",
    "concurrence",
    "delta_p",
    "energy_histogram",
    "energy_range",
    "estimate_df",
    "estimate_p",
    "find_nonconvexity_witness",
    "ghz_class_sample",
    "haar_unitary",
    "hermitian_eig",
    "independence_check",
    "interaction_part",
    "is_distillable",
    "is_scd",
    "kron",
    "local_part",
    "magnetized_state",
    "p_via_independence",
    "partial_trace",
    "partial_transpose",
    "qubit_unitary",
    "qudit_unitary",
    "random_mixed",
    "random_pure",
    "spectral_function",
    "state_energy_bounds",
    "target_energy",
    "target_energy_bounds_analytic",
    "target_energy_range",
    "target_state",
    "thermal_boundary",
    "thermal_state",
    "w_class_sample",
    "w_class_target_range",
    "wcec_satisfied",
]
