"""Non-Markovian decoherence of an electrically driven chiral spin qubit.

A numpy/scipy library for the second-order time-convolutionless dynamics of
a two-level chiral system weakly coupled to a thermal Lorentzian bath:
dressed-basis model, memory kernels and time-dependent decay rates, direct
master-equation integration, the closed-form Bloch solution, entropy and
pointer-state analysis, and figure-style scenario runs with CSV output.
"""

from ._version import __version__
from .bath import (
    BathSpec,
    Context,
    ExactQuadrature,
    KernelSample,
    RateSample,
    ResonantApprox,
    decay_rates,
    kernel_matrix,
    kernel_profile,
    kernel_sample,
    kernels,
    markovian_limits,
    mean_occupation,
    rate_profile,
    spectral_density,
)
from .engine import (
    EvolutionError,
    EvolveConfig,
    OnTheFly,
    PrecomputedGrid,
    Trajectory,
    evolve,
    lamb_shift_hamiltonian,
    nl_superoperator,
    nl_terms,
    rhs,
)
from .model import (
    C_MINUS,
    C_PLUS,
    C_X,
    C_Y,
    C_Z,
    DegenerateDressingError,
    DressedParams,
    QubitState,
    StateValidationError,
    SystemParams,
    dressed_params,
    dressing_unitary,
    system_from_dressed_ratio,
    transform_from_dressed,
    transform_to_dressed,
)
from .quadrature import QuadratureError, integrate_adaptive
from .scenarios import (
    ConfigError,
    PhysicsRegimeWarning,
    ScenarioConfig,
    parse_config,
    run_config,
    run_figure,
)
from .solution import (
    DampingIntegrals,
    InitialAngles,
    bloch_analytic,
    damping_integrals,
    entropy,
    pointer_angle,
)
from .verify import (
    OracleReport,
    compare_paths,
    exact_jc_survival,
    jc_total_probability,
    kernel_bruteforce,
    run_suite,
)

__all__ = [
    "__version__",
    "BathSpec", "Context", "ExactQuadrature", "KernelSample", "RateSample",
    "ResonantApprox", "decay_rates", "kernel_matrix", "kernel_profile",
    "kernel_sample", "kernels", "markovian_limits", "mean_occupation",
    "rate_profile", "spectral_density",
    "EvolutionError", "EvolveConfig", "OnTheFly", "PrecomputedGrid",
    "Trajectory", "evolve", "lamb_shift_hamiltonian", "nl_superoperator",
    "nl_terms", "rhs",
    "C_MINUS", "C_PLUS", "C_X", "C_Y", "C_Z", "DegenerateDressingError",
    "DressedParams", "QubitState", "StateValidationError", "SystemParams",
    "dressed_params", "dressing_unitary", "system_from_dressed_ratio",
    "transform_from_dressed", "transform_to_dressed",
    "QuadratureError", "integrate_adaptive",
    "ConfigError", "PhysicsRegimeWarning", "ScenarioConfig", "parse_config",
    "run_config", "run_figure",
    "DampingIntegrals", "InitialAngles", "bloch_analytic", "damping_integrals",
    "entropy", "pointer_angle",
    "OracleReport", "compare_paths", "exact_jc_survival",
    "jc_total_probability", "kernel_bruteforce", "run_suite",
]
