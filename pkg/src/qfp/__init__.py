"""Resource analysis of coherent-state fingerprinting over noisy optical channels.

Computes, optimizes and empirically validates the signal photon budget of
the interference-based fingerprint equality test, and compares it against
classical fingerprinting baselines.
"""

__version__ = "0.1.0"

from .chernoff import (
    ChernoffResult,
    VisibilityPair,
    error_bound,
    lambda_star,
    per_count,
    per_count_low_vis,
)
from .classical import ClassicalBaseline, baseline, holevo_rate, pie
from .errors import (
    BracketError,
    CapacityError,
    ConvergenceError,
    DomainError,
    QfpError,
    SolverError,
)
from .numerics import Tolerance, binary_entropy, gv_rate, thermal_entropy
from .optimizer import (
    OperatingPoint,
    asymptotic_beta,
    asymptotic_nq,
    delta_tilde,
    optimize,
    reduced_optimum,
    solve_beta,
)
from .protocol import (
    DerivedModel,
    ProtocolConfig,
    derive,
    noise_parameter,
    noiseless_nq,
    phase_overhead,
    photocount_pmf,
    visibilities,
)
from .simulator import (
    ToeplitzCode,
    TrialBatch,
    TrialMode,
    run_trials,
)

__all__ = [
    "__version__",
    "ChernoffResult",
    "VisibilityPair",
    "error_bound",
    "lambda_star",
    "per_count",
    "per_count_low_vis",
    "ClassicalBaseline",
    "baseline",
    "holevo_rate",
    "pie",
    "QfpError",
    "DomainError",
    "BracketError",
    "ConvergenceError",
    "SolverError",
    "CapacityError",
    "Tolerance",
    "binary_entropy",
    "gv_rate",
    "thermal_entropy",
    "OperatingPoint",
    "asymptotic_beta",
    "asymptotic_nq",
    "delta_tilde",
    "optimize",
    "reduced_optimum",
    "solve_beta",
    "DerivedModel",
    "ProtocolConfig",
    "derive",
    "noise_parameter",
    "noiseless_nq",
    "phase_overhead",
    "photocount_pmf",
    "visibilities",
    "ToeplitzCode",
    "TrialBatch",
    "TrialMode",
    "run_trials",
]
