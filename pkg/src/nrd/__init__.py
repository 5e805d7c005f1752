"""Analysis and simulation of reaction-diffusion systems whose kinetics
depend on spatial averages, posed on (0, l*pi) with Neumann boundaries.

The package splits into: `model` (built-in kinetics and their linearizations),
`spectral` (cosine eigenbasis and mode decomposition), `stability` (per-mode
classification of the constant state), `bifurcation` (critical parameter
values and branch directions), `solver` (IMEX/RK4 time stepping with outcome
detection), and `cli` (the `nrd` command).
"""

__version__ = "0.1.0"

from .errors import (
    BaseStateUnstable,
    DegenerateBifurcation,
    DegenerateCase,
    InternalInconsistency,
    LengthMismatch,
    MismatchAt,
    NegativeDensityWarning,
    NonFiniteState,
    NotDestabilizable,
    NrdError,
    NumericalError,
    ParameterConstraintViolated,
    PreconditionError,
    WindowTooShort,
)
from .spectral import (
    Domain1D,
    ModeSpectrum,
    decompose,
    dominant_mode,
    eigenfunction,
    eigenvalue,
    reconstruct,
    spatial_average,
)
from .model import (
    MODEL_REGISTRY,
    CoopLV,
    CoopLV2,
    Equilibrium,
    GeneralAveragedLogistic,
    JacobianData,
    MembraneFeedback,
    NonlocalLogistic,
    RMNonlocal,
    ScalarUserModel,
    UserModel,
    equilibrium,
    jacobians,
    model_from_spec,
)
from .stability import (
    DispersionData,
    InstabilityReport,
    block_matrices,
    classify,
    scalar_critical_diffusion,
    scalar_mode_eigenvalues,
    verify_intervals,
)
from .bifurcation import (
    BifurcationPoint,
    DirectionCoefficients,
    PredatorPreyCurves,
    coop_bif_points,
    coop_direction,
    coop_p_sharp,
    pp_hopf_points,
    pp_scenario,
    pp_steady_points,
    scalar_bif_points,
    scalar_direction,
)
from .solver import (
    InitialCondition,
    Outcome,
    SimConfig,
    Trajectory,
    averaged_ode_reduce,
    growth_rate_probe,
    run,
    step,
)

__all__ = [
    "__version__",
    # errors
    "NrdError",
    "PreconditionError",
    "NumericalError",
    "ParameterConstraintViolated",
    "NotDestabilizable",
    "BaseStateUnstable",
    "DegenerateCase",
    "DegenerateBifurcation",
    "LengthMismatch",
    "MismatchAt",
    "InternalInconsistency",
    "NonFiniteState",
    "WindowTooShort",
    "NegativeDensityWarning",
    # spectral
    "Domain1D",
    "ModeSpectrum",
    "eigenvalue",
    "eigenfunction",
    "spatial_average",
    "decompose",
    "reconstruct",
    "dominant_mode",
    # model
    "MODEL_REGISTRY",
    "Equilibrium",
    "JacobianData",
    "NonlocalLogistic",
    "GeneralAveragedLogistic",
    "MembraneFeedback",
    "CoopLV",
    "CoopLV2",
    "RMNonlocal",
    "UserModel",
    "ScalarUserModel",
    "equilibrium",
    "jacobians",
    "model_from_spec",
    # stability
    "DispersionData",
    "InstabilityReport",
    "block_matrices",
    "scalar_mode_eigenvalues",
    "scalar_critical_diffusion",
    "classify",
    "verify_intervals",
    # bifurcation
    "BifurcationPoint",
    "DirectionCoefficients",
    "PredatorPreyCurves",
    "scalar_bif_points",
    "scalar_direction",
    "coop_bif_points",
    "coop_p_sharp",
    "coop_direction",
    "pp_hopf_points",
    "pp_steady_points",
    "pp_scenario",
    # solver
    "InitialCondition",
    "SimConfig",
    "Trajectory",
    "Outcome",
    "step",
    "run",
    "averaged_ode_reduce",
    "growth_rate_probe",
]
