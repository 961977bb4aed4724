"""asdflow: a pseudo-spectral laboratory for the periodic axisymmetric
surface diffusion flow.

The flow evolves a positive 2*pi-periodic profile r(x) of a surface of
revolution by the surface Laplacian of its mean curvature; it preserves the
enclosed volume and shrinks surface area.  This package simulates the flow,
generates its constant-mean-curvature equilibria (cylinders and unduloids),
and certifies the linear stability picture and the subcritical pitchfork
structure of the cylinder-unduloid intersections numerically.
"""

from .analysis import (
    BranchSample,
    PitchforkFit,
    SpectrumReport,
    bifurcation_scan,
    cylinder_spectrum,
    fit_mode_rate,
    fit_pitchfork,
    jacobian_spectrum,
    newton_polish,
    numerical_jacobian,
    trace_branch,
)
from .dynamics import SimConfig, TrajectoryRecord, imex_step, simulate
from .equilibria import (
    CmcClass,
    ParametricCurve,
    UnduloidSpec,
    classify_cmc,
    make_spec,
    unduloid_mean_curvature,
    unduloid_parametric,
    unduloid_profile,
)
from .errors import (
    AsdflowError,
    ConfigError,
    LiftRangeError,
    NumericError,
    ParameterError,
    PositivityError,
)
from .geometry import (
    CurvatureFields,
    QuasilinearCoefficients,
    curvatures,
    laplace_beltrami,
    normal_velocity,
    quasilinear_coefficients,
    quasilinear_rhs,
    surface_area,
    surface_diffusion_rhs,
    volume_functional,
)
from .grid import (
    PeriodicProfile,
    TorusGrid,
    cosine_coefficient,
    derivative,
    integrate,
    mean_project,
    mode_amplitude,
    profile_from_coefficients,
    spectral_coefficients,
    translate,
)
from .reduced import (
    ReducedState,
    equivalent_cylinder_radius,
    reduced_rhs,
    volume_matched_lift,
)

__version__ = "0.1.0"

__all__ = [
    "AsdflowError",
    "BranchSample",
    "CmcClass",
    "ConfigError",
    "CurvatureFields",
    "LiftRangeError",
    "NumericError",
    "ParameterError",
    "ParametricCurve",
    "PeriodicProfile",
    "PitchforkFit",
    "PositivityError",
    "QuasilinearCoefficients",
    "ReducedState",
    "SimConfig",
    "SpectrumReport",
    "TorusGrid",
    "TrajectoryRecord",
    "UnduloidSpec",
    "bifurcation_scan",
    "classify_cmc",
    "cosine_coefficient",
    "curvatures",
    "cylinder_spectrum",
    "derivative",
    "equivalent_cylinder_radius",
    "fit_mode_rate",
    "fit_pitchfork",
    "imex_step",
    "integrate",
    "jacobian_spectrum",
    "laplace_beltrami",
    "make_spec",
    "mean_project",
    "mode_amplitude",
    "newton_polish",
    "normal_velocity",
    "numerical_jacobian",
    "profile_from_coefficients",
    "quasilinear_coefficients",
    "quasilinear_rhs",
    "reduced_rhs",
    "simulate",
    "spectral_coefficients",
    "surface_area",
    "surface_diffusion_rhs",
    "trace_branch",
    "translate",
    "unduloid_mean_curvature",
    "unduloid_parametric",
    "unduloid_profile",
    "volume_functional",
    "volume_matched_lift",
]
