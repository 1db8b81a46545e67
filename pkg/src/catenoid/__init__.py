"""Higher dimensional catenoids: construction, curvature identities, and
stability spectra."""

from .errors import NonConvergenceError
from .geometry import (BallIntegralResult, CurvatureFrame, ball_integral,
                       curvature_table, decay_functional, norm_A2_closed,
                       principal_curvatures, radial_laplacian, shape_tensor,
                       unit_sphere_area)
from .profile import (CatenoidSpec, Profile, ProfilePoint, build_profile,
                      embed, eval_at_arclength, make_spec, max_axis_height)
from .report import SuiteResult, VerificationReport, full_report
from .simons import (EqualityCheck, ShapeTensor3, SimonsBreakdown,
                     algebraic_residual, breakdown, catenoid_equality_check,
                     random_admissible_tensor)
from .spectrum import (IndexReport, JacobiField, ModeCount, SpectralProblem,
                       Spectrum, delta_sweep, dirichlet_eigenvalues,
                       eigenvalues, jacobi_field, jacobi_residual,
                       morse_index, rayleigh_quotient, reduced_potential,
                       sphere_mode_multiplicity)

__version__ = "0.1.0"

__all__ = [
    "BallIntegralResult", "CatenoidSpec", "CurvatureFrame", "EqualityCheck",
    "IndexReport", "JacobiField", "ModeCount", "NonConvergenceError",
    "Profile", "ProfilePoint", "ShapeTensor3", "SimonsBreakdown",
    "SpectralProblem", "Spectrum", "SuiteResult", "VerificationReport",
    "algebraic_residual", "ball_integral", "breakdown",
    "build_profile", "catenoid_equality_check", "curvature_table",
    "decay_functional", "delta_sweep", "dirichlet_eigenvalues", "eigenvalues",
    "embed", "eval_at_arclength", "full_report", "jacobi_field",
    "jacobi_residual", "make_spec", "max_axis_height", "morse_index",
    "norm_A2_closed", "principal_curvatures", "radial_laplacian",
    "random_admissible_tensor", "rayleigh_quotient", "reduced_potential",
    "shape_tensor", "sphere_mode_multiplicity", "unit_sphere_area",
]
