"""Laplace-Fourier expansions on the real ball B_R and their holomorphic
continuation to the Lie ball in C^n."""

from .complex_geometry import (ComplexPoint, LieGeometry, in_lie_ball,
                               lie_data, lie_norm_sq, q_of, shilov_sample)
from .errors import ResourceLimitError
from .harmonic_basis import (HarmonicBasis, HarmonicPoly, addition_residual,
                             build_basis, eval_complex, harmonic_projection,
                             monomial_sphere_integral, norm_sum_complex,
                             norm_sum_identity)
from .holo_continuation import (ContinuationResult, evaluate, grid_extend,
                                tail_majorant)
from .lf_transform import (DecayEstimate, FunctionSpec, LFExpansion,
                           ProfilePoly, cauchy_profile_bound, decay_estimate,
                           expand, structural_check)
from .special_functions import (harmonic_dim, legendre_leading, legendre_nd,
                                legendre_upper, sphere_area)
from .sphere_integration import SphereRule, build_rule, lf_coefficient
from .verification import (CheckReport, check_add3, check_harmonic_extension,
                           check_hua, random_harmonic, random_homogeneous,
                           taylor_parts)

__version__ = "0.1.0"

__all__ = [
    "CheckReport", "ComplexPoint", "ContinuationResult", "DecayEstimate",
    "FunctionSpec", "HarmonicBasis", "HarmonicPoly", "LFExpansion",
    "LieGeometry", "ProfilePoly", "ResourceLimitError", "SphereRule",
    "addition_residual", "build_basis", "build_rule", "cauchy_profile_bound",
    "check_add3", "check_harmonic_extension", "check_hua", "decay_estimate",
    "eval_complex", "evaluate", "expand", "grid_extend", "harmonic_dim",
    "harmonic_projection", "in_lie_ball", "legendre_leading", "legendre_nd",
    "legendre_upper", "lf_coefficient", "lie_data", "lie_norm_sq",
    "monomial_sphere_integral", "norm_sum_complex", "norm_sum_identity",
    "q_of", "random_harmonic", "random_homogeneous", "shilov_sample",
    "sphere_area", "structural_check", "tail_majorant", "taylor_parts",
]
