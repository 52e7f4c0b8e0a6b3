"""Slope geometry on maximal cusp tori and a rigorous check that integral
short slopes on a hyperbolic knot lie within distance 8 of each other."""

__version__ = "0.1.0"

from .errors import (
    CuspSlopeError,
    DegenerateLattice,
    IndeterminateEnclosure,
    NonPrimitive,
    SamplerExhausted,
    ZeroSlope,
)
from .scalar import Scalar, working_precision
from .lattice import (
    CuspShape,
    Slope,
    SlopeReport,
    Vec2,
    cusp_area,
    enumerate_short_slopes,
    normalize_slope,
    reduce_slope,
    shortest_slope,
    slope_distance,
    slope_length,
    slope_vector,
    triangle_area_identity,
)
from .certifier import (
    CertReport,
    TriangleWitness,
    Verdict,
    certify_theorem,
    combined_feasibility,
    find_witness,
    obtuse_step,
    quartic_bound,
    required_cos_lower,
    required_sin_lower,
)
from .analyzer import (
    SamplerConfig,
    VerifyReport,
    figure8_demo,
    figure8_shape,
    integral_short_slopes,
    sample_constrained_shapes,
    verify_shape,
)

__all__ = [
    "__version__",
    "# noqa: E402",
    "CertReport",
    "CuspShape",
    "CuspSlopeError",
    "DegenerateLattice",
    "IndeterminateEnclosure",
    "NonPrimitive",
    "SamplerConfig",
    "SamplerExhausted",
    "Scalar",
    "Slope",
    "SlopeReport",
    "TriangleWitness",
    "Vec2",
    "Verdict",
    "VerifyReport",
    "ZeroSlope",
    "certify_theorem",
    "combined_feasibility",
    "cusp_area",
    "enumerate_short_slopes",
    "figure8_demo",
    "figure8_shape",
    "find_witness",
    "integral_short_slopes",
    "normalize_slope",
    "obtuse_step",
    "quartic_bound",
    "reduce_slope",
    "required_cos_lower",
    "required_sin_lower",
    "sample_constrained_shapes",
    "shortest_slope",
    "slope_distance",
    "slope_length",
    "slope_vector",
    "triangle_area_identity",
    "verify_shape",
    "working_precision",
]
