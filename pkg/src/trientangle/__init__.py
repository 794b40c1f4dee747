"""Triangle-area quantifiers of genuine tripartite entanglement."""
from .errors import (
    ConstructionFailedError,
    InvalidTriangleError,
    SearchFailedError,
    SingularConfigurationError,
    UnphysicalCovarianceError,
    UnsupportedMeasureError,
    UnsupportedStateError,
    ValidationError,
)
from .geometry import (
    TriangleCheck,
    TriangleReport,
    area_bounds,
    gmc,
    hessian_minors,
    polygon_check,
    triangle_area,
    triangle_check,
)
from .locc import LocalMeasurement, StandardFormState, apply_measurement, monotonicity_gap
from .measures import MeasureKind, MeasureSpec, bipartition_vector, measure_of_spectrum
from .states import DensityOperator, PureState, SchmidtProfile, eigen_spectrum, partial_trace

__version__ = "0.1.0"

__all__ = [
    "ConstructionFailedError", "InvalidTriangleError", "SearchFailedError",
    "SingularConfigurationError", "UnphysicalCovarianceError", "UnsupportedMeasureError",
    "UnsupportedStateError", "ValidationError",
    "TriangleCheck", "TriangleReport", "area_bounds", "gmc", "hessian_minors",
    "polygon_check", "triangle_area", "triangle_check",
    "LocalMeasurement", "StandardFormState", "apply_measurement", "monotonicity_gap",
    "MeasureKind", "MeasureSpec", "bipartition_vector", "measure_of_spectrum",
    "DensityOperator", "PureState", "SchmidtProfile", "eigen_spectrum", "partial_trace",
]
