"""shapeft: exact Fourier transforms of polygonal and polyhedral shapes.

The volume integral of a plane wave over a shape reduces to a boundary sum,
which this package evaluates in closed form for polygons (one term per edge)
and polyhedra (one planar transform per face).  On top of that sit the
things the reduction buys: moment tables straight from the vertices, vertex
formulas for complex polynomial integrals, far-field diffraction patterns,
and the power-law falloff of scattered intensity.  Every analytic path is
validated against an independent brute-force oracle.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .bessel import j1
from .geom import (
    GeometryError,
    Polygon,
    Polyhedron,
    SampledCurve,
    ValidityReport,
    edge_closure,
    gram_area_element,
    parallelepiped_volume,
    polyhedron_volume,
    signed_area,
    turning_number,
    validate_simple,
)
from .identities import (
    StokesResult,
    VectorField2D,
    curve_area,
    isoperimetric_ratio,
    standard_fields,
    stokes_check,
)
from .moments import (
    ComplexPolygon,
    MomentConsistencyError,
    MomentTable,
    complex_moments,
    davis_sum,
    first_moments,
    moments_from_vertices,
)
from .oracle import (
    QuadratureError,
    Triangulation,
    monomial_integral,
    monomial_integral_triangle,
    quad_form_factor,
    triangulate,
)
from .scatter import (
    DiffractionConfig,
    Disk,
    IntensityGrid,
    PorodFit,
    Rect,
    RegimeError,
    Sphere,
    porod_slope,
    radial_average,
    render_pattern,
    sphere_form_factor,
)
from .xform import (
    FormFactorValue,
    Wavevector,
    disk_form_factor,
    polygon_form_factor,
    polygon_form_factor_many,
    polyhedron_form_factor,
    polyhedron_form_factor_many,
    rect_form_factor,
    series_consistency,
)

__all__ = [
    "__version__",
    "BACKEND",
    "GeometryError",
    "Polygon",
    "Polyhedron",
    "SampledCurve",
    "ValidityReport",
    "validate_simple",
    "signed_area",
    "edge_closure",
    "turning_number",
    "gram_area_element",
    "parallelepiped_volume",
    "polyhedron_volume",
    "Wavevector",
    "FormFactorValue",
    "polygon_form_factor",
    "polygon_form_factor_many",
    "disk_form_factor",
    "rect_form_factor",
    "polyhedron_form_factor",
    "polyhedron_form_factor_many",
    "series_consistency",
    "MomentTable",
    "ComplexPolygon",
    "MomentConsistencyError",
    "moments_from_vertices",
    "first_moments",
    "davis_sum",
    "complex_moments",
    "VectorField2D",
    "StokesResult",
    "standard_fields",
    "curve_area",
    "stokes_check",
    "isoperimetric_ratio",
    "Triangulation",
    "QuadratureError",
    "triangulate",
    "monomial_integral",
    "monomial_integral_triangle",
    "quad_form_factor",
    "Disk",
    "Rect",
    "Sphere",
    "DiffractionConfig",
    "IntensityGrid",
    "PorodFit",
    "RegimeError",
    "render_pattern",
    "radial_average",
    "sphere_form_factor",
    "porod_slope",
    "j1",
]
