"""Numerical checks of the smooth-curve results: curve areas, the planar
Stokes identity, and the isoperimetric inequality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geom import GeometryError, Polygon, SampledCurve, signed_area_of
from .oracle import integrate_scalar

__all__ = [
    "VectorField2D",
    "StokesResult",
    "standard_fields",
    "curve_area",
    "stokes_check",
    "isoperimetric_ratio",
]

_FD_STEP = 1e-6
_FD_TOL = 1e-5
_LINE_GAUSS_NODES = 16


@dataclass(frozen=True)
class VectorField2D:
    """A smooth planar vector field together with its analytic scalar curl
    (d F2/dx - d F1/dy).  The pair is cross-checked by central differences at
    construction, so a mismatched curl fails fast.  Callables must accept
    broadcasting NumPy arrays and be safe for concurrent calls."""

    field: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    curl: Callable[[np.ndarray, np.ndarray], np.ndarray]
    name: str = "field"

    def __post_init__(self):
        rng = np.random.default_rng(0x5AFE)
        x, y = rng.uniform(-1.0, 1.0, size=(2, 10))
        h = _FD_STEP
        _, f2_xp = self.field(x + h, y)
        _, f2_xm = self.field(x - h, y)
        f1_yp, _ = self.field(x, y + h)
        f1_ym, _ = self.field(x, y - h)
        fd = (np.asarray(f2_xp) - np.asarray(f2_xm)) / (2 * h) - (
            np.asarray(f1_yp) - np.asarray(f1_ym)
        ) / (2 * h)
        exact = np.asarray(self.curl(x, y)) + np.zeros_like(x)
        err = np.max(np.abs(fd - exact) / (1.0 + np.abs(exact)))
        if err > _FD_TOL:
            raise ValueError(
                f"curl callable of {self.name!r} disagrees with finite differences "
                f"(relative error {err:.2e})"
            )


def standard_fields() -> tuple[VectorField2D, ...]:
    """Built-in library of polynomial test fields (degree <= 6)."""
    return (
        VectorField2D(lambda x, y: (-y, x), lambda x, y: 2.0 + 0 * x, "rotation"),
        VectorField2D(lambda x, y: (1.3 + 0 * x, -0.7 + 0 * x), lambda x, y: 0 * x, "constant"),
        VectorField2D(lambda x, y: (0 * x, x**2), lambda x, y: 2 * x, "x_squared"),
        VectorField2D(lambda x, y: (y**2, 0 * x), lambda x, y: -2 * y, "y_squared"),
        VectorField2D(
            lambda x, y: (x**2 * y, x * y**2), lambda x, y: y**2 - x**2, "bilinear_cubic"
        ),
        VectorField2D(
            lambda x, y: (x**3 - 3 * x * y**2, 3 * x**2 * y - y**3),
            lambda x, y: 12 * x * y,
            "harmonic_pair",
        ),
        VectorField2D(lambda x, y: (x**2 * y**3, 0 * x), lambda x, y: -3 * x**2 * y**2, "quintic"),
        VectorField2D(
            lambda x, y: (-(y**5) / 5.0, x**5 / 5.0), lambda x, y: x**4 + y**4, "quartic_curl"
        ),
    )


def curve_area(curve: SampledCurve) -> float:
    """Enclosed area of a sampled closed curve: the shoelace sum, exact for
    the polygonal interpolant and second-order accurate in the sample count
    for smooth curves.  Positive for counterclockwise traversal."""
    return signed_area_of(curve.array)


@dataclass(frozen=True)
class StokesResult:
    lhs: float  # area integral of the curl
    rhs: float  # circulation along the boundary
    abs_gap: float


def stokes_check(field: VectorField2D, poly: Polygon) -> StokesResult:
    """Both sides of the planar Stokes identity on a polygon: the curl
    integrated over the interior versus the tangential line integral around
    the boundary (fixed 16-node Gauss-Legendre per edge, exact for the
    polynomial test fields)."""
    poly.require_simple()
    lhs = integrate_scalar(poly, lambda x, y: np.asarray(field.curl(x, y)) + 0.0 * x)

    nodes, weights = np.polynomial.legendre.leggauss(_LINE_GAUSS_NODES)
    t = 0.5 * (nodes + 1.0)
    wt = 0.5 * weights
    v = poly.array
    w = np.roll(v, -1, axis=0)
    rhs = 0.0
    for a, b in zip(v, w):
        d = b - a
        x = a[0] + t * d[0]
        y = a[1] + t * d[1]
        f1, f2 = field.field(x, y)
        rhs += float(np.sum(wt * (np.asarray(f1) * d[0] + np.asarray(f2) * d[1])))
    return StokesResult(lhs, rhs, abs(lhs - rhs))


def isoperimetric_ratio(shape: Polygon | SampledCurve) -> float:
    """Q = 4 pi area / perimeter^2, in (0, 1]; equality holds only for the
    circle, and every simple closed shape must satisfy Q <= 1."""
    if isinstance(shape, Polygon):
        shape.require_simple()
        area = signed_area_of(shape.array)
        perimeter = shape.perimeter
    elif isinstance(shape, SampledCurve):
        area = curve_area(shape)
        perimeter = shape.perimeter
    else:
        raise TypeError(f"unsupported shape {type(shape).__name__}")
    if perimeter <= 0.0:
        raise GeometryError("degenerate shape: zero perimeter")
    if area <= 0.0:
        raise GeometryError("isoperimetric ratio needs positive (CCW) area")
    q = 4.0 * np.pi * area / perimeter**2
    if q > 1.0 + 1e-12:
        raise GeometryError(f"isoperimetric inequality violated: Q = {q!r}")
    return q
