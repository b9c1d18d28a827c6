"""Deterministic generators for test shapes.

Random polygons are star shaped about the origin (radii at sorted angles),
which guarantees simplicity and CCW winding; random polyhedra are convex
hulls of random point clouds with faces rewound outward.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull

from .geom import Polygon, Polyhedron, SampledCurve

__all__ = [
    "random_star_polygon",
    "star_polygon_vertices",
    "random_convex_polyhedron",
    "regular_polygon",
    "sampled_circle",
]

def star_polygon_vertices(
    rng: np.random.Generator,
    n: int,
    r_min: float = 0.5,
    r_max: float = 1.5,
    count: int = 1,
) -> np.ndarray:
    """(count, n, 2) batch of star-shaped CCW vertex arrays.

    Angular gaps are drawn as normalized (1 + uniform) weights, which keeps
    every gap in (pi/n, 4 pi/(n+1)): strictly positive (no duplicate rays)
    and strictly under a half turn, so the origin is interior and the
    polygon is simple with CCW winding.
    """
    weights = 1.0 + rng.uniform(0.0, 1.0, size=(count, n))
    gaps = 2.0 * np.pi * weights / weights.sum(axis=1, keepdims=True)
    start = rng.uniform(0.0, 2.0 * np.pi, size=(count, 1))
    theta = start + np.cumsum(gaps, axis=1) - gaps
    radii = rng.uniform(r_min, r_max, size=(count, n))
    return np.stack([radii * np.cos(theta), radii * np.sin(theta)], axis=2)


def random_star_polygon(
    rng: np.random.Generator, n: int, r_min: float = 0.5, r_max: float = 1.5
) -> Polygon:
    return Polygon(star_polygon_vertices(rng, n, r_min, r_max, count=1)[0])


def random_convex_polyhedron(rng: np.random.Generator, n_points: int = 12) -> Polyhedron:
    """Convex hull of a random cloud on a squashed sphere; triangular faces
    rewound so every normal points away from the interior."""
    pts = rng.normal(size=(n_points, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts *= rng.uniform(0.8, 1.2, size=(n_points, 1))
    pts[:, 2] *= rng.uniform(0.6, 1.4)
    hull = ConvexHull(pts)
    used = np.unique(hull.simplices)
    remap = {int(old): new for new, old in enumerate(used)}
    vertices = pts[used]
    interior = vertices.mean(axis=0)
    faces = []
    for simplex in hull.simplices:
        a, b, c = (pts[i] for i in simplex)
        normal = np.cross(b - a, c - a)
        ring = [remap[int(i)] for i in simplex]
        if normal @ (a - interior) < 0:
            ring.reverse()
        faces.append(tuple(ring))
    return Polyhedron(vertices, faces)


def regular_polygon(n: int, radius: float = 1.0) -> Polygon:
    theta = 2.0 * np.pi * np.arange(n) / n
    return Polygon(np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1))


def sampled_circle(n: int, radius: float = 1.0) -> SampledCurve:
    theta = 2.0 * np.pi * np.arange(n) / n
    return SampledCurve(np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1))
