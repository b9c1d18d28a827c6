import math

import numpy as np
import pytest

from shapeft import Polygon, Polyhedron
from shapeft.oracle import monomial_integral


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)


@pytest.fixture
def unit_square():
    return Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def centered_square():
    return Polygon([(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])


@pytest.fixture
def right_triangle():
    return Polygon([(0, 0), (1, 0), (0, 1)])


def make_box(ax: float, ay: float, az: float, center=(0.0, 0.0, 0.0)) -> Polyhedron:
    """Axis-aligned box with full edge lengths ax, ay, az."""
    cx, cy, cz = center
    hx, hy, hz = ax / 2, ay / 2, az / 2
    verts = [
        (cx - hx, cy - hy, cz - hz),
        (cx + hx, cy - hy, cz - hz),
        (cx + hx, cy + hy, cz - hz),
        (cx - hx, cy + hy, cz - hz),
        (cx - hx, cy - hy, cz + hz),
        (cx + hx, cy - hy, cz + hz),
        (cx + hx, cy + hy, cz + hz),
        (cx - hx, cy + hy, cz + hz),
    ]
    faces = [
        (0, 3, 2, 1),
        (4, 5, 6, 7),
        (0, 1, 5, 4),
        (2, 3, 7, 6),
        (1, 2, 6, 5),
        (0, 4, 7, 3),
    ]
    return Polyhedron(verts, faces)


def make_tetrahedron() -> Polyhedron:
    verts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    faces = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)]
    return Polyhedron(verts, faces)


@pytest.fixture
def unit_cube():
    return make_box(1.0, 1.0, 1.0)


@pytest.fixture
def tetrahedron():
    return make_tetrahedron()


def rect_polygon(a1: float, a2: float) -> Polygon:
    return Polygon([(-a1, -a2), (a1, -a2), (a1, a2), (-a1, a2)])


def surface_integral_of_hpp(poly: Polygon, coeffs) -> complex:
    """Oracle for the vertex formula: integrate h''(z) over the polygon by
    expanding z^m into monomials and using exact triangle integrals."""
    total = 0.0 + 0.0j
    for k in range(2, len(coeffs)):
        ck = coeffs[k] * k * (k - 1)
        m = k - 2
        for j in range(m + 1):
            total += ck * math.comb(m, j) * (1j) ** j * monomial_integral(poly, m - j, j)
    return total
