"""Independent ground-truth engines used to validate every analytic path.

Two deliberately brute-force tools: exact monomial integration over an ear
clipped triangulation, and oscillation-aware Gauss-Legendre quadrature of
plane waves over polygons, polyhedra, disks and spheres.  Nothing here
shares code with the closed forms it checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .geom import GeometryError, Polygon, Polyhedron, polyhedron_volume, signed_area
from .xform import FormFactorValue, Wavevector

__all__ = [
    "Triangulation",
    "QuadratureError",
    "triangulate",
    "monomial_integral_triangle",
    "monomial_integral",
    "quad_form_factor",
    "disk_quad_form_factor",
    "sphere_quad_form_factor",
    "integrate_scalar",
]

# Oscillatory quadrature is refused beyond this |beta| * diameter; node
# counts (and cost) grow linearly with it.
MAX_OSCILLATION = 200.0
# Relative area tolerance when classifying a vertex as collinear during ear
# clipping; collinear vertices are clipped as zero-area ears.
COLLINEAR_TOL = 1e-12
QUAD_TARGET_RTOL = 1e-9


class QuadratureError(RuntimeError):
    """Quadrature failed to reach its accuracy target before the cost cap."""


@dataclass(frozen=True, eq=False)
class Triangulation:
    """Ear-clipping decomposition of a simple CCW polygon into N-2 triangles."""

    triangles: tuple[tuple[tuple[float, float], ...], ...]
    source: Polygon

    @property
    def arrays(self) -> np.ndarray:
        return np.asarray(self.triangles, dtype=float)

    def signed_area_sum(self) -> float:
        t = self.arrays
        e1 = t[:, 1] - t[:, 0]
        e2 = t[:, 2] - t[:, 0]
        return float(0.5 * np.sum(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0]))


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@lru_cache(maxsize=512)
def triangulate(poly: Polygon) -> Triangulation:
    """Ear clipping with a strict-convexity ear test; collinear vertices are
    permitted and clipped as zero-area ears.  Requires a simple CCW polygon."""
    report = poly.validity
    if not report.ok:
        raise GeometryError(f"cannot triangulate: {report.defect}")
    if signed_area(poly) <= 0.0:
        raise GeometryError("triangulation requires counterclockwise winding")

    pts = [tuple(map(float, v)) for v in poly.vertices]
    area_tol = COLLINEAR_TOL * poly.diameter**2
    idx = list(range(len(pts)))
    tris: list[tuple[tuple[float, float], ...]] = []

    def point_in_triangle(p, a, b, c) -> bool:
        d1 = _cross(a, b, p)
        d2 = _cross(b, c, p)
        d3 = _cross(c, a, p)
        return d1 >= -area_tol and d2 >= -area_tol and d3 >= -area_tol

    while len(idx) > 3:
        n = len(idx)
        clipped = False
        # prefer strictly convex ears; sweep twice so collinear ears are only
        # taken when nothing better remains
        for pass_collinear in (False, True):
            if clipped:
                break
            for k in range(n):
                i0, i1, i2 = idx[(k - 1) % n], idx[k], idx[(k + 1) % n]
                a, b, c = pts[i0], pts[i1], pts[i2]
                turn = _cross(a, b, c)
                if turn < -area_tol:
                    continue  # reflex
                if not pass_collinear and turn <= area_tol:
                    continue  # collinear: postpone
                others = (pts[j] for j in idx if j not in (i0, i1, i2))
                if turn > area_tol and any(point_in_triangle(p, a, b, c) for p in others):
                    continue
                tris.append((a, b, c))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise GeometryError("ear clipping failed: no ear found (is the polygon simple?)")
    tris.append(tuple(pts[i] for i in idx))

    tri = Triangulation(tuple(tris), poly)
    total = tri.signed_area_sum()
    target = signed_area(poly)
    if abs(total - target) > 1e-12 * max(abs(target), poly.diameter**2):
        raise GeometryError(
            f"triangulation area {total!r} does not match polygon area {target!r}"
        )
    return tri


# ---------------------------------------------------------------------------
# exact monomial integration


@lru_cache(maxsize=None)
def _reference_ratio(p: int, q: int) -> float:
    """Exact integral of u^p w^q over the reference triangle u, w >= 0,
    u + w <= 1: p! q! / (p + q + 2)!."""
    return math.factorial(p) * math.factorial(q) / math.factorial(p + q + 2)


def _expand_affine_power(c0: float, e1: float, e2: float, n: int) -> np.ndarray:
    """Coefficient grid T[i, j] of u^i w^j in (c0 + e1 u + e2 w)^n."""
    out = np.zeros((n + 1, n + 1))
    for i in range(n + 1):
        for j in range(n + 1 - i):
            out[i, j] = (
                math.comb(n, i)
                * math.comb(n - i, j)
                * c0 ** (n - i - j)
                * e1**i
                * e2**j
            )
    return out


def monomial_integral_triangle(tri: Sequence[Sequence[float]], a: int, b: int) -> float:
    """Exact integral of x^a y^b over one triangle via the affine map to the
    reference triangle (exact up to floating rounding)."""
    if a < 0 or b < 0 or a + b > 20:
        raise ValueError("monomial orders limited to a, b >= 0 with a + b <= 20")
    p0, p1, p2 = (np.asarray(p, dtype=float) for p in tri)
    e1 = p1 - p0
    e2 = p2 - p0
    jac = e1[0] * e2[1] - e1[1] * e2[0]  # twice the signed area
    tx = _expand_affine_power(p0[0], e1[0], e2[0], a)
    ty = _expand_affine_power(p0[1], e1[1], e2[1], b)
    total = 0.0
    for i1 in range(a + 1):
        for j1 in range(a + 1 - i1):
            cx = tx[i1, j1]
            if cx == 0.0:
                continue
            for i2 in range(b + 1):
                for j2 in range(b + 1 - i2):
                    cy = ty[i2, j2]
                    if cy == 0.0:
                        continue
                    total += cx * cy * _reference_ratio(i1 + i2, j1 + j2)
    return total * jac


def monomial_integral(shape: Polygon | Triangulation, a: int, b: int) -> float:
    """Exact integral of x^a y^b over a polygon (triangulating on demand)."""
    tri = shape if isinstance(shape, Triangulation) else triangulate(shape)
    return sum(monomial_integral_triangle(t, a, b) for t in tri.triangles)


# ---------------------------------------------------------------------------
# plane-wave quadrature


@lru_cache(maxsize=None)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    # map [-1, 1] -> [0, 1]
    return 0.5 * (x + 1.0), 0.5 * w


def _plane_wave_over_triangles(tris: np.ndarray, beta: np.ndarray, n: int) -> complex:
    """Tensor Gauss-Legendre over the collapsed map of each triangle:
    x(u, v) = A + u ((B - A) + v (C - B)), jacobian u * 2 * area."""
    u, wu = _gauss(n)
    v, wv = _gauss(n)
    a = tris[:, 0]
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 1]
    jac = e1[:, 0] * (tris[:, 2, 1] - tris[:, 0, 1]) - e1[:, 1] * (tris[:, 2, 0] - tris[:, 0, 0])
    # phases: (T, nu, nv)
    base = a @ beta
    du = e1 @ beta
    dv = e2 @ beta
    phase = (
        base[:, None, None]
        + u[None, :, None] * (du[:, None, None] + v[None, None, :] * dv[:, None, None])
    )
    weights = (wu * u)[None, :, None] * wv[None, None, :]
    vals = np.exp(1j * phase)
    return complex(np.sum(jac[:, None, None] * weights * vals))


def _escalate(evaluate: Callable[[int], complex], n0: int, n_cap: int, scale: float) -> complex:
    history = [(n0, evaluate(n0))]
    n = n0
    while n + 6 <= n_cap:
        n += 6
        history.append((n, evaluate(n)))
        (_, prev), (_, cur) = history[-2], history[-1]
        if abs(cur - prev) <= QUAD_TARGET_RTOL * max(abs(cur), scale):
            return cur
    raise QuadratureError(
        f"accuracy target unmet at order cap {n_cap}; last estimates: "
        + ", ".join(f"order {k}: {v!r}" for k, v in history[-2:])
    )


def _polygon_quad(poly: Polygon, beta: np.ndarray) -> complex:
    osc = float(np.linalg.norm(beta)) * poly.diameter
    if osc > MAX_OSCILLATION:
        raise ValueError(
            f"|beta| * diameter = {osc:.1f} exceeds the quadrature cap {MAX_OSCILLATION}"
        )
    tris = triangulate(poly).arrays
    edges = np.concatenate([tris[:, 1] - tris[:, 0], tris[:, 2] - tris[:, 1], tris[:, 0] - tris[:, 2]])
    max_osc = float(np.abs(edges @ beta).max())
    n0 = math.ceil(max_osc / 2.0) + 8
    scale = abs(signed_area(poly))
    return _escalate(lambda n: _plane_wave_over_triangles(tris, beta, n), n0, 170, scale)


def _plane_wave_over_tets(tets: np.ndarray, beta: np.ndarray, n: int) -> complex:
    """Tensor rule over the collapsed cube -> tetrahedron map,
    jacobian u^2 v * 6 V."""
    u, wu = _gauss(n)
    a = tets[:, 0]
    e1 = tets[:, 1] - tets[:, 0]
    e2 = tets[:, 2] - tets[:, 1]
    e3 = tets[:, 3] - tets[:, 2]
    jac = np.einsum("ti,ti->t", e1, np.cross(tets[:, 2] - tets[:, 0], tets[:, 3] - tets[:, 0]))
    base = a @ beta
    d1 = e1 @ beta
    d2 = e2 @ beta
    d3 = e3 @ beta
    # phase = base + u (d1 + v (d2 + w d3)), built by nesting
    inner = d2[:, None, None] + u[None, None, :] * d3[:, None, None]  # (T, 1, nw)
    mid = d1[:, None, None] + u[None, :, None] * inner  # (T, nv, nw)
    phase = base[:, None, None, None] + u[None, :, None, None] * mid[:, None, :, :]
    wgt = (wu * u * u)[:, None, None] * (wu * u)[None, :, None] * wu[None, None, :]
    vals = np.exp(1j * phase)
    return complex(np.sum(jac[:, None, None, None] * wgt[None] * vals))


def _polyhedron_quad(p: Polyhedron, beta: np.ndarray) -> complex:
    osc = float(np.linalg.norm(beta)) * p.diameter
    if osc > MAX_OSCILLATION:
        raise ValueError(
            f"|beta| * diameter = {osc:.1f} exceeds the quadrature cap {MAX_OSCILLATION}"
        )
    arr = p.array
    centroid = arr.mean(axis=0)
    tet_list = []
    for ring in p.faces:
        pts = arr[list(ring)]
        for k in range(1, len(pts) - 1):
            tet_list.append([centroid, pts[0], pts[k], pts[k + 1]])
    tets = np.asarray(tet_list)
    edges = np.concatenate(
        [tets[:, i] - tets[:, j] for i, j in ((1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (3, 2))]
    )
    max_osc = float(np.abs(edges @ beta).max())
    n0 = math.ceil(max_osc / 2.0) + 8
    scale = polyhedron_volume(p)
    return _escalate(lambda n: _plane_wave_over_tets(tets, beta, n), n0, 72, scale)


def quad_form_factor(
    shape: Polygon | Polyhedron, beta: Wavevector | Sequence[float]
) -> FormFactorValue:
    """Brute-force plane-wave integral over a polygon or polyhedron, the
    ground truth the closed forms are checked against.  The tetrahedral
    decomposition fans faces to the vertex centroid, so polyhedra must be
    star shaped about it (all shipped test solids are)."""
    bv = Wavevector.of(beta)
    if isinstance(shape, Polygon):
        if bv.dim != 2:
            raise ValueError("polygon quadrature takes 2D wavevectors")
        return FormFactorValue.from_complex(_polygon_quad(shape, bv.array))
    if isinstance(shape, Polyhedron):
        if bv.dim != 3:
            raise ValueError("polyhedron quadrature takes 3D wavevectors")
        return FormFactorValue.from_complex(_polyhedron_quad(shape, bv.array))
    raise TypeError(f"unsupported shape {type(shape).__name__}")


def disk_quad_form_factor(radius: float, beta: Wavevector | Sequence[float]) -> FormFactorValue:
    """Plane-wave integral over an origin-centered disk in polar coordinates:
    Gauss-Legendre radially, trapezoid in angle (spectrally accurate for the
    periodic integrand).  Independent of any Bessel evaluation."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    bv = Wavevector.of(beta)
    mag = bv.magnitude
    if mag * 2 * radius > MAX_OSCILLATION:
        raise ValueError("oscillation exceeds the quadrature cap")

    def evaluate(n: int) -> complex:
        r, wr = _gauss(n)
        r = r * radius
        wr = wr * radius
        n_phi = 2 * n + 16
        phi = np.linspace(0.0, 2.0 * np.pi, n_phi, endpoint=False)
        phase = np.outer(r, mag * np.cos(phi))
        ang = np.exp(1j * phase).sum(axis=1) * (2.0 * np.pi / n_phi)
        return complex(np.sum(wr * r * ang))

    n0 = math.ceil(mag * radius / 2.0) + 8
    return FormFactorValue.from_complex(
        _escalate(evaluate, n0, 170, math.pi * radius**2)
    )


def sphere_quad_form_factor(radius: float, k: float) -> float:
    """Plane-wave integral over an origin-centered ball, reduced to a radial
    x polar-angle double integral; real by symmetry."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    k = float(k)
    if k * 2 * radius > MAX_OSCILLATION:
        raise ValueError("oscillation exceeds the quadrature cap")

    def evaluate(n: int) -> complex:
        r, wr = _gauss(n)
        r = r * radius
        wr = wr * radius
        mu, wmu = _gauss(n)
        mu = 2.0 * mu - 1.0
        wmu = 2.0 * wmu
        phase = np.outer(r, k * mu)
        inner = (np.exp(1j * phase) * wmu).sum(axis=1)
        return complex(2.0 * np.pi * np.sum(wr * r * r * inner))

    n0 = math.ceil(abs(k) * radius / 2.0) + 8
    vol = 4.0 * math.pi * radius**3 / 3.0
    return float(_escalate(evaluate, n0, 170, vol).real)


def integrate_scalar(
    poly: Polygon,
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    rel_tol: float = 1e-10,
    max_rounds: int = 20,
) -> float:
    """Integral of a smooth scalar f(x, y) over a polygon by triangulated
    tensor Gauss-Legendre with order escalation.  Exact for polynomials once
    the order covers the degree; raises QuadratureError if the escalation
    budget is exhausted."""
    tris = triangulate(poly).arrays
    a = tris[:, 0]
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 1]
    jac = e1[:, 0] * (tris[:, 2, 1] - tris[:, 0, 1]) - e1[:, 1] * (tris[:, 2, 0] - tris[:, 0, 0])

    def evaluate(n: int) -> float:
        u, wu = _gauss(n)
        v, wv = _gauss(n)
        uu = u[None, :, None]
        vv = v[None, None, :]
        x = a[:, None, None, 0] + uu * (e1[:, None, None, 0] + vv * e2[:, None, None, 0])
        y = a[:, None, None, 1] + uu * (e1[:, None, None, 1] + vv * e2[:, None, None, 1])
        wgt = (wu * u)[None, :, None] * wv[None, None, :]
        return float(np.sum(jac[:, None, None] * wgt * f(x, y)))

    n = 8
    prev = evaluate(n)
    for _ in range(max_rounds):
        n += 4
        cur = evaluate(n)
        if abs(cur - prev) <= rel_tol * (1.0 + abs(cur)):
            return cur
        prev = cur
    raise QuadratureError(f"scalar quadrature did not converge within {max_rounds} refinements")
