"""Acceptance suite: every shipping criterion at its stated tolerance and
runtime budget.  Run with `pytest tests/test_acceptance.py -v` for one
pass/fail line per criterion; timing details print with `-s` or `-rA`.
"""

import math
import time

import numpy as np

from shapeft import (
    DiffractionConfig,
    Disk,
    Sphere,
    disk_form_factor,
    moments_from_vertices,
    parallelepiped_volume,
    polygon_form_factor,
    polygon_form_factor_many,
    porod_slope,
    quad_form_factor,
    radial_average,
    render_pattern,
    series_consistency,
    signed_area,
    standard_fields,
    stokes_check,
    turning_number,
)
from shapeft.geom import edge_closure, turning_angles
from shapeft.moments import davis_sum
from shapeft.oracle import disk_quad_form_factor, monomial_integral, triangulate
from shapeft.sampling import (
    random_convex_polyhedron,
    random_star_polygon,
    regular_polygon,
    star_polygon_vertices,
)

from conftest import make_box, make_tetrahedron, rect_polygon, surface_integral_of_hpp


class _Clock:
    def __init__(self, number: int, name: str, budget: float):
        self.number = number
        self.name = name
        self.budget = budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(
            f"[ACCEPTANCE] {self.number:2d}. {self.name}: {status} "
            f"({elapsed:.1f}s / budget {self.budget:.0f}s)"
        )
        if exc_type is None:
            assert elapsed <= self.budget, (
                f"criterion {self.number} exceeded its runtime budget: "
                f"{elapsed:.1f}s > {self.budget:.0f}s"
            )


def test_criterion_01_polygon_form_factor_matches_quadrature():
    rng = np.random.default_rng(1001)
    with _Clock(1, "polygon transform vs quadrature oracle", 60):
        worst = 0.0
        for _ in range(200):
            poly = random_star_polygon(rng, int(rng.integers(3, 13)))
            area = abs(signed_area(poly))
            for _ in range(20):
                d = rng.normal(size=2)
                d /= np.linalg.norm(d)
                beta = d * rng.uniform(0.05, 50.0) / poly.diameter
                got = polygon_form_factor(poly, beta).cvalue
                want = quad_form_factor(poly, beta).cvalue
                worst = max(worst, abs(got - want) / area)
        assert worst <= 1e-8, f"worst |analytic - quadrature| / area = {worst:.3e}"


def test_criterion_02_rectangle_closed_form_on_grid():
    with _Clock(2, "rectangle edge sum equals sinc product", 1):
        a1, a2 = 1.0, 0.5
        poly = rect_polygon(a1, a2)
        area = 4.0 * a1 * a2
        axis = (np.arange(64) - 32) * 1.25  # includes exact 0: edge-aligned rows
        b1, b2 = np.meshgrid(axis, axis, indexing="ij")
        betas = np.stack([b1.ravel(), b2.ravel()], axis=1)
        got = polygon_form_factor_many(poly, betas)
        want = (
            4.0 * a1 * a2
            * np.sinc(betas[:, 0] * a1 / np.pi)
            * np.sinc(betas[:, 1] * a2 / np.pi)
        )
        worst = np.max(np.abs(got - want)) / area
        assert worst <= 1e-12, f"worst grid deviation / area = {worst:.3e}"


def test_criterion_03_airy_pattern():
    with _Clock(3, "disk transform and first dark ring", 30):
        radius = 1.0
        scale = math.pi * radius**2
        mags = np.linspace(0.0, 20.0 / radius, 50)
        worst = 0.0
        for m in mags:
            got = disk_form_factor(radius, (m, 0.0)).cvalue
            want = disk_quad_form_factor(radius, (m, 0.0)).cvalue
            worst = max(worst, abs(got - want) / scale)
        assert worst <= 1e-6, f"worst |analytic - quadrature| / (pi R^2) = {worst:.3e}"

        cfg = DiffractionConfig(
            wavelength=0.5,
            screen_distance=1000.0,
            half_extent=800.0,
            resolution=256,
            aperture=Disk(radius),
        )
        profile = radial_average(render_pattern(cfg))
        ks, vals = profile[:, 0], profile[:, 1]
        interior = np.flatnonzero(
            (vals[1:-1] < vals[:-2]) & (vals[1:-1] <= vals[2:]) & (ks[1:-1] > 1.0)
        )
        first_min = interior[0] + 1
        lo, hi = ks[first_min - 1], ks[first_min + 1]
        # the dark ring is a sign change of the amplitude: bisect it
        amp = lambda k: disk_form_factor(radius, (k, 0.0)).re
        assert amp(lo) * amp(hi) < 0, "discrete profile failed to bracket the dark ring"
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if amp(lo) * amp(mid) <= 0:
                hi = mid
            else:
                lo = mid
        ring = 0.5 * (lo + hi) * radius
        assert abs(ring - 3.8317) <= 1e-3, f"first dark ring at beta R = {ring:.5f}"


def test_criterion_04_moments_match_triangulation():
    rng = np.random.default_rng(1004)
    with _Clock(4, "vertex moments vs triangulation oracle", 30):
        worst = 0.0
        for _ in range(100):
            poly = random_star_polygon(rng, int(rng.integers(3, 13)))
            table = moments_from_vertices(poly, 8)
            tri = triangulate(poly)
            area = abs(table.area)
            for (a, b), value in table.items():
                ref = monomial_integral(tri, a, b)
                scale = area * poly.diameter ** (a + b)
                worst = max(worst, abs(value - ref) / scale)
        assert worst <= 1e-10, f"worst scaled deviation = {worst:.3e}"


def test_criterion_05_davis_vertex_formula():
    rng = np.random.default_rng(1005)
    with _Clock(5, "vertex formula vs oracle surface integral", 30):
        worst = 0.0
        for _ in range(50):
            poly = random_star_polygon(rng, int(rng.integers(3, 13)))
            degree = int(rng.integers(2, 9))
            coeffs = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
            got = davis_sum(poly, coeffs)
            want = surface_integral_of_hpp(poly, coeffs)
            scale = max(abs(want), abs(signed_area(poly)) * float(np.sum(np.abs(coeffs))))
            worst = max(worst, abs(got - want) / scale)
        assert worst <= 1e-8, f"worst relative deviation = {worst:.3e}"


def test_criterion_06_porod_exponents():
    with _Clock(6, "power-law exponents: sphere, disk, cube", 120):
        sphere = porod_slope(Sphere(1.0), 30.0, 300.0, samples=700)
        assert abs(sphere.slope + 4.0) <= 0.1, f"sphere slope {sphere.slope:.3f}"

        disk = porod_slope(Disk(1.0), 30.0, 300.0, samples=700)
        assert abs(disk.slope + 3.0) <= 0.15, f"disk slope {disk.slope:.3f}"

        cube = porod_slope(make_box(1.0, 1.0, 1.0), 12.0, 120.0, samples=500, directions=1024)
        assert abs(cube.slope + 4.0) <= 0.3, f"cube slope {cube.slope:.3f}"


def test_criterion_07_turning_number_both_windings():
    rng = np.random.default_rng(1007)
    with _Clock(7, "turning number over 1000 random simple polygons", 5):
        for _ in range(1000):
            poly = random_star_polygon(rng, int(rng.integers(3, 25)))
            assert turning_number(poly) == 1
            assert turning_number(poly.reversed()) == -1
            total = float(turning_angles(poly).sum())
            assert abs(total - 2.0 * math.pi) < 1e-9


def test_criterion_08_boundary_of_boundary():
    rng = np.random.default_rng(1008)
    with _Clock(8, "closed boundaries sum to zero", 5):
        for _ in range(500):
            poly = random_star_polygon(rng, int(rng.integers(3, 25)))
            assert np.linalg.norm(edge_closure(poly)) <= 1e-15 * poly.diameter
        solids = [make_box(1.0, 1.0, 1.0), make_tetrahedron()]
        solids += [random_convex_polyhedron(rng, int(rng.integers(8, 20))) for _ in range(20)]
        for p in solids:
            resid = np.linalg.norm(p.face_area_normals.sum(axis=0))
            assert resid <= 1e-12 * p.face_areas.sum()


def test_criterion_09_planar_stokes():
    rng = np.random.default_rng(1009)
    with _Clock(9, "curl integral equals circulation", 30):
        fields = standard_fields()
        for field in fields:
            for _ in range(50):
                poly = random_star_polygon(rng, int(rng.integers(3, 11)))
                res = stokes_check(field, poly)
                assert res.abs_gap < 1e-8 * (1.0 + abs(res.lhs)), (
                    f"{field.name}: gap {res.abs_gap:.3e} vs lhs {res.lhs:.3e}"
                )


def test_criterion_10_isoperimetric_inequality():
    rng = np.random.default_rng(1010)
    with _Clock(10, "isoperimetric ratio bounded by the circle", 10):
        total = 0
        for n in range(3, 17):
            verts = star_polygon_vertices(rng, n, count=10_000 // 14 + 1)
            areas = 0.5 * np.sum(
                verts[:, :, 0] * np.roll(verts[:, :, 1], -1, axis=1)
                - verts[:, :, 1] * np.roll(verts[:, :, 0], -1, axis=1),
                axis=1,
            )
            perims = np.sum(
                np.linalg.norm(np.roll(verts, -1, axis=1) - verts, axis=2), axis=1
            )
            q = 4.0 * math.pi * areas / perims**2
            assert np.all(q <= 1.0), f"n={n}: max Q = {q.max()}"
            total += len(q)
        assert total >= 10_000

        prev = 0.0
        for n in range(3, 65):
            from shapeft import isoperimetric_ratio

            q = isoperimetric_ratio(regular_polygon(n))
            want = (math.pi / n) / math.tan(math.pi / n)
            assert abs(q - want) <= 1e-12
            assert q > prev
            prev = q


def test_criterion_11_volume_determinants():
    rng = np.random.default_rng(1011)
    with _Clock(11, "Gram volume equals triple product", 1):
        for _ in range(1000):
            a, b, c = rng.normal(size=(3, 3)) * rng.uniform(0.01, 100.0)
            vol = parallelepiped_volume(a, b, c)
            triple = abs(float(np.dot(a, np.cross(b, c))))
            scale = max(np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(c)) ** 3
            assert abs(vol - triple) <= 1e-12 * scale


def test_criterion_12_series_consistency():
    rng = np.random.default_rng(1012)
    with _Clock(12, "boundary sum matches moment series", 5):
        for _ in range(20):
            poly = random_star_polygon(rng, int(rng.integers(3, 13)))
            d = rng.normal(size=2)
            d /= np.linalg.norm(d)
            disc = series_consistency(poly, d, 6)
            assert disc < 1e-8, f"order-6 discrepancy {disc:.3e}"
