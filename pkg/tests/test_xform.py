import math

import numpy as np
import pytest

from shapeft import (
    GeometryError,
    Polygon,
    Wavevector,
    disk_form_factor,
    polygon_form_factor,
    polygon_form_factor_many,
    polyhedron_form_factor,
    quad_form_factor,
    rect_form_factor,
    series_consistency,
    signed_area,
)
from shapeft.oracle import disk_quad_form_factor
from shapeft.sampling import random_convex_polyhedron, random_star_polygon
from shapeft.xform import SMALL_BETA_SWITCH, _edge_eval, _series_eval

from conftest import make_box, rect_polygon


class TestWavevector:
    def test_perp_is_perpendicular_and_isometric(self):
        b = Wavevector((3.0, -4.0))
        assert b.perp @ b.array == 0.0
        assert np.linalg.norm(b.perp) == b.magnitude

    def test_dimensions_checked(self):
        with pytest.raises(ValueError):
            Wavevector((1.0,))

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError, match="direction"):
            Wavevector((0.0, 0.0)).direction


class TestPolygonFormFactor:
    def test_beta_zero_gives_signed_area(self, rng):
        for _ in range(10):
            poly = random_star_polygon(rng, int(rng.integers(3, 12)))
            val = polygon_form_factor(poly, (0.0, 0.0))
            assert val.cvalue == complex(signed_area(poly), 0.0)

    def test_square_matches_separable_integral(self, unit_square):
        # integral of e^{2 pi i x} over [0,1] vanishes
        val = polygon_form_factor(unit_square, (2 * math.pi, 0.0))
        assert abs(val.cvalue) < 1e-12

    def test_rectangle_matches_sinc_product(self):
        a1, a2 = 0.5, 0.5
        poly = rect_polygon(a1, a2)
        for beta in [(0.3, 0.7), (2.0, 0.0), (0.0, -3.1), (8.0, 5.0)]:
            got = polygon_form_factor(poly, beta).cvalue
            want = rect_form_factor(a1, a2, beta).cvalue
            assert got == pytest.approx(want, abs=1e-13)

    def test_matches_quadrature(self, rng):
        for _ in range(8):
            poly = random_star_polygon(rng, int(rng.integers(3, 12)))
            area = abs(signed_area(poly))
            beta = rng.uniform(-1, 1, 2)
            beta *= rng.uniform(0.5, 40 / poly.diameter) / np.linalg.norm(beta)
            got = polygon_form_factor(poly, beta).cvalue
            want = quad_form_factor(poly, beta).cvalue
            assert abs(got - want) <= 1e-9 * area

    def test_conjugate_symmetry(self, rng):
        poly = random_star_polygon(rng, 9)
        betas = rng.uniform(-30, 30, size=(40, 2))
        vals = polygon_form_factor_many(poly, betas)
        negs = polygon_form_factor_many(poly, -betas)
        assert np.max(np.abs(negs - np.conj(vals))) < 1e-15 * abs(signed_area(poly)) * 40

    def test_translation_covariance(self, rng):
        poly = random_star_polygon(rng, 7)
        area = abs(signed_area(poly))
        shift = np.array([2.5, -1.25])
        betas = rng.uniform(-20, 20, size=(25, 2))
        base = polygon_form_factor_many(poly, betas)
        moved = polygon_form_factor_many(poly.translated(shift), betas)
        phase = np.exp(1j * (betas @ shift))
        assert np.max(np.abs(moved - phase * base)) < 1e-12 * area

    def test_magnitude_bounded_by_area(self, rng):
        poly = random_star_polygon(rng, 10)
        area = abs(signed_area(poly))
        betas = rng.uniform(-60, 60, size=(200, 2))
        vals = polygon_form_factor_many(poly, betas)
        assert np.max(np.abs(vals)) <= area * (1 + 1e-12)

    def test_orientation_reversal_conjugates_negative(self, rng):
        # reversing the winding negates the enclosed signed measure
        poly = random_star_polygon(rng, 8)
        beta = (3.0, 1.0)
        fwd = polygon_form_factor(poly, beta).cvalue
        rev = polygon_form_factor(poly.reversed(), beta).cvalue
        assert rev == pytest.approx(-fwd, rel=1e-12)

    def test_branch_continuity_band(self, rng):
        for _ in range(5):
            poly = random_star_polygon(rng, 9)
            area = abs(signed_area(poly))
            for scale in np.geomspace(5e-4, 5e-3, 9):
                d = rng.normal(size=2)
                d /= np.linalg.norm(d)
                beta = (scale / poly.diameter) * d.reshape(1, 2)
                edge = _edge_eval(poly, beta)[0]
                series = _series_eval(poly, beta)[0]
                assert abs(edge - series) <= 1e-9 * area

    def test_switch_threshold_routes_to_series(self, rng):
        poly = random_star_polygon(rng, 6)
        beta = np.array([[0.5 * SMALL_BETA_SWITCH / poly.diameter, 0.0]])
        via_dispatch = polygon_form_factor_many(poly, beta)[0]
        assert via_dispatch == _series_eval(poly, beta)[0]

    def test_nonsimple_rejected_without_escape_hatch(self):
        bowtie = Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
        with pytest.raises(GeometryError):
            polygon_form_factor(bowtie, (1.0, 0.0))
        val = polygon_form_factor(bowtie, (1.0, 0.0), allow_nonsimple=True)
        assert math.isfinite(val.re) and math.isfinite(val.im)

    def test_nonsimple_zero_area_small_beta_is_finite(self):
        bowtie = Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])
        for beta in ((1e-5, 2e-6), (0.0, 0.0)):
            val = polygon_form_factor(bowtie, beta, allow_nonsimple=True)
            assert math.isfinite(val.re) and math.isfinite(val.im)


class TestDiskFormFactor:
    def test_beta_zero_is_area(self):
        assert disk_form_factor(2.0, (0.0, 0.0)).re == pytest.approx(4 * math.pi)

    def test_zero_at_first_bessel_zero(self):
        val = disk_form_factor(1.0, (3.8317059702075123, 0.0))
        assert abs(val.re) < 1e-6 * math.pi

    def test_matches_polar_quadrature(self):
        for mag in (0.5, 2.0, 5.0, 11.0, 17.5):
            got = disk_form_factor(1.0, (mag, 0.0)).cvalue
            want = disk_quad_form_factor(1.0, (mag, 0.0)).cvalue
            assert abs(got - want) <= 1e-6 * math.pi

    def test_rotation_invariance(self, rng):
        mag = 7.3
        vals = []
        for _ in range(8):
            d = rng.normal(size=2)
            d /= np.linalg.norm(d)
            vals.append(disk_form_factor(1.2, mag * d).re)
        assert np.ptp(vals) < 1e-12 * math.pi * 1.2**2


class TestRectFormFactor:
    def test_beta_zero(self):
        assert rect_form_factor(1.0, 2.0, (0.0, 0.0)).re == pytest.approx(8.0)

    def test_sinc_zeros(self):
        a1 = 1.0
        val = rect_form_factor(a1, 2.0, (math.pi / a1, 0.37))
        assert abs(val.re) < 1e-12

    def test_explicit_value(self):
        want = 8.0 * math.sin(1.0) * math.sin(2.0) / 2.0
        assert rect_form_factor(1.0, 2.0, (1.0, 1.0)).re == pytest.approx(want, rel=1e-14)

    def test_agrees_with_polygon_path_on_grid(self):
        a1, a2 = 1.0, 0.5
        poly = rect_polygon(a1, a2)
        area = 4 * a1 * a2
        idx = np.arange(64) - 32
        vals_b = idx * 0.8  # includes exact zero and edge-aligned rows/cols
        for b1 in vals_b[::9]:
            for b2 in vals_b[::9]:
                got = polygon_form_factor(poly, (b1, b2)).cvalue
                want = rect_form_factor(a1, a2, (b1, b2)).cvalue
                assert abs(got - want) <= 1e-12 * area


class TestPolyhedronFormFactor:
    def test_beta_zero_gives_volume(self, unit_cube):
        assert polyhedron_form_factor(unit_cube, (0.0, 0.0, 0.0)).cvalue == 1.0 + 0.0j

    def test_cube_axis_matches_sinc(self, unit_cube):
        for b in (0.5, 2.0, 7.0, 19.0):
            got = polyhedron_form_factor(unit_cube, (b, 0.0, 0.0)).cvalue
            want = math.sin(b / 2) / (b / 2)
            assert got == pytest.approx(want + 0.0j, abs=1e-13)

    def test_cube_separable_product(self, unit_cube):
        beta = (2.0, -3.0, 0.7)
        want = 1.0
        for b in beta:
            want *= math.sin(b / 2) / (b / 2)
        got = polyhedron_form_factor(unit_cube, beta).cvalue
        assert got == pytest.approx(want + 0j, abs=1e-13)

    def test_tetrahedron_matches_quadrature(self, rng, tetrahedron):
        for _ in range(5):
            beta = rng.normal(size=3)
            beta *= rng.uniform(1, 20) / np.linalg.norm(beta)
            got = polyhedron_form_factor(tetrahedron, beta).cvalue
            want = quad_form_factor(tetrahedron, beta).cvalue
            assert abs(got - want) <= 1e-6 * (1.0 / 6.0)

    def test_random_hulls_match_quadrature(self, rng):
        for _ in range(3):
            p = random_convex_polyhedron(rng, 10)
            from shapeft import polyhedron_volume

            vol = polyhedron_volume(p)
            beta = rng.normal(size=3)
            beta *= rng.uniform(1, 15) / np.linalg.norm(beta)
            got = polyhedron_form_factor(p, beta).cvalue
            want = quad_form_factor(p, beta).cvalue
            assert abs(got - want) <= 1e-6 * vol

    def test_translation_covariance(self, unit_cube):
        moved = unit_cube.translated((0.3, -1.2, 2.0))
        beta = np.array([1.5, 0.7, -2.2])
        base = polyhedron_form_factor(unit_cube, beta).cvalue
        got = polyhedron_form_factor(moved, beta).cvalue
        phase = np.exp(1j * (beta @ np.array([0.3, -1.2, 2.0])))
        assert got == pytest.approx(base * phase, rel=1e-12)

    def test_small_beta_series_continuity(self, unit_cube):
        # straddle the series/face-sum switch
        for scale in (0.3, 0.7, 1.5, 3.0):
            beta = np.array([[1.0, 0.5, -0.25]])
            beta *= scale * SMALL_BETA_SWITCH / (unit_cube.diameter * np.linalg.norm(beta))
            from shapeft import polyhedron_form_factor_many

            val = polyhedron_form_factor_many(unit_cube, beta)[0]
            b = beta[0]
            want = 1.0
            for comp in b:
                want *= math.sin(comp / 2) / (comp / 2) if comp != 0 else 1.0
            assert val == pytest.approx(want + 0j, rel=1e-9)

    def test_box_2x3x4(self):
        box = make_box(2.0, 3.0, 4.0)
        beta = (1.0, 0.5, 0.25)
        want = 24.0
        for b, a in zip(beta, (1.0, 1.5, 2.0)):
            want *= math.sin(b * a) / (b * a)
        assert polyhedron_form_factor(box, beta).cvalue == pytest.approx(want + 0j, rel=1e-12)


class TestSeriesConsistency:
    def test_unit_square_order6(self, unit_square):
        assert series_consistency(unit_square, (1.0, 0.0), 6) < 1e-10

    def test_order_zero_reduces_to_area_error(self, rng):
        poly = random_star_polygon(rng, 7)
        disc = series_consistency(poly, (0.6, 0.8), 0)
        # |phi(t b) - area| / area at t * diameter <= 5e-2 stays small
        assert 0 <= disc < 1e-2

    def test_triangle_order4(self, right_triangle):
        assert series_consistency(right_triangle, (0.6, 0.8), 4) < 1e-8

    def test_order_cap(self, unit_square):
        with pytest.raises(ValueError):
            series_consistency(unit_square, (1.0, 0.0), 9)
