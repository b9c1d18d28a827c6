import math

import numpy as np
import pytest

from shapeft import (
    ComplexPolygon,
    MomentTable,
    Polygon,
    complex_moments,
    davis_sum,
    first_moments,
    moments_from_vertices,
    signed_area,
)
from shapeft.oracle import monomial_integral, triangulate
from shapeft.sampling import random_star_polygon

from conftest import surface_integral_of_hpp


class TestMomentsFromVertices:
    def test_unit_square_low_orders(self, unit_square):
        t = moments_from_vertices(unit_square, 2)
        assert t[(0, 0)] == pytest.approx(1.0, abs=1e-14)
        assert t[(1, 0)] == pytest.approx(0.5, abs=1e-14)
        assert t[(2, 0)] == pytest.approx(1.0 / 3.0, abs=1e-14)
        assert t[(1, 1)] == pytest.approx(0.25, abs=1e-14)

    def test_triangle_mixed_moment(self, right_triangle):
        t = moments_from_vertices(right_triangle, 2)
        assert t[(1, 1)] == pytest.approx(1.0 / 24.0, abs=1e-15)

    def test_centroid_consistency(self, rng):
        poly = random_star_polygon(rng, 9)
        t = moments_from_vertices(poly, 1)
        area, centroid = first_moments(poly)
        assert t[(1, 0)] / t[(0, 0)] == pytest.approx(centroid[0], abs=1e-12)
        assert t[(0, 1)] / t[(0, 0)] == pytest.approx(centroid[1], abs=1e-12)

    def test_against_triangulation_oracle(self, rng):
        for _ in range(20):
            poly = random_star_polygon(rng, int(rng.integers(3, 13)))
            table = moments_from_vertices(poly, 8)
            tri = triangulate(poly)
            area = abs(table.area)
            for (a, b), value in table.items():
                ref = monomial_integral(tri, a, b)
                scale = area * poly.diameter ** (a + b)
                assert abs(value - ref) <= 1e-10 * scale

    def test_translation_binomial_shift(self, rng):
        poly = random_star_polygon(rng, 8)
        d = np.array([1.75, -0.6])
        base = moments_from_vertices(poly, 6)
        moved = moments_from_vertices(poly.translated(d), 6)
        area = abs(base.area)
        for (a, b), value in moved.items():
            want = 0.0
            for i in range(a + 1):
                for j in range(b + 1):
                    want += (
                        math.comb(a, i)
                        * math.comb(b, j)
                        * d[0] ** (a - i)
                        * d[1] ** (b - j)
                        * base[(i, j)]
                    )
            scale = area * (poly.diameter + np.linalg.norm(d)) ** (a + b)
            assert abs(value - want) <= 1e-10 * scale

    def test_missing_entry_raises(self, unit_square):
        t = moments_from_vertices(unit_square, 2)
        with pytest.raises(KeyError):
            t[(3, 0)]

    def test_max_order_cap(self, unit_square):
        with pytest.raises(ValueError):
            moments_from_vertices(unit_square, 17)

    def test_high_order_still_consistent(self, rng):
        poly = random_star_polygon(rng, 7)
        table = moments_from_vertices(poly, 16)
        ref = monomial_integral(poly, 16, 0)
        scale = abs(table.area) * poly.diameter**16
        assert abs(table[(16, 0)] - ref) <= 1e-9 * scale

    def test_json_round_trip(self, unit_square):
        t = moments_from_vertices(unit_square, 3)
        again = MomentTable.from_json_dict(t.to_json_dict())
        assert again.max_order == t.max_order
        assert dict(again.items()) == dict(t.items())

    def test_normalized_moments_within_bounding_box_range(self, rng):
        # <x^a y^b> is an average, so it must lie in the range x^a y^b takes
        # over the bounding box (extrema at corners or at zero crossings)
        for _ in range(10):
            poly = random_star_polygon(rng, int(rng.integers(3, 12)))
            table = moments_from_vertices(poly, 6)
            arr = poly.array
            xs = [arr[:, 0].min(), arr[:, 0].max()]
            ys = [arr[:, 1].min(), arr[:, 1].max()]
            if xs[0] < 0 < xs[1]:
                xs.append(0.0)
            if ys[0] < 0 < ys[1]:
                ys.append(0.0)
            for (a, b), value in table.items():
                candidates = [x**a * y**b for x in xs for y in ys]
                mean = value / table.area
                assert min(candidates) - 1e-12 <= mean <= max(candidates) + 1e-12


class TestFirstMoments:
    def test_unit_square(self, unit_square):
        area, centroid = first_moments(unit_square)
        assert area == pytest.approx(1.0)
        assert centroid == pytest.approx([0.5, 0.5])

    def test_triangle(self, right_triangle):
        _, centroid = first_moments(right_triangle)
        assert centroid == pytest.approx([1 / 3, 1 / 3])

    def test_translated_square(self, unit_square):
        _, centroid = first_moments(unit_square.translated((10.0, 20.0)))
        assert centroid == pytest.approx([10.5, 20.5], rel=1e-12)


class TestDavisSum:
    def test_affine_h_vanishes(self, rng):
        poly = random_star_polygon(rng, 11)
        assert abs(davis_sum(poly, [2.3 - 1j, 0.7 + 0.2j])) < 1e-12

    def test_z_squared_gives_twice_area(self, rng):
        poly = random_star_polygon(rng, 9)
        got = davis_sum(poly, [0, 0, 1])
        assert got == pytest.approx(2 * signed_area(poly) + 0j, rel=1e-12)

    def test_z_cubed_gives_centroid(self, rng):
        poly = random_star_polygon(rng, 8)
        area, centroid = first_moments(poly)
        got = davis_sum(poly, [0, 0, 0, 1])
        want = 6 * area * complex(centroid[0], centroid[1])
        assert got == pytest.approx(want, rel=1e-11)

    def test_random_polynomials_against_oracle(self, rng):
        for _ in range(10):
            poly = random_star_polygon(rng, int(rng.integers(3, 11)))
            deg = int(rng.integers(2, 9))
            coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
            got = davis_sum(poly, coeffs)
            want = surface_integral_of_hpp(poly, coeffs)
            scale = abs(signed_area(poly)) * float(np.sum(np.abs(coeffs))) * 72
            assert abs(got - want) <= 1e-10 * scale

    def test_cyclic_relabeling_invariance(self, rng):
        poly = random_star_polygon(rng, 9)
        coeffs = [0.3, 1j, -2.0, 0.5 + 0.5j]
        base = davis_sum(poly, coeffs)
        for shift in (1, 4, 8):
            rolled = Polygon(np.roll(poly.array, shift, axis=0))
            assert davis_sum(rolled, coeffs) == pytest.approx(base, rel=1e-12)

    def test_orientation_reversal_negates(self, rng):
        poly = random_star_polygon(rng, 10)
        coeffs = np.array([0.1, 0.2 - 1j, 1.5, 0.0, 2j])
        fwd = davis_sum(poly, coeffs)
        rev = davis_sum(poly.reversed(), coeffs)
        assert rev == pytest.approx(-fwd, rel=1e-12)

    def test_degree_cap(self, unit_square):
        with pytest.raises(ValueError):
            davis_sum(unit_square, [0.0] * 34)


class TestComplexMoments:
    def test_k2_is_twice_area(self, rng):
        poly = random_star_polygon(rng, 7)
        taus = complex_moments(poly, 2)
        assert taus[0] == pytest.approx(2 * signed_area(poly) + 0j, rel=1e-12)

    def test_k3_triangle(self, right_triangle):
        taus = complex_moments(right_triangle, 3)
        assert taus[1] == pytest.approx(1.0 + 1.0j, rel=1e-12)

    def test_matches_real_moment_table(self, rng):
        poly = random_star_polygon(rng, 9)
        taus = complex_moments(poly, 8)
        table = moments_from_vertices(poly, 6)
        for k, tau in zip(range(2, 9), taus):
            want = 0.0 + 0.0j
            for m in range(k - 1):
                want += math.comb(k - 2, m) * (1j) ** m * table[(k - 2 - m, m)]
            want *= k * (k - 1)
            scale = abs(table.area) * poly.diameter ** (k - 2) * 4 ** k
            assert abs(tau - want) <= 1e-9 * max(scale, 1.0)

    def test_k_max_validated(self, unit_square):
        with pytest.raises(ValueError):
            complex_moments(unit_square, 1)

    def test_accepts_complex_polygon_view(self, unit_square):
        cp = ComplexPolygon.from_polygon(unit_square)
        assert complex_moments(cp, 2)[0] == pytest.approx(2.0 + 0j)
