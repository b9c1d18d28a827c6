"""Polygon moments straight from the vertices.

The central identity: multiplying the edge-sum Fourier transform of a
polygon by |b|^2 and matching powers of the wavevector components against
the moment series of exp(i b . x) yields, for every exponent pair (a, b)
with a + b = m >= 2, one linear relation between M(x^(a-2) y^b),
M(x^a y^(b-2)) and an explicit double sum over vertex powers.  Solving the
relations in increasing total order recovers every moment; the relations are
overdetermined and the redundant ones are asserted as consistency checks
rather than discarded.

Also here: the first-moment (centroid) edge sums, and the classical vertex
formula for integrating the second z-derivative of an analytic function over
a polygon in the complex plane, which specializes to the complex moments
used by shape-from-moments solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .geom import GeometryError, Polygon, signed_area

__all__ = [
    "MomentTable",
    "ComplexPolygon",
    "MomentConsistencyError",
    "moments_from_vertices",
    "first_moments",
    "davis_sum",
    "complex_moments",
]

MAX_ORDER_LIMIT = 16  # keeps every factorial in the relations exact in a double
MAX_DAVIS_DEGREE = 32

# Redundant extraction relations must reproduce already-solved moments to
# this relative tolerance (scaled by |area| * length^order); a violation
# means an implementation bug and is always surfaced.
CONSISTENCY_RTOL = 1e-10


class MomentConsistencyError(RuntimeError):
    """The overdetermined vertex-moment relations disagreed beyond tolerance."""


@dataclass(frozen=True, eq=False)
class MomentTable:
    """Unnormalized moments M(x^a y^b) for every a + b <= max_order.

    Lookup of an exponent pair outside the table raises KeyError: a missing
    entry is an error, never an implicit zero.
    """

    max_order: int
    entries: Mapping[tuple[int, int], float] = field(repr=False)

    def __getitem__(self, key: tuple[int, int]) -> float:
        return self.entries[key]

    def items(self):
        return self.entries.items()

    @property
    def area(self) -> float:
        return self.entries[(0, 0)]

    def to_json_dict(self) -> dict:
        moments = [
            {"a": a, "b": b, "value": v}
            for (a, b), v in sorted(self.entries.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        ]
        return {"max_order": self.max_order, "moments": moments}

    @classmethod
    def from_json_dict(cls, data: dict) -> "MomentTable":
        entries = {(int(m["a"]), int(m["b"])): float(m["value"]) for m in data["moments"]}
        return cls(int(data["max_order"]), entries)


@dataclass(frozen=True)
class ComplexPolygon:
    """View of a polygon as vertices z_n = x_n + i y_n with wraparound."""

    source: Polygon

    @cached_property
    def z(self) -> np.ndarray:
        arr = self.source.array
        out = arr[:, 0] + 1j * arr[:, 1]
        out.setflags(write=False)
        return out

    @classmethod
    def from_polygon(cls, poly: Polygon) -> "ComplexPolygon":
        return cls(poly)


def _relation_rhs_table(arr: np.ndarray, max_m: int) -> dict[tuple[int, int], float]:
    """Right-hand sides of the moment relations for all 2 <= a + b <= max_m.

    Returns R(a, b) such that
        theta(a-2) M(a-2, b) / ((a-2)! b!) + theta(b-2) M(a, b-2) / (a! (b-2)!)
        = R(a, b).
    """
    v = arr
    w = np.roll(arr, -1, axis=0)
    lx = w[:, 0] - v[:, 0]
    ly = w[:, 1] - v[:, 1]

    top = max_m  # vertex powers up to m - 1
    vx_pow = np.vstack([v[:, 0] ** k for k in range(top)])
    vy_pow = np.vstack([v[:, 1] ** k for k in range(top)])
    wx_pow = np.vstack([w[:, 0] ** k for k in range(top)])
    wy_pow = np.vstack([w[:, 1] ** k for k in range(top)])

    def t_coef(m: int, alpha: int) -> np.ndarray:
        """Coefficient of b1^alpha b2^(m-1-alpha), per edge."""
        total = np.zeros(len(v))
        for p in range(m):
            r = m - 1 - p
            j_lo = max(0, alpha - p)
            j_hi = min(alpha, r)
            for j in range(j_lo, j_hi + 1):
                coef = math.comb(r, j) * math.comb(p, alpha - j)
                total += coef * wx_pow[j] * wy_pow[r - j] * vx_pow[alpha - j] * vy_pow[p - alpha + j]
        return total

    out: dict[tuple[int, int], float] = {}
    for m in range(2, max_m + 1):
        fact_m = math.factorial(m)
        for a in range(m + 1):
            b = m - a
            s = 0.0
            if b >= 1:
                s += float(lx @ t_coef(m, a))
            if a >= 1:
                s -= float(ly @ t_coef(m, a - 1))
            out[(a, b)] = -s / fact_m
    return out


def _moment_recurrence(arr: np.ndarray, max_order: int) -> dict[tuple[int, int], float]:
    """Solve the vertex-moment relations for all moments with total order
    <= max_order, asserting the redundant relations agree."""
    rhs = _relation_rhs_table(arr, max_order + 2)

    span = arr.max(axis=0) - arr.min(axis=0)
    diam = float(np.hypot(*span))
    reach = max(diam, float(np.hypot(*arr.T).max()))

    moments: dict[tuple[int, int], float] = {}
    for t in range(max_order + 1):
        for q in range(t + 1):
            a, b = t - q + 2, q
            r = rhs[(a, b)]
            if q >= 2:
                r -= moments[(a, b - 2)] / (math.factorial(a) * math.factorial(b - 2))
            moments[(t - q, q)] = r * math.factorial(t - q) * math.factorial(q)

        area = abs(moments.get((0, 0), 0.0))
        scale = max(area * reach**t, 1e-300)
        redundant = [((0, t), rhs[(0, t + 2)] * math.factorial(t))]
        if t >= 1:
            redundant.append(((1, t - 1), rhs[(1, t + 1)] * math.factorial(t - 1)))
        for key, check in redundant:
            if abs(check - moments[key]) > CONSISTENCY_RTOL * scale:
                raise MomentConsistencyError(
                    f"relation for M(x^{key[0]} y^{key[1]}) disagrees: "
                    f"{moments[key]!r} vs {check!r} (scale {scale:.3e})"
                )
    return moments


def moments_from_vertices(poly: Polygon, max_order: int) -> MomentTable:
    """All unnormalized moments with total order <= max_order, computed
    directly from the vertex list.  Positive (CCW) winding gives
    M(x^0 y^0) = +area."""
    if not 0 <= max_order <= MAX_ORDER_LIMIT:
        raise ValueError(f"max_order must be in [0, {MAX_ORDER_LIMIT}], got {max_order}")
    poly.require_simple()
    return MomentTable(max_order, _moment_recurrence(poly.array, max_order))


def first_moments(poly: Polygon) -> tuple[float, np.ndarray]:
    """Area and centroid from the classical cubic edge sums."""
    poly.require_simple()
    area = signed_area(poly)
    if area == 0.0:
        raise GeometryError("zero-area polygon has no centroid")
    v = poly.array
    w = np.roll(v, -1, axis=0)
    mx = np.sum((w[:, 1] - v[:, 1]) * (w[:, 0] ** 2 + v[:, 0] ** 2 + w[:, 0] * v[:, 0])) / 6.0
    my = -np.sum((w[:, 0] - v[:, 0]) * (w[:, 1] ** 2 + v[:, 1] ** 2 + w[:, 1] * v[:, 1])) / 6.0
    return area, np.array([mx / area, my / area])


def _as_complex_polygon(poly: ComplexPolygon | Polygon) -> ComplexPolygon:
    if isinstance(poly, ComplexPolygon):
        return poly
    return ComplexPolygon(poly)


def davis_sum(cp: ComplexPolygon | Polygon, coefficients: Sequence[complex]) -> complex:
    """Integral over the polygon of the second z-derivative of the
    polynomial h(z) = sum_k c_k z^k, evaluated as a vertex-weighted sum of h:

        (i/2) sum_n [ (z*_{n-1} - z*_n)/(z_{n-1} - z_n)
                      - (z*_n - z*_{n+1})/(z_n - z_{n+1}) ] h(z_n)

    The weights depend only on the vertices, not on h.
    """
    cp = _as_complex_polygon(cp)
    cp.source.require_simple()
    coeffs = [complex(c) for c in coefficients]
    if len(coeffs) - 1 > MAX_DAVIS_DEGREE:
        raise ValueError(f"polynomial degree limited to {MAX_DAVIS_DEGREE}")
    z = cp.z
    zm = np.roll(z, 1)
    zp = np.roll(z, -1)
    weights = (np.conj(zm) - np.conj(z)) / (zm - z) - (np.conj(z) - np.conj(zp)) / (z - zp)
    h = np.zeros_like(z)
    for c in reversed(coeffs):
        h = h * z + c
    return complex(0.5j * np.sum(weights * h))


def complex_moments(cp: ComplexPolygon | Polygon, k_max: int) -> list[complex]:
    """tau_k = integral of d^2/dz^2 z^k over the polygon, for k = 2..k_max;
    equals k (k-1) times the (k-2)-th complex moment of the region."""
    if k_max < 2:
        raise ValueError(f"k_max must be at least 2, got {k_max}")
    cp = _as_complex_polygon(cp)
    out = []
    for k in range(2, k_max + 1):
        coeffs = [0.0] * k + [1.0]
        out.append(davis_sum(cp, coeffs))
    return out
