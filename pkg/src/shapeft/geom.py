"""Core 2D/3D shape types and the purely geometric identities they satisfy.

Polygons are ordered vertex lists with an implicit closing edge; polyhedra
are closed surfaces made of planar polygonal faces wound so their normals
point outward.  Counterclockwise winding is the positive orientation: a CCW
polygon has positive signed area and turning number +1.  All types are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
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
]

# Non-adjacent edge intersections are detected relative to the bounding-box
# diagonal; touching endpoints of adjacent edges are always allowed.
SIMPLICITY_TOL = 1e-12
# A face ring is accepted as planar if every vertex lies within this fraction
# of the solid's diameter from the best-fit plane of the ring.
FACE_PLANARITY_TOL = 1e-9


class GeometryError(ValueError):
    """Raised when a shape violates a structural invariant."""


def _as_points(points: Iterable[Sequence[float]], dim: int) -> tuple[tuple[float, ...], ...]:
    out = []
    for p in points:
        q = tuple(float(c) for c in p)
        if len(q) != dim:
            raise GeometryError(f"expected {dim}-dimensional points, got {p!r}")
        if not all(math.isfinite(c) for c in q):
            raise GeometryError(f"non-finite coordinate in {p!r}")
        out.append(q)
    return tuple(out)


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a polygon simplicity check."""

    ok: bool
    defect: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Polygon:
    """Ordered 2D vertex list; the edge from the last vertex back to the
    first is implicit.  Construction rejects structural defects (too few
    vertices, zero-length edges); full simplicity is checked separately by
    :func:`validate_simple` and cached on the instance."""

    vertices: tuple[tuple[float, float], ...]

    def __init__(self, vertices: Iterable[Sequence[float]]):
        pts = _as_points(vertices, 2)
        if len(pts) < 3:
            raise GeometryError(f"polygon needs at least 3 vertices, got {len(pts)}")
        arr = np.asarray(pts)
        edge_len = np.hypot(*(np.roll(arr, -1, axis=0) - arr).T)
        if np.any(edge_len == 0.0):
            i = int(np.argmin(edge_len))
            raise GeometryError(f"zero-length edge at vertex {i}")
        object.__setattr__(self, "vertices", pts)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.asarray(self.vertices, dtype=float)
        a.setflags(write=False)
        return a

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def edges(self) -> np.ndarray:
        e = np.roll(self.array, -1, axis=0) - self.array
        e.setflags(write=False)
        return e

    @cached_property
    def edge_midpoints(self) -> np.ndarray:
        c = 0.5 * (np.roll(self.array, -1, axis=0) + self.array)
        c.setflags(write=False)
        return c

    @cached_property
    def diameter(self) -> float:
        """Bounding-box diagonal; the length scale for all tolerances."""
        span = self.array.max(axis=0) - self.array.min(axis=0)
        return float(np.hypot(*span))

    @cached_property
    def perimeter(self) -> float:
        return float(np.hypot(*self.edges.T).sum())

    @cached_property
    def validity(self) -> ValidityReport:
        return validate_simple(self)

    def require_simple(self) -> "Polygon":
        if not self.validity.ok:
            raise GeometryError(f"polygon is not simple: {self.validity.defect}")
        return self

    def translated(self, d: Sequence[float]) -> "Polygon":
        return Polygon(self.array + np.asarray(d, dtype=float))

    def reversed(self) -> "Polygon":
        return Polygon(self.vertices[::-1])

    def to_json_dict(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Polygon":
        try:
            return cls(data["vertices"])
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed polygon JSON: {exc}") from exc


@dataclass(frozen=True)
class SampledCurve:
    """Closed curve sampled at N >= 8 points, assumed uniformly spaced in
    arclength.  Closure is implicit: the first point must not repeat at the
    end."""

    points: tuple[tuple[float, float], ...]

    def __init__(self, points: Iterable[Sequence[float]]):
        pts = _as_points(points, 2)
        if len(pts) < 8:
            raise GeometryError(f"sampled curve needs at least 8 points, got {len(pts)}")
        if pts[0] == pts[-1]:
            raise GeometryError("closure is implicit: first point must not be repeated")
        object.__setattr__(self, "points", pts)

    @cached_property
    def array(self) -> np.ndarray:
        a = np.asarray(self.points, dtype=float)
        a.setflags(write=False)
        return a

    @cached_property
    def perimeter(self) -> float:
        d = np.roll(self.array, -1, axis=0) - self.array
        return float(np.hypot(*d.T).sum())

    def reversed(self) -> "SampledCurve":
        return SampledCurve(self.points[::-1])


def _segments_intersect(p1, p2, q1, q2, tol: float) -> bool:
    """Proper or near-touching intersection test for two segments."""

    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > tol and d2 < -tol) or (d1 < -tol and d2 > tol)) and (
        (d3 > tol and d4 < -tol) or (d3 < -tol and d4 > tol)
    ):
        return True

    def on_segment(a, b, c):
        # c collinear-ish with a-b and inside its bounding box
        if abs(orient(a, b, c)) > tol:
            return False
        return (
            min(a[0], b[0]) - tol <= c[0] <= max(a[0], b[0]) + tol
            and min(a[1], b[1]) - tol <= c[1] <= max(a[1], b[1]) + tol
        )

    return (
        on_segment(q1, q2, p1)
        or on_segment(q1, q2, p2)
        or on_segment(p1, p2, q1)
        or on_segment(p1, p2, q2)
    )


def validate_simple(poly: Polygon | Iterable[Sequence[float]]) -> ValidityReport:
    """Check that a polygon is simple: no duplicate consecutive vertices and
    no two non-adjacent edges intersect.  Accepts a Polygon or a raw vertex
    list (the latter so defects a Polygon constructor would reject can still
    be reported)."""
    if isinstance(poly, Polygon):
        arr = poly.array
    else:
        arr = np.asarray(_as_points(poly, 2), dtype=float)
    n = len(arr)
    if n < 3:
        return ValidityReport(False, f"needs at least 3 vertices, got {n}")
    span = arr.max(axis=0) - arr.min(axis=0)
    diag = float(np.hypot(*span))
    if diag == 0.0:
        return ValidityReport(False, "all vertices coincide")
    tol = SIMPLICITY_TOL * diag

    nxt = np.roll(arr, -1, axis=0)
    lengths = np.hypot(*(nxt - arr).T)
    for i in np.flatnonzero(lengths <= tol):
        return ValidityReport(False, f"duplicate vertex: vertices {i} and {(i + 1) % n} coincide")

    # area scale for the orientation tests: tol * diag keeps the test
    # relative to the shape size
    cross_tol = tol * diag
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint: adjacent edges may touch
            if _segments_intersect(arr[i], arr[(i + 1) % n], arr[j], arr[(j + 1) % n], cross_tol):
                return ValidityReport(False, f"edges {i}-{i + 1} and {j}-{(j + 1) % n} intersect")
    if signed_area_of(arr) == 0.0:
        return ValidityReport(False, "signed area is zero")
    return ValidityReport(True)


def signed_area_of(arr: np.ndarray) -> float:
    """Shoelace sum over a raw (N, 2) vertex array."""
    x, y = arr[:, 0], arr[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return 0.5 * float(np.sum(x * yn - y * xn))


def signed_area(poly: Polygon) -> float:
    """Shoelace area: positive for counterclockwise winding."""
    return signed_area_of(poly.array)


def edge_closure(poly: Polygon) -> np.ndarray:
    """Sum of the directed edges; zero for any closed polygon.  Computed
    explicitly as a self-test of the wraparound indexing."""
    return poly.edges.sum(axis=0)


def turning_angles(poly: Polygon) -> np.ndarray:
    """Signed exterior angle at each vertex (between successive edges)."""
    e = poly.edges
    if np.any(np.hypot(*e.T) == 0.0):
        raise GeometryError("zero-length edge")
    ahead = np.roll(e, -1, axis=0)
    cross = e[:, 0] * ahead[:, 1] - e[:, 1] * ahead[:, 0]
    dot = e[:, 0] * ahead[:, 0] + e[:, 1] * ahead[:, 1]
    return np.arctan2(cross, dot)


def turning_number(poly: Polygon) -> int:
    """Number of full turns the edge direction makes in one circuit:
    +1 for a CCW simple polygon, -1 for CW."""
    total = float(turning_angles(poly).sum())
    n = round(total / (2.0 * math.pi))
    return int(n)


def gram_area_element(t1: Sequence[float], t2: Sequence[float]) -> float:
    """Area of the parallelogram spanned by two vectors (2D or 3D), from the
    square root of the Gram determinant; equals |t1||t2| sin(angle)."""
    a = np.asarray(t1, dtype=float)
    b = np.asarray(t2, dtype=float)
    g = np.array([[a @ a, a @ b], [a @ b, b @ b]])
    return float(math.sqrt(abs(np.linalg.det(g))))


def parallelepiped_volume(a1: Sequence[float], a2: Sequence[float], a3: Sequence[float]) -> float:
    """Volume spanned by three 3D vectors via the Gram determinant, checked
    against the triple product; the Gram form is coordinate independent."""
    a = np.asarray(a1, dtype=float)
    b = np.asarray(a2, dtype=float)
    c = np.asarray(a3, dtype=float)
    g = np.array([[a @ a, a @ b, a @ c], [a @ b, b @ b, b @ c], [a @ c, b @ c, c @ c]])
    vol = math.sqrt(abs(np.linalg.det(g)))
    triple = abs(float(np.dot(a, np.cross(b, c))))
    scale = max(np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(c), 1e-300) ** 3
    if abs(vol - triple) > 1e-12 * scale:
        raise GeometryError(
            f"Gram volume {vol} and triple product {triple} disagree beyond tolerance"
        )
    return vol


@dataclass(frozen=True)
class Polyhedron:
    """Closed surface of planar polygonal faces, each a ring of 0-based
    vertex indices wound so the face normal points outward."""

    vertices: tuple[tuple[float, float, float], ...]
    faces: tuple[tuple[int, ...], ...]

    def __init__(self, vertices: Iterable[Sequence[float]], faces: Iterable[Sequence[int]]):
        pts = _as_points(vertices, 3)
        rings = tuple(tuple(int(i) for i in f) for f in faces)
        object.__setattr__(self, "vertices", pts)
        object.__setattr__(self, "faces", rings)
        self._check()

    def _check(self) -> None:
        nv = len(self.vertices)
        if len(self.faces) < 4:
            raise GeometryError("a closed polyhedron needs at least 4 faces")
        arr = np.asarray(self.vertices, dtype=float)
        span = arr.max(axis=0) - arr.min(axis=0)
        diam = float(np.linalg.norm(span))
        if diam == 0.0:
            raise GeometryError("degenerate polyhedron: all vertices coincide")

        edge_count: dict[tuple[int, int], int] = {}
        for fi, ring in enumerate(self.faces):
            if len(ring) < 3:
                raise GeometryError(f"face {fi} has fewer than 3 vertices")
            if any(i < 0 or i >= nv for i in ring):
                raise GeometryError(f"face {fi} references a missing vertex")
            pts = arr[list(ring)]
            if np.any(np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1) == 0.0):
                raise GeometryError(f"face {fi} has a zero-length edge")
            # planarity: distance from each vertex to the face's mean plane
            centered = pts - pts.mean(axis=0)
            normal = _newell_normal(pts)
            nn = np.linalg.norm(normal)
            if nn == 0.0:
                raise GeometryError(f"face {fi} is degenerate")
            dist = np.abs(centered @ (normal / nn))
            if dist.max() > FACE_PLANARITY_TOL * diam:
                raise GeometryError(
                    f"face {fi} is not planar (deviation {dist.max():.3e} "
                    f"> {FACE_PLANARITY_TOL * diam:.3e})"
                )
            for k in range(len(ring)):
                a, b = ring[k], ring[(k + 1) % len(ring)]
                signed = (a, b) if a < b else (b, a)
                direction = 1 if a < b else -1
                edge_count[signed] = edge_count.get(signed, 0) + direction
        for (a, b), balance in edge_count.items():
            if balance != 0:
                raise GeometryError(
                    f"surface not closed: edge {a}-{b} is not shared by two "
                    "faces with opposite traversal"
                )
        if polyhedron_volume_unchecked(self) <= 0.0:
            raise GeometryError("volume is not positive: faces are not wound outward")

    @cached_property
    def array(self) -> np.ndarray:
        a = np.asarray(self.vertices, dtype=float)
        a.setflags(write=False)
        return a

    @cached_property
    def diameter(self) -> float:
        span = self.array.max(axis=0) - self.array.min(axis=0)
        return float(np.linalg.norm(span))

    @cached_property
    def face_area_normals(self) -> np.ndarray:
        """Per face: area times outward unit normal (the Newell vector)."""
        out = np.array([_newell_normal(self.array[list(f)]) for f in self.faces])
        out.setflags(write=False)
        return out

    @cached_property
    def face_areas(self) -> np.ndarray:
        a = np.linalg.norm(self.face_area_normals, axis=1)
        a.setflags(write=False)
        return a

    @cached_property
    def face_normals(self) -> np.ndarray:
        n = self.face_area_normals / self.face_areas[:, None]
        n.setflags(write=False)
        return n

    @cached_property
    def face_centroids(self) -> np.ndarray:
        out = np.array([_ring_centroid(self.array[list(f)]) for f in self.faces])
        out.setflags(write=False)
        return out

    def translated(self, d: Sequence[float]) -> "Polyhedron":
        return Polyhedron(self.array + np.asarray(d, dtype=float), self.faces)

    def to_json_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertices],
            "faces": [list(f) for f in self.faces],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Polyhedron":
        try:
            return cls(data["vertices"], data["faces"])
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed polyhedron JSON: {exc}") from exc


def _newell_normal(pts: np.ndarray) -> np.ndarray:
    """Half the sum of consecutive cross products: area * outward normal for
    an outward-wound planar ring."""
    nxt = np.roll(pts, -1, axis=0)
    return 0.5 * np.cross(pts, nxt).sum(axis=0)


def _ring_centroid(pts: np.ndarray) -> np.ndarray:
    """Area centroid of a planar ring via a triangle fan from its first vertex."""
    a = pts[0]
    b = pts[1:-1]
    c = pts[2:]
    tri_area_vec = 0.5 * np.cross(b - a, c - a)
    # signed weight along the ring normal keeps reflex fans correct
    normal = _newell_normal(pts)
    normal = normal / np.linalg.norm(normal)
    w = tri_area_vec @ normal
    centroids = (a + b + c) / 3.0
    return (w[:, None] * centroids).sum(axis=0) / w.sum()


def polyhedron_volume_unchecked(p: Polyhedron) -> float:
    arr = np.asarray(p.vertices, dtype=float)
    total = 0.0
    for ring in p.faces:
        pts = arr[list(ring)]
        nvec = _newell_normal(pts)
        total += float(pts[0] @ nvec)
    return total / 3.0


def polyhedron_volume(p: Polyhedron) -> float:
    """Volume from the divergence theorem: one third of the sum over faces
    of (anchor . area-normal)."""
    return polyhedron_volume_unchecked(p)


def polyhedron_volume_moments(p: Polyhedron) -> tuple[float, np.ndarray, np.ndarray]:
    """Volume, centroid and second moment matrix of the solid.

    Decomposes the solid into signed tetrahedra (origin, a, b, c) over a
    triangle fan of every face; valid for any closed outward-wound surface.
    Second moments are about the origin: S[i, j] = integral of x_i x_j dV.
    """
    arr = p.array
    vol = 0.0
    first = np.zeros(3)
    second = np.zeros((3, 3))
    for ring in p.faces:
        pts = arr[list(ring)]
        a = pts[0]
        for k in range(1, len(pts) - 1):
            b, c = pts[k], pts[k + 1]
            j = float(np.linalg.det(np.stack([a, b, c])))
            vol += j / 6.0
            first += j * (a + b + c) / 24.0
            pp = np.outer(a, a) + np.outer(b, b) + np.outer(c, c)
            pq = (
                np.outer(a, b) + np.outer(b, a)
                + np.outer(a, c) + np.outer(c, a)
                + np.outer(b, c) + np.outer(c, b)
            )
            second += j * (pp / 60.0 + pq / 120.0)
    return vol, first / vol, second
