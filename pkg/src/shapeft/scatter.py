"""Far-field diffraction rendering and scattering asymptotics.

A detector pixel at physical position x maps to the wavevector
beta = (k / L) x with k = 2 pi / wavelength and L the screen distance; the
recorded intensity is the squared magnitude of the aperture transform at
beta.  Rendering is a pure pixel-wise map, so any pixel can be reproduced by
a direct transform call.

The large-wavevector intensity of a compact shape falls off as a power law
whose exponent is one more than the dimension (-3 for flat shapes, -4 for
solids).  `porod_slope` measures that exponent from the computed intensity:
direction-averaged, envelope-smoothed by a sliding geometric mean spanning
one oscillation period, then fit in log-log.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .geom import Polygon, Polyhedron
from .xform import (
    _sinc,
    disk_form_factor_radial,
    polygon_form_factor_many,
    polyhedron_form_factor_many,
)

__all__ = [
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
    "fibonacci_sphere",
    "circle_directions",
]

# Far-field rule of thumb: screen distance at least this many aperture
# diameters away, otherwise the rendered pattern is flagged.
FAR_FIELD_FACTOR = 100.0
# porod_slope refuses to fit below k * diameter = 20 (not yet asymptotic).
POROD_KMIN_DIAMETERS = 20.0
# Floor applied to intensities before taking logs in tone mapping and fits.
LOG_FLOOR = 1e-12


class RegimeError(ValueError):
    """Requested parameters are outside the asymptotic regime."""


@dataclass(frozen=True)
class Disk:
    """Circular aperture / flat particle of the given radius, at the origin."""

    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class Rect:
    """Rectangular (slit) aperture spanning [-a1, a1] x [-a2, a2]."""

    a1: float
    a2: float

    def __post_init__(self):
        if self.a1 <= 0 or self.a2 <= 0:
            raise ValueError("half-widths must be positive")

    @property
    def diameter(self) -> float:
        return 2.0 * math.hypot(self.a1, self.a2)


@dataclass(frozen=True)
class Sphere:
    """Solid ball of the given radius, centered at the origin."""

    radius: float

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


Aperture = Polygon | Disk | Rect


def _aperture_diameter(aperture: Aperture) -> float:
    return aperture.diameter


@dataclass(frozen=True)
class DiffractionConfig:
    """Geometry of a far-field diffraction computation.

    half_extent is the detector half-width: pixel centers span
    (-half_extent + pitch/2) .. (half_extent - pitch/2) on both axes with
    pitch = 2 half_extent / resolution.
    """

    wavelength: float
    screen_distance: float
    half_extent: float
    resolution: int
    aperture: Aperture

    def __post_init__(self):
        if self.wavelength <= 0 or self.screen_distance <= 0 or self.half_extent <= 0:
            raise ValueError("wavelength, screen_distance and half_extent must be positive")
        if self.resolution < 2:
            raise ValueError("resolution must be at least 2")
        if isinstance(self.aperture, Polygon):
            self.aperture.require_simple()

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength

    @property
    def beta_scale(self) -> float:
        """Conversion from detector position to wavevector: beta = scale * x."""
        return self.wavenumber / self.screen_distance

    @property
    def far_field_ok(self) -> bool:
        return self.screen_distance >= FAR_FIELD_FACTOR * _aperture_diameter(self.aperture)

    def pixel_positions(self) -> np.ndarray:
        pitch = 2.0 * self.half_extent / self.resolution
        return -self.half_extent + (np.arange(self.resolution) + 0.5) * pitch


@dataclass(frozen=True, eq=False)
class IntensityGrid:
    """Raster of diffraction intensities with its physical axis metadata.

    values[iy, ix] is the intensity at physical position
    (x[ix], y[iy]) on the observation plane; multiply positions by
    beta_scale for wavevector coordinates.
    """

    values: np.ndarray
    half_extent: float
    beta_scale: float
    wavelength: float
    screen_distance: float
    far_field_ok: bool

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("intensity grid must be square")
        if np.any(v < 0):
            raise ValueError("intensities must be non-negative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def resolution(self) -> int:
        return self.values.shape[0]

    def pixel_positions(self) -> np.ndarray:
        pitch = 2.0 * self.half_extent / self.resolution
        return -self.half_extent + (np.arange(self.resolution) + 0.5) * pitch

    def beta_magnitudes(self) -> np.ndarray:
        pos = self.pixel_positions() * self.beta_scale
        bx, by = np.meshgrid(pos, pos, indexing="xy")
        return np.hypot(bx, by)

    # -- serialization ------------------------------------------------------

    def to_csv(self, stream: TextIO) -> None:
        stream.write("# shapeft intensity grid\n")
        stream.write(f"# resolution: {self.resolution}\n")
        stream.write(f"# half_extent: {self.half_extent!r}\n")
        stream.write(f"# beta_scale: {self.beta_scale!r}\n")
        stream.write(f"# wavelength: {self.wavelength!r}\n")
        stream.write(f"# screen_distance: {self.screen_distance!r}\n")
        stream.write(f"# far_field_ok: {self.far_field_ok}\n")
        stream.write("# rows: y from -half_extent to +half_extent; columns: x likewise\n")
        for row in self.values:
            stream.write(",".join(repr(float(v)) for v in row))
            stream.write("\n")

    @classmethod
    def from_csv(cls, stream: TextIO) -> "IntensityGrid":
        meta: dict[str, str] = {}
        rows = []
        for line in stream:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, _, val = body.partition(":")
                    meta[key.strip()] = val.strip()
                continue
            rows.append([float(tok) for tok in line.split(",")])
        return cls(
            values=np.asarray(rows, dtype=float),
            half_extent=float(meta["half_extent"]),
            beta_scale=float(meta["beta_scale"]),
            wavelength=float(meta["wavelength"]),
            screen_distance=float(meta["screen_distance"]),
            far_field_ok=meta.get("far_field_ok", "True") == "True",
        )

    def to_pgm(self, stream, log: bool = False) -> None:
        """16-bit binary PGM (P5, maxval 65535), top row = largest y.

        Linear mapping scales by the global maximum; log mapping spans
        [max * 1e-12, max] in log10.
        """
        v = self.values
        vmax = float(v.max())
        if vmax <= 0.0:
            pix = np.zeros_like(v, dtype=np.uint16)
        elif log:
            clamped = np.maximum(v, vmax * LOG_FLOOR)
            lo = math.log10(vmax * LOG_FLOOR)
            hi = math.log10(vmax)
            pix = np.round(65535.0 * (np.log10(clamped) - lo) / (hi - lo)).astype(np.uint16)
        else:
            pix = np.round(65535.0 * v / vmax).astype(np.uint16)
        n = self.resolution
        stream.write(f"P5\n{n} {n}\n65535\n".encode("ascii"))
        stream.write(pix[::-1].astype(">u2").tobytes())

    @staticmethod
    def read_pgm(stream) -> np.ndarray:
        """Read back a P5/65535 file written by to_pgm (values only)."""
        magic = stream.readline().split()
        dims = stream.readline().split()
        maxval = stream.readline().split()
        if magic != [b"P5"] or maxval != [b"65535"]:
            raise ValueError("not a 16-bit P5 PGM produced by shapeft")
        w, h = int(dims[0]), int(dims[1])
        data = np.frombuffer(stream.read(w * h * 2), dtype=">u2").reshape(h, w)
        return data[::-1].astype(np.uint16)


def render_pattern(cfg: DiffractionConfig) -> IntensityGrid:
    """Render |transform|^2 on the detector grid; deterministic, and each
    pixel equals a direct form-factor evaluation at that pixel's wavevector."""
    if not cfg.far_field_ok:
        warnings.warn(
            "screen distance is less than 100 aperture diameters; "
            "far-field approximation is questionable",
            stacklevel=2,
        )
    pos = cfg.pixel_positions() * cfg.beta_scale
    bx, by = np.meshgrid(pos, pos, indexing="xy")
    betas = np.stack([bx.ravel(), by.ravel()], axis=1)
    ap = cfg.aperture
    if isinstance(ap, Polygon):
        amp = polygon_form_factor_many(ap, betas)
        # squared parts rather than |.|**2: pixel values reproduce exactly
        # from FormFactorValue components in spot checks
        intensity = amp.real**2 + amp.imag**2
    elif isinstance(ap, Disk):
        mags = np.hypot(betas[:, 0], betas[:, 1])
        intensity = disk_form_factor_radial(ap.radius, mags) ** 2
    elif isinstance(ap, Rect):
        vals = 4.0 * ap.a1 * ap.a2 * _sinc(betas[:, 0] * ap.a1) * _sinc(betas[:, 1] * ap.a2)
        intensity = vals**2
    else:
        raise TypeError(f"unsupported aperture {type(ap).__name__}")
    return IntensityGrid(
        values=intensity.reshape(cfg.resolution, cfg.resolution),
        half_extent=cfg.half_extent,
        beta_scale=cfg.beta_scale,
        wavelength=cfg.wavelength,
        screen_distance=cfg.screen_distance,
        far_field_ok=cfg.far_field_ok,
    )


def radial_average(grid: IntensityGrid) -> np.ndarray:
    """Shell-averaged radial profile: bins pixels by wavevector magnitude
    into ceil(sqrt(2) resolution / 2) annular shells; returns an (S, 2) array
    of (shell-center |beta|, mean intensity) for the populated shells."""
    mags = grid.beta_magnitudes().ravel()
    vals = grid.values.ravel()
    n_shells = math.ceil(math.sqrt(2.0) * grid.resolution / 2.0)
    width = mags.max() / n_shells if mags.max() > 0 else 1.0
    idx = np.minimum((mags / width).astype(int), n_shells - 1)
    sums = np.bincount(idx, weights=vals, minlength=n_shells)
    counts = np.bincount(idx, minlength=n_shells)
    populated = counts > 0
    centers = (np.arange(n_shells) + 0.5) * width
    return np.stack([centers[populated], sums[populated] / counts[populated]], axis=1)


# ---------------------------------------------------------------------------
# Porod asymptotics


def sphere_form_factor(radius: float, k) -> np.ndarray | float:
    """Transform of a solid ball: 4 pi (sin kR - kR cos kR) / k^3; tends to
    the volume as k -> 0."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    karr = np.asarray(k, dtype=float)
    scalar = karr.ndim == 0
    karr = np.atleast_1d(karr)
    out = np.empty_like(karr)
    small = np.abs(karr) * radius < 1e-4
    kr = karr[~small] * radius
    out[~small] = 4.0 * np.pi * (np.sin(kr) - kr * np.cos(kr)) / karr[~small] ** 3
    # series of (sin x - x cos x)/x^3 = 1/3 - x^2/30 + x^4/840
    x2 = (karr[small] * radius) ** 2
    out[small] = 4.0 * np.pi * radius**3 * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0)
    return float(out[0]) if scalar else out


def fibonacci_sphere(n: int) -> np.ndarray:
    """Deterministic quasi-uniform unit vectors on the sphere."""
    i = np.arange(n) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n)
    azimuth = math.pi * (1.0 + math.sqrt(5.0)) * i
    return np.stack(
        [np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar), np.cos(polar)],
        axis=1,
    )


def circle_directions(n: int) -> np.ndarray:
    """Deterministic uniform unit vectors on the circle (offset half a step
    so no direction aligns exactly with the axes)."""
    th = 2.0 * math.pi * (np.arange(n) + 0.5) / n
    return np.stack([np.cos(th), np.sin(th)], axis=1)


@dataclass(frozen=True)
class PorodFit:
    """Least-squares power-law fit of the direction-averaged intensity."""

    k_range: tuple[float, float]
    slope: float
    intercept: float
    slope_stderr: float
    samples: int
    directions: int

    def to_json_dict(self) -> dict:
        return {
            "k_min": self.k_range[0],
            "k_max": self.k_range[1],
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "samples": self.samples,
            "directions": self.directions,
        }


PorodShape = Polygon | Polyhedron | Disk | Sphere


def _mean_intensity(shape: PorodShape, ks: np.ndarray, dirs: np.ndarray | None) -> np.ndarray:
    if isinstance(shape, Sphere):
        return np.asarray(sphere_form_factor(shape.radius, ks)) ** 2
    if isinstance(shape, Disk):
        return disk_form_factor_radial(shape.radius, ks) ** 2
    if isinstance(shape, (Polygon, Polyhedron)):
        assert dirs is not None
        evaluate = (
            polygon_form_factor_many if isinstance(shape, Polygon) else polyhedron_form_factor_many
        )
        total = np.zeros(len(ks))
        # batch over directions in slabs to bound scratch memory
        slab = max(1, 2_000_000 // (len(ks) * dirs.shape[1]))
        for lo in range(0, len(dirs), slab):
            chunk = dirs[lo : lo + slab]
            betas = (ks[:, None, None] * chunk[None, :, :]).reshape(-1, dirs.shape[1])
            amps = evaluate(shape, betas).reshape(len(ks), len(chunk))
            total += (np.abs(amps) ** 2).sum(axis=1)
        return total / len(dirs)
    raise TypeError(f"unsupported shape {type(shape).__name__}")


def porod_slope(
    shape: PorodShape,
    k_min: float,
    k_max: float,
    samples: int = 600,
    directions: int = 256,
    direction_set: np.ndarray | None = None,
) -> PorodFit:
    """Power-law exponent of the intensity envelope over [k_min, k_max].

    Evaluates |transform|^2 at log-spaced magnitudes along a deterministic
    quasi-uniform direction set (skipped for isotropic shapes), smooths with
    a sliding geometric mean spanning one oscillation period (pi over the
    half-diameter), and fits log intensity against log k.  Raises RegimeError
    when k_min * diameter < 20, where the power law has not set in.
    """
    if k_min <= 0 or k_max <= k_min:
        raise ValueError("need 0 < k_min < k_max")
    if samples < 50:
        raise ValueError("need at least 50 samples")
    diameter = shape.diameter
    if k_min * diameter < POROD_KMIN_DIAMETERS:
        raise RegimeError(
            f"k_min * diameter = {k_min * diameter:.2f} is below "
            f"{POROD_KMIN_DIAMETERS}: not in the asymptotic regime"
        )

    if direction_set is not None:
        dirs = np.asarray(direction_set, dtype=float)
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    elif isinstance(shape, Polygon):
        dirs = circle_directions(directions)
    elif isinstance(shape, Polyhedron):
        dirs = fibonacci_sphere(directions)
    else:
        dirs = None  # isotropic

    ks = np.geomspace(k_min, k_max, samples)
    intensity = _mean_intensity(shape, ks, dirs)

    feature = diameter / 2.0
    log_k = np.log(ks)
    step = log_k[1] - log_k[0]
    log_i = np.log(np.maximum(intensity, intensity.max() * 1e-280))
    smoothed = np.empty_like(log_i)
    for i, k in enumerate(ks):
        half = 0.5 * max(math.pi / (feature * k), 5.0 * step)
        mask = np.abs(log_k - log_k[i]) <= half
        smoothed[i] = log_i[mask].mean()

    design = np.stack([log_k, np.ones_like(log_k)], axis=1)
    coef, *_ = np.linalg.lstsq(design, smoothed, rcond=None)
    resid = smoothed - design @ coef
    dof = len(ks) - 2
    cov = (resid @ resid / dof) * np.linalg.inv(design.T @ design)
    n_dirs = 1 if dirs is None else len(dirs)
    return PorodFit(
        k_range=(k_min, k_max),
        slope=float(coef[0]),
        intercept=float(coef[1]),
        slope_stderr=float(math.sqrt(cov[0, 0])),
        samples=samples,
        directions=n_dirs,
    )
