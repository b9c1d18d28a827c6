"""Self-verification suites behind the CLI `verify` subcommand.

Each suite runs a battery of invariant checks sized for interactive use and
returns structured results; the exhaustive versions with the full sample
counts live in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geom, identities, moments, oracle, sampling, xform

__all__ = ["CheckResult", "run_suite", "SUITES"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def to_json_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


def _check(results: list[CheckResult], name: str, ok: bool, detail: str) -> None:
    results.append(CheckResult(name, bool(ok), detail))


def _suite_geom() -> list[CheckResult]:
    rng = np.random.default_rng(101)
    out: list[CheckResult] = []

    worst_closure = 0.0
    turn_ok = True
    for _ in range(300):
        poly = sampling.random_star_polygon(rng, int(rng.integers(3, 24)))
        closure = np.linalg.norm(geom.edge_closure(poly))
        worst_closure = max(worst_closure, closure / poly.diameter)
        if geom.turning_number(poly) != 1 or geom.turning_number(poly.reversed()) != -1:
            turn_ok = False
    _check(out, "edge closure", worst_closure < 1e-15, f"max |sum|/diam = {worst_closure:.2e}")
    _check(out, "turning number +-1", turn_ok, "300 star polygons, both windings")

    worst_gram = 0.0
    for _ in range(300):
        a, b, c = rng.normal(size=(3, 3)) * rng.uniform(0.1, 10)
        vol = geom.parallelepiped_volume(a, b, c)
        triple = abs(np.dot(a, np.cross(b, c)))
        scale = max(np.linalg.norm(a), np.linalg.norm(b), np.linalg.norm(c)) ** 3
        worst_gram = max(worst_gram, abs(vol - triple) / scale)
    _check(out, "gram vs triple product", worst_gram < 1e-12, f"max scaled gap = {worst_gram:.2e}")

    worst_normal = 0.0
    for _ in range(8):
        p = sampling.random_convex_polyhedron(rng, 12)
        resid = np.linalg.norm(p.face_area_normals.sum(axis=0)) / p.face_areas.sum()
        worst_normal = max(worst_normal, resid)
    _check(
        out,
        "face normal sum (closed surface)",
        worst_normal < 1e-12,
        f"max |sum|/area = {worst_normal:.2e}",
    )
    return out


def _suite_xform() -> list[CheckResult]:
    rng = np.random.default_rng(202)
    out: list[CheckResult] = []

    worst_conj = worst_trans = worst_bound = 0.0
    for _ in range(20):
        poly = sampling.random_star_polygon(rng, int(rng.integers(3, 13)))
        area = abs(geom.signed_area(poly))
        betas = rng.uniform(-20, 20, size=(10, 2))
        vals = xform.polygon_form_factor_many(poly, betas)
        neg = xform.polygon_form_factor_many(poly, -betas)
        worst_conj = max(worst_conj, np.max(np.abs(neg - np.conj(vals))) / area)
        shift = rng.uniform(-3, 3, size=2)
        moved = xform.polygon_form_factor_many(poly.translated(shift), betas)
        phase = np.exp(1j * (betas @ shift))
        worst_trans = max(worst_trans, np.max(np.abs(moved - phase * vals)) / area)
        worst_bound = max(worst_bound, (np.max(np.abs(vals)) - area) / area)
    _check(out, "conjugate symmetry", worst_conj < 1e-12, f"max = {worst_conj:.2e}")
    _check(out, "translation covariance", worst_trans < 1e-12, f"max = {worst_trans:.2e}")
    _check(out, "|phi| bounded by area", worst_bound <= 1e-12, f"max excess = {worst_bound:.2e}")

    worst_oracle = 0.0
    for _ in range(6):
        poly = sampling.random_star_polygon(rng, int(rng.integers(3, 13)))
        area = abs(geom.signed_area(poly))
        for _ in range(4):
            beta = rng.uniform(-1, 1, 2)
            beta *= rng.uniform(1, 50 / poly.diameter) / np.linalg.norm(beta)
            got = xform.polygon_form_factor(poly, beta).cvalue
            want = oracle.quad_form_factor(poly, beta).cvalue
            worst_oracle = max(worst_oracle, abs(got - want) / area)
    _check(out, "matches quadrature", worst_oracle < 1e-8, f"max = {worst_oracle:.2e}")

    worst_band = 0.0
    for _ in range(5):
        poly = sampling.random_star_polygon(rng, 9)
        area = abs(geom.signed_area(poly))
        for scale in np.geomspace(5e-4, 5e-3, 7):
            direction = rng.normal(size=2)
            direction /= np.linalg.norm(direction)
            beta = (scale / poly.diameter) * direction
            edge = xform._edge_eval(poly, beta.reshape(1, 2))[0]
            series = xform._series_eval(poly, beta.reshape(1, 2))[0]
            worst_band = max(worst_band, abs(edge - series) / area)
    _check(out, "branch continuity band", worst_band < 1e-9, f"max = {worst_band:.2e}")
    return out


def _suite_moments() -> list[CheckResult]:
    rng = np.random.default_rng(303)
    out: list[CheckResult] = []

    worst = 0.0
    for _ in range(15):
        poly = sampling.random_star_polygon(rng, int(rng.integers(3, 13)))
        table = moments.moments_from_vertices(poly, 6)
        tri = oracle.triangulate(poly)
        area = abs(table.area)
        for (a, b), value in table.items():
            ref = oracle.monomial_integral(tri, a, b)
            scale = area * poly.diameter ** (a + b)
            worst = max(worst, abs(value - ref) / scale)
    _check(out, "vertex moments vs triangulation", worst < 1e-10, f"max = {worst:.2e}")

    worst_davis = 0.0
    for _ in range(10):
        poly = sampling.random_star_polygon(rng, int(rng.integers(3, 11)))
        deg = int(rng.integers(2, 9))
        coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        got = moments.davis_sum(poly, coeffs)
        want = 0.0 + 0.0j
        for k in range(2, deg + 1):
            ck = coeffs[k] * k * (k - 1)
            for j in range(k - 1):
                want += ck * math.comb(k - 2, j) * (1j) ** j * oracle.monomial_integral(
                    poly, k - 2 - j, j
                )
        scale = abs(geom.signed_area(poly)) * sum(abs(c) for c in coeffs) * 36
        worst_davis = max(worst_davis, abs(got - want) / scale)
    _check(out, "vertex formula vs surface integral", worst_davis < 1e-10, f"max = {worst_davis:.2e}")

    poly = sampling.random_star_polygon(rng, 9)
    taus = moments.complex_moments(poly, 6)
    table = moments.moments_from_vertices(poly, 4)
    worst_tau = 0.0
    for k, tau in zip(range(2, 7), taus):
        want = 0.0 + 0.0j
        for m in range(k - 1):
            want += math.comb(k - 2, m) * (1j) ** m * table[(k - 2 - m, m)]
        want *= k * (k - 1)
        worst_tau = max(worst_tau, abs(tau - want) / (abs(table.area) * 9**k))
    _check(out, "complex moments vs real table", worst_tau < 1e-9, f"max = {worst_tau:.2e}")
    return out


def _suite_identities() -> list[CheckResult]:
    rng = np.random.default_rng(404)
    out: list[CheckResult] = []

    qs = []
    for _ in range(2000):
        poly = sampling.random_star_polygon(rng, int(rng.integers(3, 16)))
        qs.append(identities.isoperimetric_ratio(poly))
    _check(out, "isoperimetric inequality", max(qs) <= 1.0, f"max Q = {max(qs):.6f}")

    worst_gap = 0.0
    ok = True
    for field in identities.standard_fields():
        for _ in range(10):
            poly = sampling.random_star_polygon(rng, int(rng.integers(3, 10)))
            res = identities.stokes_check(field, poly)
            gap = res.abs_gap / (1.0 + abs(res.lhs))
            worst_gap = max(worst_gap, gap)
            ok = ok and gap < 1e-8
    _check(out, "planar circulation identity", ok, f"max scaled gap = {worst_gap:.2e}")

    errs = []
    for n in (64, 128, 256, 512, 1024):
        err = abs(identities.curve_area(sampling.sampled_circle(n)) - math.pi)
        errs.append(err)
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    _check(
        out,
        "curve area second-order convergence",
        min(ratios) >= 3.9,
        f"error ratios per doubling: {['%.2f' % r for r in ratios]}",
    )
    return out


SUITES = {
    "geom": _suite_geom,
    "xform": _suite_xform,
    "moments": _suite_moments,
    "identities": _suite_identities,
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        results = []
        for suite in SUITES.values():
            results.extend(suite())
        return results
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name]()
