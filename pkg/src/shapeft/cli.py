"""Command-line front end.

JSON results go to stdout, human diagnostics and the run manifest go to
stderr, so outputs are pipeable and byte-identical across repeated runs
(the manifest carries the timestamp; data files never do).

Exit codes: 0 success, 1 malformed input, 2 invariant or tolerance failure,
3 regime violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .geom import GeometryError, Polygon, Polyhedron, edge_closure, turning_number
from .moments import (
    MomentConsistencyError,
    MomentTable,
    davis_sum,
    first_moments,
    moments_from_vertices,
)
from .oracle import QuadratureError, monomial_integral, triangulate
from .scatter import (
    DiffractionConfig,
    Disk,
    IntensityGrid,
    Rect,
    RegimeError,
    Sphere,
    porod_slope,
    render_pattern,
)
from .verify import run_suite
from .xform import (
    FormFactorValue,
    polygon_form_factor,
    polyhedron_form_factor,
)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_TOLERANCE = 2
EXIT_REGIME = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we map usage problems to 1
        raise _UsageError(message)


def _emit(obj: dict) -> str:
    text = json.dumps(obj, sort_keys=True)
    sys.stdout.write(text + "\n")
    return text


def _diag(message: str) -> None:
    sys.stderr.write(message + "\n")


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _manifest(args: argparse.Namespace, inputs: list[Path]) -> dict:
    flags = {
        k: v
        for k, v in sorted(vars(args).items())
        if k not in ("func", "echo_check") and not k.startswith("_")
    }
    return {
        "subcommand": args._command,
        "flags": {k: (str(v) if isinstance(v, Path) else v) for k, v in flags.items()},
        "inputs": {str(p): _digest(p) for p in inputs},
        "version": __version__,
        "timestamp_ns": time.time_ns(),
    }


def _write_manifest(manifest: dict, out_path: Path | None) -> None:
    text = json.dumps(manifest, sort_keys=True)
    sys.stderr.write("manifest: " + text + "\n")
    if out_path is not None:
        side = out_path.with_name(out_path.name + ".manifest.json")
        side.write_text(text + "\n")


def _load_shape(path: Path) -> Polygon | Polyhedron:
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise GeometryError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise GeometryError(f"{path}: expected an object with a 'vertices' key")
    if "faces" in data:
        return Polyhedron.from_json_dict(data)
    return Polygon.from_json_dict(data)


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"could not parse {what} {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# subcommands


def _cmd_area(args) -> int:
    shape = _load_shape(args.shape)
    if not isinstance(shape, Polygon):
        raise GeometryError("area reports are for polygons; got a polyhedron")
    shape.require_simple()
    area, centroid = first_moments(shape)
    result = {
        "area": area,
        "centroid": [float(centroid[0]), float(centroid[1])],
        "perimeter": shape.perimeter,
        "turning_number": turning_number(shape),
        "edge_closure": [float(c) for c in edge_closure(shape)],
    }
    text = _emit(result)
    _write_manifest(_manifest(args, [args.shape]), None)
    if args.echo_check:
        back = json.loads(text)
        if back != result:
            _diag("echo check failed: JSON round trip changed the report")
            return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_moments(args) -> int:
    shape = _load_shape(args.shape)
    if not isinstance(shape, Polygon):
        raise GeometryError("moment tables are for polygons; got a polyhedron")
    table = moments_from_vertices(shape, args.max_order)
    result = table.to_json_dict()
    if args.oracle:
        tri = triangulate(shape)
        area = abs(table.area)
        oracle_rows = []
        worst = 0.0
        for (a, b), value in sorted(table.items(), key=lambda kv: (sum(kv[0]), kv[0])):
            ref = monomial_integral(tri, a, b)
            scale = area * shape.diameter ** (a + b)
            worst = max(worst, abs(value - ref) / scale)
            oracle_rows.append({"a": a, "b": b, "value": ref})
        result["oracle"] = oracle_rows
        result["max_deviation"] = worst
    text = _emit(result)
    _write_manifest(_manifest(args, [args.shape]), None)
    if args.echo_check:
        back = MomentTable.from_json_dict(json.loads(text))
        if back.max_order != table.max_order or dict(back.items()) != dict(table.items()):
            _diag("echo check failed: moment table did not round trip")
            return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_fourier(args) -> int:
    shape = _load_shape(args.shape)
    beta = _parse_floats(args.beta, "--beta")
    if isinstance(shape, Polygon):
        if len(beta) != 2:
            raise _UsageError("polygon transforms need --beta bx,by")
        value = polygon_form_factor(shape, beta, allow_nonsimple=args.allow_nonsimple)
    else:
        if len(beta) != 3:
            raise _UsageError("polyhedron transforms need --beta bx,by,bz")
        value = polyhedron_form_factor(shape, beta)
    result = value.to_json_dict()
    text = _emit(result)
    _write_manifest(_manifest(args, [args.shape]), None)
    if args.echo_check:
        back = json.loads(text)
        if FormFactorValue(back["re"], back["im"]) != value:
            _diag("echo check failed: form factor did not round trip")
            return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_davis(args) -> int:
    shape = _load_shape(args.shape)
    if not isinstance(shape, Polygon):
        raise GeometryError("the vertex sum is defined for polygons")
    try:
        coeffs = [complex(tok.strip()) for tok in args.coeffs.split(",") if tok.strip()]
    except ValueError as exc:
        raise _UsageError(f"could not parse --coeffs: {exc}") from exc
    value = davis_sum(shape, coeffs)
    result = {"re": value.real, "im": value.imag}
    text = _emit(result)
    _write_manifest(_manifest(args, [args.shape]), None)
    if args.echo_check:
        back = json.loads(text)
        if complex(back["re"], back["im"]) != value:
            _diag("echo check failed: result did not round trip")
            return EXIT_TOLERANCE
    return EXIT_OK


def _aperture_from_args(args) -> tuple[Polygon | Disk | Rect, list[Path]]:
    chosen = [x for x in (args.shape, args.disk, args.rect) if x is not None]
    if len(chosen) != 1:
        raise _UsageError("choose exactly one aperture: a shape file, --disk R, or --rect a1,a2")
    if args.shape is not None:
        shape = _load_shape(args.shape)
        if not isinstance(shape, Polygon):
            raise GeometryError("diffraction apertures are planar; got a polyhedron")
        return shape, [args.shape]
    if args.disk is not None:
        return Disk(args.disk), []
    a = _parse_floats(args.rect, "--rect")
    if len(a) != 2:
        raise _UsageError("--rect needs two half-widths a1,a2")
    return Rect(a[0], a[1]), []


def _cmd_diffract(args) -> int:
    aperture, inputs = _aperture_from_args(args)
    cfg = DiffractionConfig(
        wavelength=args.wavelength,
        screen_distance=args.distance,
        half_extent=args.extent,
        resolution=args.res,
        aperture=aperture,
    )
    if not cfg.far_field_ok:
        _diag(
            "warning: screen distance is under 100 aperture diameters; "
            "far-field approximation is questionable"
        )
    import warnings as _warnings

    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        grid = render_pattern(cfg)
    out: Path = args.out
    suffix = out.suffix.lower()
    if suffix == ".csv":
        with out.open("w") as fh:
            grid.to_csv(fh)
    elif suffix == ".pgm":
        with out.open("wb") as fh:
            grid.to_pgm(fh, log=args.log)
    else:
        raise _UsageError(f"--out must end in .csv or .pgm, got {out.name!r}")
    result = {
        "out": str(out),
        "format": suffix[1:],
        "resolution": grid.resolution,
        "beta_scale": grid.beta_scale,
        "max_intensity": float(grid.values.max()),
        "far_field_ok": grid.far_field_ok,
        "log_mapping": bool(args.log) if suffix == ".pgm" else False,
    }
    text = _emit(result)
    _write_manifest(_manifest(args, inputs), out)
    if args.echo_check:
        json.loads(text)
        if suffix == ".csv":
            with out.open() as fh:
                back = IntensityGrid.from_csv(fh)
            if not np.array_equal(back.values, grid.values):
                _diag("echo check failed: CSV grid did not round trip")
                return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_porod(args) -> int:
    inputs: list[Path] = []
    chosen = [x for x in (args.shape, args.disk, args.sphere) if x is not None]
    if len(chosen) != 1:
        raise _UsageError("choose exactly one shape: a shape file, --disk R, or --sphere R")
    if args.shape is not None:
        shape = _load_shape(args.shape)
        inputs.append(args.shape)
    elif args.disk is not None:
        shape = Disk(args.disk)
    else:
        shape = Sphere(args.sphere)
    fit = porod_slope(
        shape,
        k_min=args.kmin,
        k_max=args.kmax,
        samples=args.samples,
        directions=args.directions,
    )
    result = fit.to_json_dict()
    text = _emit(result)
    _write_manifest(_manifest(args, inputs), None)
    if args.echo_check:
        back = json.loads(text)
        if back != result:
            _diag("echo check failed: fit did not round trip")
            return EXIT_TOLERANCE
    return EXIT_OK


def _cmd_verify(args) -> int:
    results = run_suite(args.suite)
    ok = all(r.ok for r in results)
    for r in results:
        _diag(f"[{'PASS' if r.ok else 'FAIL'}] {r.name}: {r.detail}")
    text = _emit(
        {"suite": args.suite, "ok": ok, "checks": [r.to_json_dict() for r in results]}
    )
    _write_manifest(_manifest(args, []), None)
    if args.echo_check:
        json.loads(text)
    return EXIT_OK if ok else EXIT_TOLERANCE


# ---------------------------------------------------------------------------


def _build_parser() -> _Parser:
    parser = _Parser(prog="shapeft", description=__doc__)
    parser.add_argument("--version", action="version", version=f"shapeft {__version__}")
    sub = parser.add_subparsers(dest="_command", required=True)

    def add_echo(p):
        p.add_argument("--echo-check", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("area", help="area, centroid, perimeter and turning number")
    p.add_argument("shape", type=Path)
    add_echo(p)
    p.set_defaults(func=_cmd_area)

    p = sub.add_parser("moments", help="vertex-derived moment table")
    p.add_argument("shape", type=Path)
    p.add_argument("--max-order", type=int, default=4)
    p.add_argument("--oracle", action="store_true", help="append triangulation cross-check")
    add_echo(p)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("fourier", help="shape transform at one wavevector")
    p.add_argument("shape", type=Path)
    p.add_argument("--beta", required=True, help="bx,by for polygons, bx,by,bz for polyhedra")
    p.add_argument(
        "--allow-nonsimple",
        action="store_true",
        help="evaluate the edge sum even for self-intersecting vertex lists",
    )
    add_echo(p)
    p.set_defaults(func=_cmd_fourier)

    p = sub.add_parser("davis", help="vertex-weighted polynomial integral (complex plane)")
    p.add_argument("shape", type=Path)
    p.add_argument("--coeffs", required=True, help="c0,c1,... (complex literals allowed)")
    add_echo(p)
    p.set_defaults(func=_cmd_davis)

    p = sub.add_parser("diffract", help="render a far-field diffraction pattern")
    p.add_argument("shape", type=Path, nargs="?", help="polygon aperture JSON")
    p.add_argument("--disk", type=float, help="circular aperture radius")
    p.add_argument("--rect", help="slit half-widths a1,a2")
    p.add_argument("--wavelength", type=float, required=True)
    p.add_argument("--distance", type=float, required=True)
    p.add_argument("--extent", type=float, required=True, help="detector half-extent")
    p.add_argument("--res", type=int, required=True)
    p.add_argument("--out", type=Path, required=True, help="output file (.csv or .pgm)")
    p.add_argument("--log", action="store_true", help="log10 tone mapping for PGM output")
    add_echo(p)
    p.set_defaults(func=_cmd_diffract)

    p = sub.add_parser("porod", help="fit the large-wavevector intensity power law")
    p.add_argument("shape", type=Path, nargs="?", help="polygon or polyhedron JSON")
    p.add_argument("--disk", type=float, help="flat disk radius")
    p.add_argument("--sphere", type=float, help="solid sphere radius")
    p.add_argument("--kmin", type=float, required=True)
    p.add_argument("--kmax", type=float, required=True)
    p.add_argument("--samples", type=int, default=600)
    p.add_argument("--directions", type=int, default=256)
    add_echo(p)
    p.set_defaults(func=_cmd_porod)

    p = sub.add_parser("verify", help="run the built-in invariant suites")
    p.add_argument(
        "--suite",
        default="all",
        choices=["geom", "xform", "moments", "identities", "all"],
    )
    add_echo(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        _diag(f"error: {exc}")
        return EXIT_BAD_INPUT
    try:
        return args.func(args)
    except _UsageError as exc:
        _diag(f"error: {exc}")
        return EXIT_BAD_INPUT
    except RegimeError as exc:
        _diag(f"regime violation: {exc}")
        return EXIT_REGIME
    except (MomentConsistencyError, QuadratureError) as exc:
        _diag(f"tolerance failure: {exc}")
        return EXIT_TOLERANCE
    except (GeometryError, ValueError, OSError, KeyError) as exc:
        _diag(f"error: {exc}")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
