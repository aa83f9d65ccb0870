"""Simulation command line.

Subcommands report fixation parameters, sample the horopter, emit the
Essential matrix, synthesize noisy correspondences, reconstruct depth
maps and estimate gaze from image data.

Exit codes: 0 success, 2 input validation, 3 file or schema error,
4 degenerate geometry.
"""

from __future__ import annotations

import functools
import time
from pathlib import Path

import click
import numpy as np

from cyclovision.epipolar import epipoles, essential_closed_form
from cyclovision.errors import DegenerateGeometryError, SchemaError
from cyclovision.estimation import (
    EstimationConfig,
    estimate_depth_map,
    estimate_gaze,
)
from cyclovision.gaze import (
    GazeState,
    eye_azimuths,
    helmholtz_from_point,
    vergence_version,
    vieth_muller,
)
from cyclovision.geometry import rot_x
from cyclovision.horopter import forward_arc_limit, midline, vm_point
from cyclovision.records import (
    SCHEMA_VERSION,
    ExperimentRecord,
    correspondence_file,
    csv_rows,
    depth_map_file,
    dumps,
    gaze_to_dict,
    load_json,
    parse_correspondence_file,
)
from cyclovision.simulate import GENERATORS, SceneSpec, synthesize_scene


class _DegenerateGeometryFailure(click.ClickException):
    exit_code = 4


class _SchemaFailure(click.ClickException):
    exit_code = 3


def _mapped_errors(f):
    """Translate library errors into the documented exit codes."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except SchemaError as err:
            raise _SchemaFailure(str(err)) from err
        except DegenerateGeometryError as err:
            raise _DegenerateGeometryFailure(str(err)) from err
        except ValueError as err:
            raise click.UsageError(str(err)) from err

    return wrapper


def _gaze_options(f):
    options = [
        click.option("--alpha", type=float, default=0.0, show_default=True,
                     help="Fixation elevation (radians unless --degrees)."),
        click.option("--beta", type=float, default=0.0, show_default=True,
                     help="Cyclopean azimuth (radians unless --degrees)."),
        click.option("--rho", type=float, default=None,
                     help="Fixation range in baseline units."),
        click.option("--point", type=str, default=None, metavar="X,Y,Z",
                     help="Cartesian fixation point; overrides the angular flags."),
        click.option("--degrees", is_flag=True,
                     help="Interpret --alpha and --beta in degrees."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _parse_floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise click.UsageError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise click.UsageError(f"{what} needs numbers, got {text!r}") from None


def _gaze_from_flags(alpha, beta, rho, point, degrees) -> GazeState:
    if point is not None:
        return helmholtz_from_point(np.array(_parse_floats(point, 3, "--point")))
    if rho is None:
        raise click.UsageError("provide --rho (with optional --alpha/--beta) or --point")
    if degrees:
        alpha, beta = float(np.radians(alpha)), float(np.radians(beta))
    return GazeState(beta=beta, rho=rho, alpha=alpha)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


_out_option = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Output file (default: stdout).",
)


@click.group()
def main():
    """Binocular fixation geometry simulator."""


@main.command()
@_gaze_options
@_out_option
@_mapped_errors
def fixate(alpha, beta, rho, point, degrees, out):
    """Report azimuths, vergence/version, circle parameters and epipoles."""
    gaze = _gaze_from_flags(alpha, beta, rho, point, degrees)
    az = eye_azimuths(gaze)
    vv = vergence_version(az)
    circle = vieth_muller(vv)
    epi = epipoles(az)
    report = {
        "schema": SCHEMA_VERSION,
        "kind": "fixation",
        "gaze": gaze_to_dict(gaze),
        "azimuths": {"beta_l": az.beta_l, "beta_r": az.beta_r},
        "vergence": vv.delta,
        "version": vv.epsilon,
        "circle": {
            "zeta": circle.zeta,
            "eta": circle.eta,
            "back_point": [float(x) for x in circle.back_point],
        },
        "epipoles": {
            "e_l": [float(x) for x in epi.e_l],
            "e_r": [float(x) for x in epi.e_r],
        },
    }
    _emit(dumps(report), out)


@main.command()
@_gaze_options
@click.option("--samples", type=int, default=64, show_default=True,
              help="Points per polyline (at least 2).")
@_out_option
@_mapped_errors
def horopter(alpha, beta, rho, point, degrees, samples, out):
    """Sample the iso-vergence circle and midline as CSV (component,x,y,z)."""
    if samples < 2:
        raise click.UsageError("--samples must be at least 2")
    gaze = _gaze_from_flags(alpha, beta, rho, point, degrees)
    vv = vergence_version(eye_azimuths(gaze))
    circle = vieth_muller(vv)
    mid = midline(vv)
    tilt = rot_x(gaze.alpha)

    rows = []
    limit = forward_arc_limit(circle)
    # Right half-sweep starts at theta = 0 (the circle's top), then the
    # mirrored left half, so the full forward arc is covered.
    thetas = list(np.linspace(0.0, limit, samples)) + list(-np.linspace(0.0, limit, samples)[1:])
    for theta in thetas:
        p = tilt @ vm_point(circle, theta)
        rows.append(["circle", p[0], p[1], p[2]])
    for y in np.linspace(-1.0, 1.0, samples):
        p = tilt @ (mid.scene_base + np.array([0.0, y, 0.0]))
        rows.append(["midline", p[0], p[1], p[2]])
    _emit(csv_rows("component,x,y,z", rows), out)


@main.command()
@_gaze_options
@_out_option
@_mapped_errors
def essential(alpha, beta, rho, point, degrees, out):
    """Emit the Essential matrix, epipoles and singular values."""
    gaze = _gaze_from_flags(alpha, beta, rho, point, degrees)
    az = eye_azimuths(gaze)
    matrix = essential_closed_form(az)
    epi = epipoles(az)
    report = {
        "schema": SCHEMA_VERSION,
        "kind": "essential",
        "gaze": gaze_to_dict(gaze),
        "azimuths": {"beta_l": az.beta_l, "beta_r": az.beta_r},
        "E": [[float(x) for x in row] for row in matrix],
        "epipoles": {
            "e_l": [float(x) for x in epi.e_l],
            "e_r": [float(x) for x in epi.e_r],
        },
        "singular_values": [float(s) for s in np.linalg.svd(matrix, compute_uv=False)],
    }
    _emit(dumps(report), out)


@main.command()
@_gaze_options
@click.option("--scene", type=click.Choice(GENERATORS), default="random-box",
              show_default=True, help="Scene generator.")
@click.option("--count", type=int, default=50, show_default=True,
              help="Number of scene points to draw.")
@click.option("--sigma", type=float, default=0.0, show_default=True,
              help="Image noise standard deviation (image units).")
@click.option("--seed", type=int, default=0, show_default=True, help="RNG seed.")
@click.option("--region", type=str, default=None, metavar="X0,X1,Y0,Y1,Z0,Z1",
              help="Random-box bounds in baseline units (default: around the fixation point).")
@_out_option
@_mapped_errors
def synthesize(alpha, beta, rho, point, degrees, scene, count, sigma, seed, region, out):
    """Project a synthetic scene to a correspondence file."""
    gaze = _gaze_from_flags(alpha, beta, rho, point, degrees)
    bounds = None
    if region is not None:
        x0, x1, y0, y1, z0, z1 = _parse_floats(region, 6, "--region")
        bounds = ((x0, x1), (y0, y1), (z0, z1))
    spec = SceneSpec(generator=scene, count=count, sigma=sigma, seed=seed, region=bounds)
    result = synthesize_scene(gaze, spec)
    data = correspondence_file(gaze, result.records, result.skipped, scene, sigma, seed)
    _emit(dumps(data), out)


@main.command()
@click.argument("corr_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@_gaze_options
@_out_option
@_mapped_errors
def reconstruct(corr_file, alpha, beta, rho, point, degrees, out):
    """Recover plane-relative depths from a correspondence file.

    Uses the gaze flags when given, otherwise the file's gaze header.
    """
    parsed = parse_correspondence_file(load_json(corr_file))
    if rho is not None or point is not None:
        gaze = _gaze_from_flags(alpha, beta, rho, point, degrees)
    elif parsed.gaze is not None:
        gaze = parsed.gaze
    else:
        raise click.UsageError(
            f"{corr_file} has no gaze header; provide --rho/--beta or --point"
        )
    samples = estimate_depth_map(parsed.records, gaze)

    rows = []
    errors = []
    for corr, sample in zip(parsed.records, samples):
        row: dict = {}
        if sample is None:
            row["error"] = "unrecoverable (behind an eye or at infinity)"
        else:
            row["p_c"] = [float(x) for x in sample.cyclopean_dir]
            row["s_est"] = float(sample.s)
            row["z_c_est"] = float(sample.z_c)
        if corr.truth is not None:
            row["s_true"] = float(corr.truth.s)
            if sample is not None:
                errors.append(sample.s - corr.truth.s)
        rows.append(row)

    stats = None
    if parsed.has_truth:
        failed = sum(1 for s in samples if s is None)
        stats = {
            "count": len(rows),
            "failed": failed,
            "rms_error": float(np.sqrt(np.mean(np.square(errors)))) if errors else 0.0,
            "max_abs_error": float(np.max(np.abs(errors))) if errors else 0.0,
        }
    _emit(dumps(depth_map_file(gaze, rows, stats)), out)


@main.command()
@click.argument("corr_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--max-iterations", type=int, default=100, show_default=True,
              help="Damped least-squares iteration cap.")
@_out_option
@_mapped_errors
def estimate(corr_file, max_iterations, out):
    """Estimate gaze from correspondences, then reconstruct the depth map."""
    parsed = parse_correspondence_file(load_json(corr_file))
    truth_gaze = parsed.gaze
    alpha = truth_gaze.alpha if truth_gaze is not None else 0.0

    started = time.perf_counter()
    fit = estimate_gaze(
        parsed.records,
        config=EstimationConfig(max_iterations=max_iterations),
        alpha=alpha,
    )
    fitted = time.perf_counter()
    samples = estimate_depth_map(parsed.records, fit.gaze)
    finished = time.perf_counter()

    points = []
    depth_errors = []
    for corr, sample in zip(parsed.records, samples):
        row: dict = {}
        if sample is not None:
            row["p_c"] = [float(x) for x in sample.cyclopean_dir]
            row["s_est"] = float(sample.s)
        if corr.truth is not None:
            row["s_true"] = float(corr.truth.s)
            if sample is not None:
                depth_errors.append(sample.s - corr.truth.s)
        row["q_l"] = [float(x) for x in corr.q_l]
        row["q_r"] = [float(x) for x in corr.q_r]
        points.append(row)

    residual_stats = {"rms_residual": fit.rms_residual}
    if depth_errors:
        residual_stats["rms_depth_error"] = float(np.sqrt(np.mean(np.square(depth_errors))))

    deltas = None
    if truth_gaze is not None:
        true_az = eye_azimuths(truth_gaze)
        deltas = {
            "beta_l": fit.azimuths.beta_l - true_az.beta_l,
            "beta_r": fit.azimuths.beta_r - true_az.beta_r,
            "beta": fit.gaze.beta - truth_gaze.beta,
            "rho": fit.gaze.rho - truth_gaze.rho,
        }

    record = ExperimentRecord(
        gaze_estimate=fit,
        gaze_truth=truth_gaze,
        deltas=deltas,
        points=points,
        residual_stats=residual_stats,
        timings={
            "estimate_s": fitted - started,
            "depth_map_s": finished - fitted,
        },
    )
    _emit(dumps(record.to_dict()), out)


if __name__ == "__main__":
    main()
