"""Recovery of gaze parameters and plane-relative depths from correspondences.

The fixation constraint reduces the Essential matrix to two parameters,
the eye azimuths (beta_l, beta_r). They are fit by damped least squares
on the normalized epipolar residuals q_r^T E(beta_l, beta_r) q_l, seeded
by a coarse grid over vergence and version; (beta, rho) then follow
algebraically. Depths are recovered per point by projecting each observed
offset onto its epipolar direction and inverting the parallax map,
independently in the two eyes.

Data lying entirely on the horizontal image meridian satisfies the
epipolar constraint for every azimuth pair, so such sets are rejected
as degenerate; the range rho is observable only through vertical and
perspective effects off the meridian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclovision.disparity import (
    Correspondence,
    DepthSample,
    decompose,
    project_parallax_scalar,
    recover_depth,
)
from cyclovision.errors import (
    DegenerateConfigurationError,
    DegenerateGeometryError,
    PointAtInfinityError,
)
from cyclovision.gaze import (
    BinocularPoses,
    EyeAzimuths,
    GazeState,
    eye_poses,
    gaze_from_azimuths,
)
from cyclovision.geometry import HomogPoint2, Vec3, normalize_point

_SQRT2 = np.sqrt(2.0)

GRID_DELTA_MAX = 1.2
GRID_EPSILON_MAX = 0.8
GRID_SIZE = 64


@dataclass(frozen=True)
class EstimationConfig:
    """Tolerances and schedule of the damped least-squares fit."""

    max_iterations: int = 100
    initial_damping: float = 1e-3
    damping_increase: float = 10.0   # multiplier on a rejected step
    damping_decrease: float = 10.0   # divisor on an accepted step
    step_tolerance: float = 1e-10    # radians; smaller steps mean convergence
    objective_tolerance: float = 1e-12  # relative objective decrease at convergence
    jacobian_step: float = 1e-7      # radians, central finite differences
    meridian_tolerance: float = 1e-9  # max |y| below which the data is degenerate
    delta_bounds: tuple[float, float] | None = None    # optional box on vergence
    epsilon_bounds: tuple[float, float] | None = None  # optional box on version


@dataclass(frozen=True)
class GazeEstimate:
    """Fitted azimuths and gaze, with fit diagnostics."""

    azimuths: EyeAzimuths
    gaze: GazeState
    rms_residual: float
    iterations: int
    converged: bool


def _point_arrays(correspondences: list[Correspondence]) -> tuple[np.ndarray, ...]:
    ql = np.array([normalize_point(c.q_l) for c in correspondences])
    qr = np.array([normalize_point(c.q_r) for c in correspondences])
    return ql[:, 0], ql[:, 1], qr[:, 0], qr[:, 1]


def _residuals(beta_l, beta_r, xl, yl, xr, yr):
    # q_r^T E q_l expanded for the closed form; ||E||_F = sqrt(2) always.
    return (
        np.sin(beta_l) * xl * yr
        - np.sin(beta_r) * xr * yl
        + np.cos(beta_r) * yl
        - np.cos(beta_l) * yr
    ) / _SQRT2


def residual_rms(correspondences: list[Correspondence], az: EyeAzimuths) -> float:
    """Root mean square of the normalized epipolar residuals at given azimuths."""
    xl, yl, xr, yr = _point_arrays(correspondences)
    r = _residuals(az.beta_l, az.beta_r, xl, yl, xr, yr)
    return float(np.sqrt(np.mean(r**2)))


def grid_objective(
    correspondences: list[Correspondence],
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean squared residual over the (vergence, version) seed grid.

    Returns (deltas, epsilons, mse) with mse indexed [delta, epsilon];
    vergence spans (0, 1.2] and version [-0.8, 0.8] at 64 x 64 resolution.
    """
    if not correspondences:
        raise ValueError("empty correspondence list")
    xl, yl, xr, yr = _point_arrays(correspondences)
    deltas = GRID_DELTA_MAX * np.arange(1, GRID_SIZE + 1) / GRID_SIZE
    epsilons = np.linspace(-GRID_EPSILON_MAX, GRID_EPSILON_MAX, GRID_SIZE)
    dd, ee = np.meshgrid(deltas, epsilons, indexing="ij")
    bl = (ee + 0.5 * dd).ravel()[:, None]
    br = (ee - 0.5 * dd).ravel()[:, None]
    r = _residuals(bl, br, xl[None, :], yl[None, :], xr[None, :], yr[None, :])
    mse = np.mean(r**2, axis=1).reshape(GRID_SIZE, GRID_SIZE)
    return deltas, epsilons, mse


def grid_init(correspondences: list[Correspondence]) -> EyeAzimuths:
    """Azimuth seed at the minimum of the coarse grid objective.

    Total on any nonempty input; with fewer than three points the seed is
    returned but its quality is unguaranteed.
    """
    deltas, epsilons, mse = grid_objective(correspondences)
    i, j = np.unravel_index(np.argmin(mse), mse.shape)
    return EyeAzimuths(
        float(epsilons[j] + 0.5 * deltas[i]), float(epsilons[j] - 0.5 * deltas[i])
    )


def _clamp(theta: np.ndarray, config: EstimationConfig) -> np.ndarray:
    if config.delta_bounds is None and config.epsilon_bounds is None:
        return theta
    delta = theta[0] - theta[1]
    epsilon = 0.5 * (theta[0] + theta[1])
    if config.delta_bounds is not None:
        delta = float(np.clip(delta, *config.delta_bounds))
    if config.epsilon_bounds is not None:
        epsilon = float(np.clip(epsilon, *config.epsilon_bounds))
    return np.array([epsilon + 0.5 * delta, epsilon - 0.5 * delta])


def estimate_gaze(
    correspondences: list[Correspondence],
    initial: EyeAzimuths | None = None,
    config: EstimationConfig | None = None,
    alpha: float = 0.0,
) -> GazeEstimate:
    """Fit (beta_l, beta_r) to correspondences by damped least squares.

    ``initial`` defaults to the grid seed. ``alpha`` only orients the
    visual plane of the returned gaze; the image data cannot constrain it.
    Noiseless data from a true fixation is recovered to well below 1e-6 rad.
    """
    cfg = config or EstimationConfig()
    if len(correspondences) < 3:
        raise ValueError("need at least 3 correspondences")
    xl, yl, xr, yr = _point_arrays(correspondences)
    if max(np.abs(yl).max(), np.abs(yr).max()) < cfg.meridian_tolerance:
        raise DegenerateConfigurationError(
            "all points lie on the horizontal meridian, which satisfies the "
            "epipolar constraint for every gaze"
        )
    if initial is None:
        initial = grid_init(correspondences)

    theta = _clamp(np.array([initial.beta_l, initial.beta_r]), cfg)
    r = _residuals(theta[0], theta[1], xl, yl, xr, yr)
    objective = float(r @ r)
    damping = cfg.initial_damping
    h = cfg.jacobian_step
    iterations = 0
    converged = False

    for _ in range(cfg.max_iterations):
        jac = np.empty((r.size, 2))
        for k in range(2):
            bump = np.zeros(2)
            bump[k] = h
            r_plus = _residuals(*(theta + bump), xl, yl, xr, yr)
            r_minus = _residuals(*(theta - bump), xl, yl, xr, yr)
            jac[:, k] = (r_plus - r_minus) / (2.0 * h)
        gradient = jac.T @ r
        normal = jac.T @ jac

        accepted = False
        while damping < 1e15:
            step = np.linalg.solve(normal + damping * np.eye(2), -gradient)
            candidate = _clamp(theta + step, cfg)
            r_new = _residuals(candidate[0], candidate[1], xl, yl, xr, yr)
            objective_new = float(r_new @ r_new)
            if objective_new < objective:
                accepted = True
                break
            damping *= cfg.damping_increase
        if not accepted:
            # No admissible step decreases the objective: numerical minimum.
            converged = True
            break

        step_norm = float(np.linalg.norm(candidate - theta))
        decrease = objective - objective_new
        theta, r, objective = candidate, r_new, objective_new
        damping /= cfg.damping_decrease
        iterations += 1
        if step_norm < cfg.step_tolerance or decrease <= cfg.objective_tolerance * (
            objective + decrease
        ):
            converged = True
            break

    azimuths = EyeAzimuths(float(theta[0]), float(theta[1]))
    return GazeEstimate(
        azimuths=azimuths,
        gaze=gaze_from_azimuths(azimuths, alpha=alpha),
        rms_residual=float(np.sqrt(objective / r.size)),
        iterations=iterations,
        converged=converged,
    )


def triangulate_midpoint(
    poses: BinocularPoses, q_l: HomogPoint2, q_r: HomogPoint2
) -> Vec3:
    """Midpoint of the closest points of the two back-projected rays."""
    d1 = poses.left.rotation.T @ normalize_point(q_l)
    d2 = poses.right.rotation.T @ normalize_point(q_r)
    w0 = poses.left.centre - poses.right.centre
    a, b, c = d1 @ d1, d1 @ d2, d2 @ d2
    det = b * b - a * c
    if abs(det) <= 1e-15 * a * c:
        raise PointAtInfinityError("rays are parallel: triangulated point at infinity")
    rhs1, rhs2 = -(d1 @ w0), -(d2 @ w0)
    u = (-c * rhs1 + b * rhs2) / det
    v = (-b * rhs1 + a * rhs2) / det
    near_l = poses.left.centre + u * d1
    near_r = poses.right.centre + v * d2
    return 0.5 * (near_l + near_r)


def estimate_depth_map(
    correspondences: list[Correspondence], gaze: GazeState
) -> list[DepthSample | None]:
    """Per-point plane-relative depths for a known (or estimated) gaze.

    Each point is triangulated to fix its Cyclopean direction, the
    parallax scalar is extracted in the two eyes independently, and the
    two recovered depths are averaged. Entries are None where the point
    is behind an eye or at infinity; such failures are not fatal.
    """
    poses = eye_poses(gaze)
    samples: list[DepthSample | None] = []
    for corr in correspondences:
        try:
            scene = triangulate_midpoint(poses, corr.q_l, corr.q_r)
            ray = poses.cyclopean.rotation @ (scene - poses.cyclopean.centre)
            if ray[2] <= 1e-12:
                samples.append(None)
                continue
            p_c = ray / ray[2]
            recovered = []
            for eye, observed in (("left", corr.q_l), ("right", corr.q_r)):
                dec = decompose(gaze, p_c, eye)
                t, _ = project_parallax_scalar(dec, observed)
                recovered.append(recover_depth(dec, t, gaze.rho))
            s = 0.5 * (recovered[0] + recovered[1])
            z_c = gaze.rho + s
            if z_c <= 0.0:
                samples.append(None)
                continue
            samples.append(DepthSample(cyclopean_dir=p_c, s=s, z_c=z_c))
        except DegenerateGeometryError:
            samples.append(None)
    return samples
