"""Symmetric Cyclopean parallax model of binocular disparity.

Depth is carried relative to the fixation plane: the plane through the
fixation point orthogonal to the Cyclopean gaze direction. A scene point
in Cyclopean direction ``p_c`` at signed plane distance ``s`` projects to

    q = p + t(s) d

in each image, where ``p`` is the projection the point would have if it
lay in the plane, ``d`` is a unit vector along the epipolar direction
(zero third component), and the scalar parallax

    t(s) = kappa (s / rho) / (lam (rho + s) + mu)

is a 1-d projective (Mobius) function of ``s``. All image points in this
module are normalized to third component 1; homogeneous scale freedom
lives in :mod:`cyclovision.geometry` and :mod:`cyclovision.epipolar`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cyclovision.errors import (
    BehindEyeError,
    DegenerateGeometryError,
    PointAtInfinityError,
)
from cyclovision.gaze import (
    BASELINE,
    GazeState,
    direction_from_angles,
    eye_azimuths,
    eye_poses,
)
from cyclovision.geometry import HomogPoint2, Vec3, normalize_point, rot_y

_EYES = ("left", "right")


@dataclass(frozen=True, eq=False)
class FixationPlane:
    """Plane through the fixation point, orthogonal to the Cyclopean gaze."""

    normal: Vec3  # unit gaze direction
    range: float  # rho, orthogonal distance of the plane from the origin

    @classmethod
    def from_gaze(cls, gaze: GazeState) -> "FixationPlane":
        return cls(normal=direction_from_angles(gaze.alpha, gaze.beta), range=gaze.rho)


@dataclass(frozen=True, eq=False)
class DepthSample:
    """Plane-relative depth of one Cyclopean ray.

    ``s`` is negative for points nearer than the fixation plane, positive
    beyond it; ``z_c = rho + s`` is the Cyclopean depth and must be positive.
    """

    cyclopean_dir: HomogPoint2  # p_c, third component 1
    s: float
    z_c: float


@dataclass(frozen=True, eq=False)
class Correspondence:
    """A left/right image pair, optionally with its generating depth sample."""

    q_l: HomogPoint2  # third component 1
    q_r: HomogPoint2
    truth: DepthSample | None = None


@dataclass(frozen=True, eq=False)
class ParallaxDecomposition:
    """Per-eye ingredients of the parallax model for one Cyclopean ray.

    ``predicted`` is the image of the ray's intersection with the fixation
    plane; ``direction`` the unit epipolar direction with exactly zero
    third component; ``kappa`` its normalizing length. ``lam`` and ``mu``
    relate eye depths to Cyclopean depths affinely: z_eye = lam z_c + mu.
    """

    predicted: HomogPoint2
    direction: HomogPoint2
    kappa: float
    lam: float
    mu: float
    eye: str


def plane_depth(q: Vec3, plane: FixationPlane) -> tuple[float, float]:
    """Signed plane distance s = v . q - rho and Cyclopean depth z_c = v . q."""
    z_c = float(plane.normal @ np.asarray(q, dtype=float))
    return z_c - plane.range, z_c


def decompose(gaze: GazeState, p_c: HomogPoint2, eye: str) -> ParallaxDecomposition:
    """Parallax decomposition of the Cyclopean ray p_c for one eye.

    The predicted point is the normalized rho R_eye R^T p_c + e/2, where
    e/2 is the image of the Cyclopean point in that eye. The epipolar
    direction is (mu p - e/2) / kappa rather than p - e/(2 mu), because mu
    vanishes whenever the eye looks straight ahead; the difference of
    third components cancels, so d always lies in the image plane.
    """
    if eye not in _EYES:
        raise ValueError(f"eye must be 'left' or 'right', got {eye!r}")
    p_c = normalize_point(p_c)
    az = eye_azimuths(gaze)
    if eye == "left":
        beta_eye = az.beta_l
        e_half = 0.5 * np.array([np.cos(beta_eye), 0.0, np.sin(beta_eye)])
    else:
        beta_eye = az.beta_r
        e_half = 0.5 * np.array([-np.cos(beta_eye), 0.0, -np.sin(beta_eye)])
    relative = rot_y(beta_eye - gaze.beta)  # R_eye R^T, elevation cancels
    u = gaze.rho * (relative @ p_c) + e_half
    if u[2] <= 1e-12:
        raise BehindEyeError(f"predicted point lies behind the {eye} eye")
    predicted = u / u[2]
    lam = float(p_c[0] * np.sin(beta_eye - gaze.beta) + np.cos(beta_eye - gaze.beta))
    mu = float(e_half[2])
    kappa_vec = mu * predicted - e_half
    kappa = float(np.linalg.norm(kappa_vec))
    if kappa < 1e-12:
        raise DegenerateGeometryError(
            f"Cyclopean ray predicts the {eye} epipole: epipolar direction undefined"
        )
    return ParallaxDecomposition(
        predicted=predicted,
        direction=kappa_vec / kappa,
        kappa=kappa,
        lam=lam,
        mu=mu,
        eye=eye,
    )


def parallax(dec: ParallaxDecomposition, s: float, rho: float) -> float:
    """Scalar parallax t(s) = kappa (s/rho) / (lam (rho + s) + mu).

    The denominator is the scene point's depth along this eye's axis and
    must be positive.
    """
    denom = dec.lam * (rho + s) + dec.mu
    if denom <= 0.0:
        raise BehindEyeError(f"scene point at s={s} lies behind the {dec.eye} eye")
    return dec.kappa * (s / rho) / denom


def recover_depth(dec: ParallaxDecomposition, t: float, rho: float) -> float:
    """Invert the parallax map: s = t rho (lam rho + mu) / (kappa - t lam rho)."""
    denom = dec.kappa - t * dec.lam * rho
    if abs(denom) <= 1e-15 * (dec.kappa + abs(t * dec.lam * rho)):
        raise PointAtInfinityError("parallax corresponds to a point at infinite depth")
    return t * rho * (dec.lam * rho + dec.mu) / denom


def project_parallax_scalar(
    dec: ParallaxDecomposition, q_observed: HomogPoint2
) -> tuple[float, float]:
    """Parallax scalar of an observed point, plus its off-epipolar residual.

    Returns (t, perpendicular): t is the least-squares projection of
    q - predicted onto the epipolar direction, and perpendicular is the
    length of the remainder, which is zero for noiseless observations and
    pure noise under the model otherwise.
    """
    offset = normalize_point(q_observed) - dec.predicted
    t = float(dec.direction @ offset)
    perpendicular = float(np.linalg.norm(offset - t * dec.direction))
    return t, perpendicular


def synthesize_correspondence(gaze: GazeState, p_c: HomogPoint2, s: float) -> Correspondence:
    """Left and right images of the scene point at ray p_c, plane depth s.

    Both points equal the direct pinhole projections of z_c R^T p_c; the
    parallax route is used so that tests can check that identity against
    the projection oracle.
    """
    z_c = gaze.rho + s
    if z_c <= 0.0:
        raise BehindEyeError(f"Cyclopean depth rho + s = {z_c} is not positive")
    p_c = normalize_point(p_c)
    points = {}
    for eye in _EYES:
        dec = decompose(gaze, p_c, eye)
        points[eye] = dec.predicted + parallax(dec, s, gaze.rho) * dec.direction
    return Correspondence(
        q_l=points["left"],
        q_r=points["right"],
        truth=DepthSample(cyclopean_dir=p_c, s=s, z_c=z_c),
    )


def plane_homography(gaze: GazeState) -> np.ndarray:
    """Homography induced by the fixation plane, mapping p_l to p_r.

    H = R_r (I - b v^T / w_l) R_l^T with w_l the perpendicular distance
    from the left optical centre to the plane. Composed with the right
    parallax term it reproduces the plane-plus-parallax form of q_r.
    """
    poses = eye_poses(gaze)
    v = direction_from_angles(gaze.alpha, gaze.beta)
    w_l = gaze.rho - float(v @ poses.left.centre)
    if w_l <= 0.0:
        raise BehindEyeError("fixation plane does not pass in front of the left eye")
    return (
        poses.right.rotation
        @ (np.eye(3) - np.outer(BASELINE, v) / w_l)
        @ poses.left.rotation.T
    )
