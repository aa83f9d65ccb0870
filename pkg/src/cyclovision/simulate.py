"""Synthetic scenes and correspondence generation for the simulation CLI."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from cyclovision.disparity import Correspondence, synthesize_correspondence
from cyclovision.errors import DegenerateGeometryError
from cyclovision.gaze import (
    GazeState,
    eye_azimuths,
    eye_poses,
    fixation_point,
    vergence_version,
    vieth_muller,
)
from cyclovision.geometry import rot_x
from cyclovision.horopter import forward_arc_limit, vm_point

GENERATORS = ("random-box", "fixation-plane-patch", "horopter-samples")

#: half-extent of the random box, as a fraction of the fixation range
BOX_HALF_EXTENT = 0.4

#: half-width of the fixation-plane patch, in Cyclopean image units
PATCH_HALF_WIDTH = 0.3

#: fraction of the forward arc sampled by the horopter generator
ARC_MARGIN = 0.9

Region = tuple[tuple[float, float], tuple[float, float], tuple[float, float]]


@dataclass(frozen=True)
class SceneSpec:
    """What to synthesize: generator kind, size, noise and seeding.

    ``region`` bounds random-box points as ((x0, x1), (y0, y1), (z0, z1))
    in baseline units; None means a box centred on the fixation point.
    ``sigma`` is the standard deviation of isotropic Gaussian noise added
    to the inhomogeneous image coordinates, independently per eye.
    """

    generator: str = "random-box"
    count: int = 50
    sigma: float = 0.0
    seed: int = 0
    region: Region | None = None

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}, expected one of {GENERATORS}")
        if self.count <= 0:
            raise ValueError(f"count must be positive, got {self.count}")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be nonnegative, got {self.sigma}")
        if self.region is not None:
            for low, high in self.region:
                if not low < high:
                    raise ValueError(f"region bounds must increase, got ({low}, {high})")


class SynthesisResult(NamedTuple):
    records: list[Correspondence]
    skipped: int  # candidates behind an eye or otherwise degenerate


def default_region(gaze: GazeState) -> Region:
    """Axis-aligned box centred on the fixation point, scaled with range."""
    centre = fixation_point(gaze)
    half = BOX_HALF_EXTENT * gaze.rho
    return (
        (centre[0] - half, centre[0] + half),
        (centre[1] - half, centre[1] + half),
        (centre[2] - half, centre[2] + half),
    )


def _scene_candidates(gaze: GazeState, spec: SceneSpec, rng: np.random.Generator) -> np.ndarray:
    if spec.generator == "random-box":
        region = spec.region if spec.region is not None else default_region(gaze)
        lows = np.array([b[0] for b in region])
        highs = np.array([b[1] for b in region])
        return rng.uniform(lows, highs, (spec.count, 3))
    # horopter-samples: iso-vergence circle points, rotated into the visual plane
    circle = vieth_muller(vergence_version(eye_azimuths(gaze)))
    limit = ARC_MARGIN * forward_arc_limit(circle)
    thetas = rng.uniform(-limit, limit, spec.count)
    tilt = rot_x(gaze.alpha)
    return np.array([tilt @ vm_point(circle, t) for t in thetas])


def synthesize_scene(gaze: GazeState, spec: SceneSpec) -> SynthesisResult:
    """Generate correspondences for a scene, deterministically for a seed.

    Candidates that land behind an eye, or whose Cyclopean ray is
    degenerate, are skipped and counted. Noise is added after synthesis;
    the stored truth (p_c, s) stays clean.
    """
    rng = np.random.default_rng(spec.seed)
    records: list[Correspondence] = []
    skipped = 0

    if spec.generator == "fixation-plane-patch":
        offsets = rng.uniform(-PATCH_HALF_WIDTH, PATCH_HALF_WIDTH, (spec.count, 2))
        rays = [np.array([u, w, 1.0]) for u, w in offsets]
        depths = [0.0] * spec.count
    else:
        poses = eye_poses(gaze)
        rays, depths = [], []
        for scene_point in _scene_candidates(gaze, spec, rng):
            ray = poses.cyclopean.rotation @ (scene_point - poses.cyclopean.centre)
            if ray[2] <= 1e-12:
                skipped += 1
                continue
            rays.append(ray / ray[2])
            depths.append(float(ray[2]) - gaze.rho)

    for ray, depth in zip(rays, depths):
        try:
            records.append(synthesize_correspondence(gaze, ray, depth))
        except DegenerateGeometryError:
            skipped += 1

    if spec.sigma > 0.0:
        noisy = []
        for record in records:
            q_l = record.q_l.copy()
            q_r = record.q_r.copy()
            q_l[:2] += rng.normal(0.0, spec.sigma, 2)
            q_r[:2] += rng.normal(0.0, spec.sigma, 2)
            noisy.append(Correspondence(q_l=q_l, q_r=q_r, truth=record.truth))
        records = noisy

    return SynthesisResult(records=records, skipped=skipped)
