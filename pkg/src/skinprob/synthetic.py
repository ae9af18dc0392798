"""Deterministic synthetic scenes for desk-scale benchmarking.

Each scene is an elliptical skin-colored face on a contrasting
background, with two dark eye discs and a dark mouth disc planted so the
eye distance over the midpoint-to-mouth distance equals a requested
ratio. The ground-truth box is the frontal box formula applied to the
planted feature centers, so a perfect detector reproduces it exactly.

All randomness comes from ``numpy.random.default_rng(seed)``; the same
seed always yields a byte-identical image.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .face_geometry import POSE_FRONTAL, TriangleCandidate, face_box_frontal

__all__ = [
    "InfeasibleParamsError",
    "SceneParams",
    "generate_synthetic_scene",
    "generate_skin_patch",
]


class InfeasibleParamsError(ValueError):
    """Raised when the requested scene cannot fit in the frame."""


@dataclass(frozen=True)
class SceneParams:
    """Geometry and color parameters for one scene."""

    width: int = 160
    height: int = 120
    face: bool = True
    eye_distance: float = 36.0
    ratio: float = 1.0  # eye distance / midpoint-to-mouth distance
    eye_radius: float = 4.0
    mouth_radius: float = 5.0
    margin: float = 6.0  # face ellipse must cover features by this much
    skin_color: tuple[int, int, int] = (205, 160, 130)
    skin_noise: float = 10.0
    background_color: tuple[int, int, int] = (60, 90, 180)
    background_noise: float = 8.0
    feature_color: tuple[int, int, int] = (25, 20, 18)
    feature_noise: float = 3.0
    clutter_discs: int = 2  # dark discs on faceless scenes

    def __post_init__(self):
        if self.width < 8 or self.height < 8:
            raise ValueError("frame must be at least 8x8")
        if self.eye_distance <= 0 or self.ratio <= 0:
            raise ValueError("eye_distance and ratio must be positive")


def _noisy_fill(rng: np.random.Generator, shape, color, noise: float) -> np.ndarray:
    base = np.asarray(color, dtype=np.float64)
    values = rng.normal(loc=base, scale=max(noise, 0.0), size=shape + (3,))
    return np.clip(np.rint(values), 0, 255).astype(np.uint8)


def _disc_mask(width: int, height: int, cx: float, cy: float, radius: float) -> np.ndarray:
    ys, xs = np.mgrid[0:height, 0:width]
    return (xs - cx) ** 2 + (ys - cy) ** 2 <= radius**2


def _ellipse_mask(width: int, height: int, cx: float, cy: float, a: float, b: float) -> np.ndarray:
    ys, xs = np.mgrid[0:height, 0:width]
    return ((xs - cx) / a) ** 2 + ((ys - cy) / b) ** 2 <= 1.0


def generate_synthetic_scene(seed: int, params: SceneParams | None = None):
    """Render one scene; returns (image, ground-truth rect or None).

    The ground-truth rectangle is (x_min, y_min, x_max, y_max) of the
    face box computed from the planted eye and mouth centers. Faceless
    scenes (``params.face`` False) return None and contain only the
    background plus a few dark clutter discs.
    """
    p = params if params is not None else SceneParams()
    rng = np.random.default_rng(seed)
    img = _noisy_fill(rng, (p.height, p.width), p.background_color, p.background_noise)

    if not p.face:
        for _ in range(p.clutter_discs):
            cx = rng.uniform(0.15 * p.width, 0.85 * p.width)
            cy = rng.uniform(0.15 * p.height, 0.85 * p.height)
            r = rng.uniform(3.0, 6.0)
            disc = _disc_mask(p.width, p.height, cx, cy, r)
            img[disc] = _noisy_fill(rng, (int(disc.sum()),), p.feature_color, p.feature_noise).reshape(-1, 3)
        return img, None

    e = p.eye_distance
    mouth_drop = e / p.ratio  # vertical distance from eye line to mouth center
    semi_a = max(e / 2.0 + p.eye_radius, p.mouth_radius) + p.margin
    semi_b = (mouth_drop + p.eye_radius + p.mouth_radius) / 2.0 + p.margin
    # ellipse center sits below the eye line, halfway down the feature extent
    cy_off = (mouth_drop - p.eye_radius + p.mouth_radius) / 2.0

    # both the ellipse and the ground-truth box must stay inside the frame
    box_half_w = e / 2.0 + e / 3.0
    x_lo = max(semi_a, box_half_w) + 1.0
    x_hi = p.width - x_lo
    y_lo = semi_b - cy_off + 1.0
    y_hi = p.height - (semi_b + cy_off) - 1.0
    if x_hi < x_lo or y_hi < y_lo:
        raise InfeasibleParamsError(
            f"face with eye distance {e} and ratio {p.ratio} does not fit "
            f"in a {p.width}x{p.height} frame"
        )
    face_cx = rng.uniform(x_lo, x_hi)
    eye_y = rng.uniform(y_lo, y_hi)

    eye_a = (face_cx - e / 2.0, eye_y)  # smaller x: becomes triangle point i
    eye_b = (face_cx + e / 2.0, eye_y)
    mouth = (face_cx, eye_y + mouth_drop)

    face_mask = _ellipse_mask(p.width, p.height, face_cx, eye_y + cy_off, semi_a, semi_b)
    img[face_mask] = _noisy_fill(rng, (int(face_mask.sum()),), p.skin_color, p.skin_noise).reshape(-1, 3)

    for (cx, cy), radius in ((eye_a, p.eye_radius), (eye_b, p.eye_radius), (mouth, p.mouth_radius)):
        disc = _disc_mask(p.width, p.height, cx, cy, radius)
        img[disc] = _noisy_fill(rng, (int(disc.sum()),), p.feature_color, p.feature_noise).reshape(-1, 3)

    triangle = TriangleCandidate(i=eye_a, j=mouth, k=eye_b, pose=POSE_FRONTAL, score=0.0)
    gt = face_box_frontal(triangle).rect()
    return img, gt


def generate_skin_patch(seed: int, params: SceneParams | None = None,
                        size: tuple[int, int] = (32, 32)) -> np.ndarray:
    """Pure-skin training patch drawn from the scene's skin distribution."""
    p = params if params is not None else SceneParams()
    rng = np.random.default_rng(seed)
    return _noisy_fill(rng, (size[1], size[0]), p.skin_color, p.skin_noise)
