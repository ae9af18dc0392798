"""Eye/mouth triangle matching and face-box construction.

Coordinates are image coordinates: x grows rightward, y grows downward,
so "mouth below the eyes" means a larger y. A frontal face is accepted
when the eye-to-eye distance is 90-110% of the distance from the eye
midpoint to the mouth. A profile face is accepted when the three sides
are close to the 2 : 1.732 : 1 pattern of a 30-60-90 triangle relative
to its shortest side.

Box corners are produced by fixed affine offsets of the matched points.
The vertical offsets are applied as written under the y-down convention
(``axis_mode="ydown"``); ``axis_mode="yup"`` negates them for callers
whose ground truth assumes y growing upward. Boxes are never clipped
here; clipping happens at render/evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, permutations

from .segmentation import FeatureBlock

__all__ = [
    "InvalidPoseError",
    "POSE_FRONTAL",
    "POSE_RIGHT",
    "POSE_LEFT",
    "TriangleCandidate",
    "FaceBox",
    "match_frontal_triangle",
    "match_side_triangle",
    "face_box_frontal",
    "face_box_right",
    "face_box_left",
    "face_box",
    "format_box_line",
    "parse_box_line",
    "DEFAULT_EYE_LEVEL_FRAC",
    "DEFAULT_SIDE_TOLERANCE",
]

POSE_FRONTAL = "frontal"
POSE_RIGHT = "right-side"
POSE_LEFT = "left-side"

FRONTAL_RATIO_MIN = 0.9
FRONTAL_RATIO_MAX = 1.1
# Profile side-length pattern relative to the shortest side.
SIDE_HYPOTENUSE_RATIO = 2.0
SIDE_LONG_LEG_RATIO = 1.732

# Eyes may differ in height by at most this fraction of their distance.
DEFAULT_EYE_LEVEL_FRAC = 0.3
# Relative half-width of the acceptance window around the profile ratios;
# the exact ratios never fire on measured centroids.
DEFAULT_SIDE_TOLERANCE = 0.15


class InvalidPoseError(ValueError):
    """Raised when a box builder receives a candidate of the wrong pose."""


def _dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class TriangleCandidate:
    """A labeled (right-eye, mouth, left-eye) point triple with match score.

    ``i`` and ``k`` are the eye (or eye/ear) centroids, ``j`` the mouth.
    ``score`` is the deviation of the measured ratios from their ideals;
    lower is better.
    """

    i: tuple[float, float]
    j: tuple[float, float]
    k: tuple[float, float]
    pose: str
    score: float

    def distances(self) -> tuple[float, float, float]:
        """(D(i,k), D(i,j), D(j,k))."""
        return (_dist(self.i, self.k), _dist(self.i, self.j), _dist(self.j, self.k))

    def frontal_ratio(self) -> float:
        """Eye distance over midpoint-to-mouth distance."""
        mid = ((self.i[0] + self.k[0]) / 2.0, (self.i[1] + self.k[1]) / 2.0)
        return _dist(self.i, self.k) / _dist(mid, self.j)


@dataclass(frozen=True)
class FaceBox:
    """Four corner points of a face region, axis-aligned.

    Corner structure: x1 == x4, x2 == x3, y1 == y2, y3 == y4, x1 < x2.
    """

    x1: float
    y1: float
    x2: float
    y2: float
    x3: float
    y3: float
    x4: float
    y4: float
    pose: str
    score: float = 0.0

    def corners(self):
        return ((self.x1, self.y1), (self.x2, self.y2), (self.x3, self.y3), (self.x4, self.y4))

    def rect(self) -> tuple[float, float, float, float]:
        """(x_min, y_min, x_max, y_max) normalized extents."""
        xs = (self.x1, self.x2, self.x3, self.x4)
        ys = (self.y1, self.y2, self.y3, self.y4)
        return (min(xs), min(ys), max(xs), max(ys))


def _centroids(blocks) -> list[tuple[float, float]]:
    pts = []
    for b in blocks:
        if isinstance(b, FeatureBlock):
            pts.append(b.centroid)
        else:
            pts.append((float(b[0]), float(b[1])))
    return pts


def match_frontal_triangle(
    blocks,
    eye_level_frac: float = DEFAULT_EYE_LEVEL_FRAC,
    ratio_mode: str = "midpoint",
) -> list[TriangleCandidate]:
    """Frontal eye-eye-mouth candidates, best (lowest score) first.

    For every choice of two eye blocks and one mouth block the triple is
    accepted when the mouth lies below both eyes, the eyes are nearly
    level (height difference at most ``eye_level_frac`` of the eye
    distance), and the eye distance is 90-110% of the distance from the
    eye midpoint to the mouth. ``ratio_mode="per-eye"`` instead requires
    each individual eye-to-mouth distance to satisfy the 90-110% window.
    The eye with the smaller x becomes ``i``.
    """
    if ratio_mode not in ("midpoint", "per-eye"):
        raise ValueError(f"unknown ratio_mode {ratio_mode!r}")
    pts = _centroids(blocks)
    out = []
    for a, b in combinations(range(len(pts)), 2):
        for m in range(len(pts)):
            if m in (a, b):
                continue
            eye1, eye2, mouth = pts[a], pts[b], pts[m]
            i, k = (eye1, eye2) if eye1[0] <= eye2[0] else (eye2, eye1)
            d_eyes = _dist(i, k)
            if d_eyes == 0.0 or _dist(i, mouth) == 0.0 or _dist(k, mouth) == 0.0:
                continue
            if not (mouth[1] > i[1] and mouth[1] > k[1]):
                continue
            if abs(i[1] - k[1]) > eye_level_frac * d_eyes:
                continue
            if ratio_mode == "midpoint":
                mid = ((i[0] + k[0]) / 2.0, (i[1] + k[1]) / 2.0)
                d_mouth = _dist(mid, mouth)
                if d_mouth == 0.0:
                    continue
                ratios = [d_eyes / d_mouth]
            else:
                ratios = [d_eyes / _dist(i, mouth), d_eyes / _dist(k, mouth)]
            if all(FRONTAL_RATIO_MIN <= r <= FRONTAL_RATIO_MAX for r in ratios):
                score = max(abs(r - 1.0) for r in ratios)
                out.append(TriangleCandidate(i=i, j=mouth, k=k, pose=POSE_FRONTAL, score=score))
    out.sort(key=lambda c: c.score)
    return out


def match_side_triangle(
    blocks,
    tolerance: float = DEFAULT_SIDE_TOLERANCE,
) -> list[TriangleCandidate]:
    """Profile candidates matching the 2 : 1.732 : 1 side pattern.

    Every labeling (i, j, k) of every block triple is tested:
    D(i,k) must lie within ``tolerance`` (relative) of 2 D(j,k) and
    D(i,j) within ``tolerance`` of 1.732 D(j,k). The pose is right-side
    when i lies at larger x than k, left-side otherwise.
    """
    pts = _centroids(blocks)
    out = []
    for ia, ja, ka in permutations(range(len(pts)), 3):
        i, j, k = pts[ia], pts[ja], pts[ka]
        d_jk = _dist(j, k)
        d_ik = _dist(i, k)
        d_ij = _dist(i, j)
        if d_jk == 0.0 or d_ik == 0.0 or d_ij == 0.0:
            continue
        dev_hyp = abs(d_ik / (SIDE_HYPOTENUSE_RATIO * d_jk) - 1.0)
        dev_leg = abs(d_ij / (SIDE_LONG_LEG_RATIO * d_jk) - 1.0)
        if dev_hyp <= tolerance and dev_leg <= tolerance:
            pose = POSE_RIGHT if i[0] > k[0] else POSE_LEFT
            out.append(
                TriangleCandidate(i=i, j=j, k=k, pose=pose, score=max(dev_hyp, dev_leg))
            )
    out.sort(key=lambda c: c.score)
    return out


def _apply_y(anchor_y: float, offset: float, axis_mode: str) -> float:
    if axis_mode == "ydown":
        return anchor_y + offset
    if axis_mode == "yup":
        return anchor_y - offset
    raise ValueError(f"unknown axis_mode {axis_mode!r}")


def face_box_frontal(t: TriangleCandidate, axis_mode: str = "ydown") -> FaceBox:
    """Frontal box: a third of the eye distance beyond each triangle point.

    x1 = x4 = xi - D/3, x2 = x3 = xk + D/3, y1 = y2 = yi + D/3,
    y3 = y4 = yj - D/3 with D the eye distance.
    """
    if t.pose != POSE_FRONTAL:
        raise InvalidPoseError(f"expected frontal candidate, got {t.pose}")
    d = _dist(t.i, t.k)
    x1 = t.i[0] - d / 3.0
    x2 = t.k[0] + d / 3.0
    y1 = _apply_y(t.i[1], d / 3.0, axis_mode)
    y3 = _apply_y(t.j[1], -d / 3.0, axis_mode)
    return FaceBox(x1, y1, x2, y1, x2, y3, x1, y3, pose=POSE_FRONTAL, score=t.score)


def face_box_right(t: TriangleCandidate, axis_mode: str = "ydown") -> FaceBox:
    """Right-profile box anchored on point i, scaled by D(i,j).

    x1 = x4 = xi - D/6, x2 = x3 = xi + 1.2 D, y1 = y2 = yi + D/4,
    y3 = y4 = yi - D.
    """
    if t.pose != POSE_RIGHT:
        raise InvalidPoseError(f"expected right-side candidate, got {t.pose}")
    d = _dist(t.i, t.j)
    return _profile_box(t.i, d, POSE_RIGHT, t.score, axis_mode)


def face_box_left(t: TriangleCandidate, axis_mode: str = "ydown") -> FaceBox:
    """Left-profile box anchored on point j, scaled by D(j,k).

    x1 = x4 = xj - D/6, x2 = x3 = xj + 1.2 D, y1 = y2 = yj + D/4,
    y3 = y4 = yj - D.
    """
    if t.pose != POSE_LEFT:
        raise InvalidPoseError(f"expected left-side candidate, got {t.pose}")
    d = _dist(t.j, t.k)
    return _profile_box(t.j, d, POSE_LEFT, t.score, axis_mode)


def _profile_box(anchor, d: float, pose: str, score: float, axis_mode: str) -> FaceBox:
    x1 = anchor[0] - d / 6.0
    x2 = anchor[0] + 1.2 * d
    y1 = _apply_y(anchor[1], d / 4.0, axis_mode)
    y3 = _apply_y(anchor[1], -1.0 * d, axis_mode)
    return FaceBox(x1, y1, x2, y1, x2, y3, x1, y3, pose=pose, score=score)


_BOX_BUILDERS = {
    POSE_FRONTAL: face_box_frontal,
    POSE_RIGHT: face_box_right,
    POSE_LEFT: face_box_left,
}


def face_box(t: TriangleCandidate, axis_mode: str = "ydown") -> FaceBox:
    """Build the face box matching the candidate's pose."""
    try:
        builder = _BOX_BUILDERS[t.pose]
    except KeyError:
        raise InvalidPoseError(f"unknown pose {t.pose!r}") from None
    return builder(t, axis_mode=axis_mode)


def format_box_line(box: FaceBox) -> str:
    """One-line ASCII form: pose, eight corner coordinates, score."""
    values = (box.x1, box.y1, box.x2, box.y2, box.x3, box.y3, box.x4, box.y4, box.score)
    return " ".join([box.pose] + [repr(float(v)) for v in values])


def parse_box_line(line: str) -> FaceBox:
    parts = line.split()
    if len(parts) != 10:
        raise ValueError(f"expected 10 fields, got {len(parts)}")
    pose = parts[0]
    if pose not in _BOX_BUILDERS:
        raise ValueError(f"unknown pose {pose!r}")
    nums = [float(p) for p in parts[1:]]
    return FaceBox(*nums[:8], pose=pose, score=nums[8])
