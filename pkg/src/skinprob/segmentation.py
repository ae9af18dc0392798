"""Skin mask computation, binary morphology, and feature-block extraction.

Morphology border convention: the structuring element is clipped at the
image border, i.e. erosion takes the minimum and dilation the maximum
over the in-bounds neighbors only. Under this convention opening and
closing are exactly idempotent, opening is anti-extensive, closing is
extensive, and opening/closing are duals under mask complement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .imaging import equalize_histogram, validate_image, validate_mask
from .skin_model import SkinModel, _log_likelihood_array, log_likelihood_tables

__all__ = [
    "NoSkinRegionError",
    "FeatureBlock",
    "square_se",
    "classify_skin",
    "erode",
    "dilate",
    "morph_open",
    "morph_close",
    "connected_components",
    "extract_dark_blocks",
    "DEFAULT_DARK_THRESHOLD",
    "DEFAULT_MIN_BLOCK_AREA_FRAC",
]

DEFAULT_DARK_THRESHOLD = 80
# Blocks smaller than this fraction of the image area are noise.
DEFAULT_MIN_BLOCK_AREA_FRAC = 0.0002


class NoSkinRegionError(ValueError):
    """Raised when an operation needs a skin region and the mask is empty."""


@dataclass(frozen=True)
class FeatureBlock:
    """A connected region of candidate-feature pixels.

    ``centroid`` is the (x, y) mean of member pixel coordinates; ``bbox``
    is (x_min, y_min, x_max, y_max) with inclusive extents.
    """

    label: int
    area: int
    centroid: tuple[float, float]
    bbox: tuple[int, int, int, int]


def square_se(size: int = 3) -> np.ndarray:
    """All-ones square structuring element with odd side length."""
    if size < 1 or size % 2 == 0:
        raise ValueError(f"structuring element side must be odd and >= 1, got {size}")
    return np.ones((size, size), dtype=bool)


def _check_se(se) -> np.ndarray:
    if se is None:
        return square_se(3)
    se = np.asarray(se).astype(bool)
    if se.ndim != 2 or se.shape[0] != se.shape[1] or se.shape[0] % 2 == 0:
        raise ValueError(f"structuring element must be square with odd side, got {se.shape}")
    return se


def classify_skin(img: np.ndarray, model: SkinModel, equalize: bool = False) -> np.ndarray:
    """Per-pixel skin mask: 1 where likelihood >= model threshold.

    The comparison is inclusive and runs in log space over precomputed
    per-channel tables, which is bit-identical to direct per-pixel
    evaluation. When ``equalize`` is set the image is histogram-equalized
    first.
    """
    img = validate_image(img)
    if equalize:
        img = equalize_histogram(img)
    tables = log_likelihood_tables(model)
    ll = _log_likelihood_array(img, tables)
    return (ll >= model.threshold_log).astype(np.uint8)


def erode(mask: np.ndarray, se=None) -> np.ndarray:
    """Binary erosion; out-of-image neighbors are ignored."""
    mask = validate_mask(mask)
    se = _check_se(se)
    return ndimage.binary_erosion(mask, structure=se, border_value=1).astype(np.uint8)


def dilate(mask: np.ndarray, se=None) -> np.ndarray:
    """Binary dilation; out-of-image neighbors contribute nothing."""
    mask = validate_mask(mask)
    se = _check_se(se)
    return ndimage.binary_dilation(mask, structure=se, border_value=0).astype(np.uint8)


def morph_open(mask: np.ndarray, se=None) -> np.ndarray:
    """Opening: erosion followed by dilation (removes specks)."""
    se = _check_se(se)
    return dilate(erode(mask, se), se)


def morph_close(mask: np.ndarray, se=None) -> np.ndarray:
    """Closing: dilation followed by erosion (fills holes)."""
    se = _check_se(se)
    return erode(dilate(mask, se), se)


def connected_components(mask: np.ndarray, connectivity: int = 8) -> list[FeatureBlock]:
    """Maximal connected regions of 1-pixels.

    Blocks are sorted by descending area, ties broken by the top-left
    bounding-box corner (y, then x).
    """
    mask = validate_mask(mask)
    if connectivity == 8:
        structure = np.ones((3, 3), dtype=bool)
    elif connectivity == 4:
        structure = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)
    else:
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    labels, count = ndimage.label(mask, structure=structure)
    blocks = []
    for label, slc in enumerate(ndimage.find_objects(labels), start=1):
        ys, xs = np.nonzero(labels[slc] == label)
        ys = ys + slc[0].start
        xs = xs + slc[1].start
        blocks.append(
            FeatureBlock(
                label=label,
                area=int(xs.size),
                centroid=(float(xs.mean()), float(ys.mean())),
                bbox=(int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())),
            )
        )
    blocks.sort(key=lambda b: (-b.area, b.bbox[1], b.bbox[0], b.label))
    return blocks


def extract_dark_blocks(
    img: np.ndarray,
    skin_mask: np.ndarray,
    dark_threshold: int = DEFAULT_DARK_THRESHOLD,
    min_area_frac: float = DEFAULT_MIN_BLOCK_AREA_FRAC,
    se=None,
) -> list[FeatureBlock]:
    """Dark non-skin blocks inside the main skin region: eye/ear/mouth candidates.

    A pixel is a candidate when it is non-skin, its intensity
    (R + G + B) / 3 falls below ``dark_threshold``, and it lies within the
    filled bounding box of the largest skin component. The candidate mask
    is opened to drop specks, then 8-connected components smaller than
    ``min_area_frac`` of the image area are discarded.
    """
    img = validate_image(img)
    skin_mask = validate_mask(skin_mask)
    if img.shape[:2] != skin_mask.shape:
        raise ValueError("image and mask dimensions differ")
    if not skin_mask.any():
        raise NoSkinRegionError("skin mask is empty")

    largest = connected_components(skin_mask, connectivity=8)[0]
    x0, y0, x1, y1 = largest.bbox
    region = np.zeros_like(skin_mask, dtype=bool)
    region[y0 : y1 + 1, x0 : x1 + 1] = True

    intensity = img.sum(axis=2, dtype=np.float64) / 3.0
    candidates = (skin_mask == 0) & (intensity < dark_threshold) & region
    cleaned = morph_open(candidates.astype(np.uint8), se)

    min_area = min_area_frac * img.shape[0] * img.shape[1]
    return [
        b
        for b in connected_components(cleaned, connectivity=8)
        if b.area >= min_area
    ]
