"""Classical color-space skin classifiers used as comparison baselines.

Three pixelwise rules: a chroma box in studio-range YCbCr, a hue/saturation
box in HSV, and a normalized-rg chromaticity histogram. The box bounds and
histogram settings ship as implementation defaults in ``BaselineConfig``;
they are starting points, not calibrated values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import round_half_away, validate_image
from .skin_model import EmptyTrainingSetError, pool_pixels

__all__ = [
    "BaselineConfig",
    "rgb_to_ycbcr",
    "rgb_to_hsv",
    "classify_ycbcr",
    "classify_hsv",
    "rg_chromaticity",
    "train_rg_histogram",
    "classify_rg",
]

# Rec. 601 studio range: luma coded 16-235 (excursion 219, offset 16),
# chroma 16-240 (excursion +/-112 around 128).
_KR, _KG, _KB = 0.299, 0.587, 0.114
_LUMA_EXCURSION = 219.0
_LUMA_OFFSET = 16.0
_CHROMA_EXCURSION = 112.0
_CHROMA_OFFSET = 128.0


@dataclass(frozen=True)
class BaselineConfig:
    """Threshold boxes and histogram settings for the three baselines."""

    cb_range: tuple[int, int] = (77, 127)
    cr_range: tuple[int, int] = (133, 173)
    h_range: tuple[float, float] = (0.0, 50.0)  # degrees; h1 > h2 wraps through 0
    s_range: tuple[float, float] = (0.23, 0.68)
    rg_bins: int = 32
    rg_hist_threshold: float = 0.05

    def __post_init__(self):
        for name, (lo, hi) in (("cb_range", self.cb_range), ("cr_range", self.cr_range)):
            if not (16 <= lo <= hi <= 240):
                raise ValueError(f"{name} must satisfy 16 <= lo <= hi <= 240, got {lo}, {hi}")
        if not (0.0 <= self.s_range[0] <= self.s_range[1] <= 1.0):
            raise ValueError(f"s_range must satisfy 0 <= lo <= hi <= 1, got {self.s_range}")
        for h in self.h_range:
            if not (0.0 <= h < 360.0):
                raise ValueError(f"hue bounds must lie in [0, 360), got {self.h_range}")
        if self.rg_bins < 2:
            raise ValueError(f"rg_bins must be >= 2, got {self.rg_bins}")
        if self.rg_hist_threshold < 0.0:
            raise ValueError("rg_hist_threshold must be >= 0")


def rgb_to_ycbcr(pixels) -> np.ndarray:
    """Studio-range YCbCr codes for an (..., 3) uint8 RGB array.

    Y spans 16-235 (black at 16, white at 235), Cb and Cr span 16-240
    centered on 128. Values are rounded half away from zero to integers.
    """
    rgb = np.asarray(pixels, dtype=np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    luma = _KR * r + _KG * g + _KB * b
    y = _LUMA_OFFSET + _LUMA_EXCURSION * luma
    cb = _CHROMA_OFFSET + _CHROMA_EXCURSION * ((b - luma) / (1.0 - _KB))
    cr = _CHROMA_OFFSET + _CHROMA_EXCURSION * ((r - luma) / (1.0 - _KR))
    out = np.stack([y, cb, cr], axis=-1)
    return round_half_away(out).astype(np.int64)


def rgb_to_hsv(pixels) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hexcone HSV for an (..., 3) uint8 RGB array.

    Returns (h, s, v) with h in degrees [0, 360) and s, v in [0, 1].
    Achromatic pixels (max channel equals min channel, including black)
    get s = 0 and the conventional h = 0; hue is undefined there and
    classifiers must treat such pixels via the s = 0 flag.
    """
    rgb = np.asarray(pixels, dtype=np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    v = np.maximum(np.maximum(r, g), b)
    cmin = np.minimum(np.minimum(r, g), b)
    delta = v - cmin

    chromatic = delta > 0.0
    safe_delta = np.where(chromatic, delta, 1.0)
    h = np.zeros_like(v)
    r_is_max = chromatic & (v == r)
    g_is_max = chromatic & (v == g) & ~r_is_max
    b_is_max = chromatic & ~r_is_max & ~g_is_max
    h = np.where(r_is_max, 60.0 * ((g - b) / safe_delta), h)
    h = np.where(g_is_max, 60.0 * ((b - r) / safe_delta + 2.0), h)
    h = np.where(b_is_max, 60.0 * ((r - g) / safe_delta + 4.0), h)
    h = np.where(h < 0.0, h + 360.0, h)

    s = np.where(v > 0.0, delta / np.where(v > 0.0, v, 1.0), 0.0)
    return h, s, v


def classify_ycbcr(img: np.ndarray, cfg: BaselineConfig) -> np.ndarray:
    """Mask = 1 where Cb and Cr both fall inside their boxes (inclusive)."""
    img = validate_image(img)
    ycbcr = rgb_to_ycbcr(img)
    cb, cr = ycbcr[..., 1], ycbcr[..., 2]
    (cb1, cb2), (cr1, cr2) = cfg.cb_range, cfg.cr_range
    mask = (cb >= cb1) & (cb <= cb2) & (cr >= cr1) & (cr <= cr2)
    return mask.astype(np.uint8)


def classify_hsv(img: np.ndarray, cfg: BaselineConfig) -> np.ndarray:
    """Mask = 1 where hue and saturation fall inside their boxes.

    The hue interval wraps through 0 degrees when h1 > h2. Achromatic
    pixels (s = 0) are never skin.
    """
    img = validate_image(img)
    h, s, _ = rgb_to_hsv(img)
    h1, h2 = cfg.h_range
    if h1 <= h2:
        h_ok = (h >= h1) & (h <= h2)
    else:
        h_ok = (h >= h1) | (h <= h2)
    s1, s2 = cfg.s_range
    mask = h_ok & (s >= s1) & (s <= s2) & (s > 0.0)
    return mask.astype(np.uint8)


def rg_chromaticity(pixels) -> tuple[np.ndarray, np.ndarray]:
    """(r, g) = (R, G) / (R + G + B); zero-sum pixels map to (1/3, 1/3)."""
    arr = np.asarray(pixels, dtype=np.float64)
    total = arr[..., 0] + arr[..., 1] + arr[..., 2]
    zero = total == 0.0
    safe = np.where(zero, 3.0, total)
    r = np.where(zero, 1.0 / 3.0, arr[..., 0] / safe)
    g = np.where(zero, 1.0 / 3.0, arr[..., 1] / safe)
    return r, g


def _rg_bin_indices(r: np.ndarray, g: np.ndarray, bins: int) -> tuple[np.ndarray, np.ndarray]:
    ri = np.minimum((r * bins).astype(np.int64), bins - 1)
    gi = np.minimum((g * bins).astype(np.int64), bins - 1)
    return ri, gi


def train_rg_histogram(patches, bins: int = 32) -> np.ndarray:
    """Normalized-rg histogram of skin training pixels, peak scaled to 1."""
    pixels = pool_pixels(patches)
    if pixels.shape[0] == 0:
        raise EmptyTrainingSetError("no training pixels given")
    r, g = rg_chromaticity(pixels)
    ri, gi = _rg_bin_indices(r, g, bins)
    hist = np.zeros((bins, bins), dtype=np.float64)
    np.add.at(hist, (ri, gi), 1.0)
    return hist / hist.max()


def classify_rg(img: np.ndarray, hist: np.ndarray, threshold: float = 0.05) -> np.ndarray:
    """Mask = 1 where the (r, g) bin weight is at least ``threshold``."""
    img = validate_image(img)
    bins = hist.shape[0]
    if hist.shape != (bins, bins):
        raise ValueError(f"histogram must be square, got {hist.shape}")
    r, g = rg_chromaticity(img)
    ri, gi = _rg_bin_indices(r, g, bins)
    return (hist[ri, gi] >= threshold).astype(np.uint8)
