"""Per-channel Gaussian skin model: training, likelihoods, threshold tuning.

A model holds the mean and standard deviation of each RGB channel over a
pool of pure-skin training pixels, plus a decision threshold set to the
lowest likelihood any training pixel attains. A test pixel is skin when
its likelihood is at least that threshold.

Likelihood comparisons run in log space so that far-away pixels, whose
channel-density product underflows double precision, are still ordered
correctly; linear values are exposed at the interface. All log-space
arithmetic uses plain +,-,*,/ on float64 (exact IEEE operations), with
transcendentals applied only to scalar constants, so table-based and
direct evaluation are bit-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .imaging import validate_image

__all__ = [
    "STD_FLOOR",
    "KERNEL_GAUSSIAN",
    "KERNEL_UNNORMALIZED",
    "KERNELS",
    "EmptyTrainingSetError",
    "ChannelStats",
    "SkinModel",
    "train_skin_model",
    "gaussian_pdf",
    "pixel_likelihood",
    "pixel_log_likelihood",
    "log_likelihood_tables",
    "tune_threshold",
    "fit_skin_model",
    "pool_pixels",
    "save_model",
    "load_model",
]

# Half a quantization step: a constant training patch would otherwise give
# std = 0 and a degenerate density.
STD_FLOOR = 0.5

# Normalized Gaussian density (default).
KERNEL_GAUSSIAN = "gaussian"
# exp(-0.5 * (x - mean)^2 / std): no normalizing factor, std not squared.
KERNEL_UNNORMALIZED = "unnormalized"
KERNELS = (KERNEL_GAUSSIAN, KERNEL_UNNORMALIZED)

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)

MODEL_FORMAT_VERSION = 1


class EmptyTrainingSetError(ValueError):
    """Raised when training is attempted with no pixels."""


@dataclass(frozen=True)
class ChannelStats:
    """Mean and floor-clamped population standard deviation of one channel."""

    mean: float
    std: float

    def __post_init__(self):
        if not 0.0 <= self.mean <= 255.0:
            raise ValueError(f"mean {self.mean} outside [0, 255]")
        if self.std < STD_FLOOR:
            raise ValueError(f"std {self.std} below floor {STD_FLOOR}")


@dataclass(frozen=True)
class SkinModel:
    """Immutable trained model; safe to share across threads.

    ``threshold`` is the minimum training-pixel likelihood (linear units);
    ``threshold_log`` is its log-space counterpart and is what decisions
    compare against.
    """

    red: ChannelStats
    green: ChannelStats
    blue: ChannelStats
    threshold: float
    threshold_log: float
    kernel: str = KERNEL_GAUSSIAN
    train_pixel_count: int = 0
    format_version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ValueError(f"unknown kernel {self.kernel!r}")

    @property
    def stats(self) -> tuple[ChannelStats, ChannelStats, ChannelStats]:
        return (self.red, self.green, self.blue)


def pool_pixels(patches) -> np.ndarray:
    """Stack the pixels of all patches into one (N, 3) uint8 array."""
    if not patches:
        raise EmptyTrainingSetError("no training patches given")
    flats = [validate_image(p).reshape(-1, 3) for p in patches]
    return np.concatenate(flats, axis=0)


def train_skin_model(patches) -> tuple[ChannelStats, ChannelStats, ChannelStats]:
    """Fit per-channel statistics over all pixels of all training patches.

    Every pixel of every patch must be pure skin; that is the caller's
    contract. Mean and standard deviation are pooled over the full pixel
    set in population form (divisor N), and the standard deviation is
    clamped below by ``STD_FLOOR``.
    """
    pixels = pool_pixels(patches).astype(np.float64)
    stats = []
    for c in range(3):
        values = pixels[:, c]
        mean = float(values.mean())
        std = float(np.sqrt(np.mean((values - mean) ** 2)))
        stats.append(ChannelStats(mean=mean, std=max(std, STD_FLOOR)))
    return tuple(stats)


def _channel_log_density(values: np.ndarray, stats: ChannelStats, kernel: str) -> np.ndarray:
    """Log of the channel density at ``values``; exact elementwise arithmetic."""
    d = values - stats.mean
    if kernel == KERNEL_GAUSSIAN:
        z = d / stats.std
        return -0.5 * (z * z) - math.log(stats.std * _SQRT_TWO_PI)
    if kernel == KERNEL_UNNORMALIZED:
        return -0.5 * (d * d) / stats.std
    raise ValueError(f"unknown kernel {kernel!r}")


def gaussian_pdf(x: float, stats: ChannelStats, kernel: str = KERNEL_GAUSSIAN) -> float:
    """Density of one channel value under the chosen kernel.

    The ``gaussian`` kernel is the normalized density
    exp(-(x-mean)^2 / (2 std^2)) / (std sqrt(2 pi)); the ``unnormalized``
    kernel is exp(-0.5 (x-mean)^2 / std) and equals exactly 1.0 at the
    mean.
    """
    ll = _channel_log_density(np.float64(x), stats, kernel)
    return float(np.exp(ll))


def log_likelihood_tables(model: SkinModel) -> np.ndarray:
    """Per-channel log densities over the 8-bit lattice, shape (3, 256).

    Summing one entry per channel reproduces direct log-likelihood
    evaluation bit-exactly.
    """
    codes = np.arange(256, dtype=np.float64)
    return np.stack(
        [_channel_log_density(codes, s, model.kernel) for s in model.stats]
    )


def pixel_log_likelihood(pixel, model: SkinModel) -> float:
    """Log-likelihood of one (R, G, B) pixel under the model."""
    r, g, b = (np.float64(v) for v in pixel)
    lr = _channel_log_density(r, model.red, model.kernel)
    lg = _channel_log_density(g, model.green, model.kernel)
    lb = _channel_log_density(b, model.blue, model.kernel)
    return float(lr + lg + lb)


def pixel_likelihood(pixel, model: SkinModel) -> float:
    """Likelihood of one (R, G, B) pixel: the product of channel densities.

    Channel independence makes this the product of the three per-channel
    densities; it is computed as exp of the log-space sum and can
    underflow to 0.0 for pixels far from the model.
    """
    return float(np.exp(pixel_log_likelihood(pixel, model)))


def _log_likelihood_array(pixels: np.ndarray, tables: np.ndarray) -> np.ndarray:
    """Log-likelihoods of an (..., 3) uint8 pixel array via the tables."""
    ll = tables[0][pixels[..., 0]] + tables[1][pixels[..., 1]]
    ll = ll + tables[2][pixels[..., 2]]
    return ll


def tune_threshold(stats, kernel: str, train_pixels: np.ndarray) -> float:
    """Minimum likelihood over the training pixels (linear units).

    Every training pixel then satisfies likelihood >= threshold, so the
    raw training patches classify as all skin.
    """
    return float(np.exp(_tune_threshold_log(stats, kernel, train_pixels)))


def _tune_threshold_log(stats, kernel: str, train_pixels: np.ndarray) -> float:
    train_pixels = np.asarray(train_pixels)
    if train_pixels.size == 0:
        raise EmptyTrainingSetError("no training pixels given")
    if train_pixels.ndim != 2 or train_pixels.shape[1] != 3:
        raise ValueError(f"expected (N, 3) pixel array, got {train_pixels.shape}")
    codes = np.arange(256, dtype=np.float64)
    tables = np.stack([_channel_log_density(codes, s, kernel) for s in stats])
    return float(_log_likelihood_array(train_pixels, tables).min())


def fit_skin_model(patches, kernel: str = KERNEL_GAUSSIAN) -> SkinModel:
    """Train statistics and tune the threshold in one step."""
    if kernel not in KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}")
    red, green, blue = train_skin_model(patches)
    pixels = pool_pixels(patches)
    threshold_log = _tune_threshold_log((red, green, blue), kernel, pixels)
    return SkinModel(
        red=red,
        green=green,
        blue=blue,
        threshold=float(np.exp(threshold_log)),
        threshold_log=threshold_log,
        kernel=kernel,
        train_pixel_count=int(pixels.shape[0]),
    )


# -- model file ----------------------------------------------------------------
#
# UTF-8 JSON; floats are serialized with Python repr (shortest exact
# round-trip, at most 17 significant digits) so a reloaded model reproduces
# classifications bit-exactly.


def model_to_dict(model: SkinModel) -> dict:
    return {
        "format_version": model.format_version,
        "kernel": model.kernel,
        "mean_r": model.red.mean,
        "mean_g": model.green.mean,
        "mean_b": model.blue.mean,
        "std_r": model.red.std,
        "std_g": model.green.std,
        "std_b": model.blue.std,
        "threshold": model.threshold,
        "threshold_log": model.threshold_log,
        "train_pixel_count": model.train_pixel_count,
    }


def model_from_dict(data: dict) -> SkinModel:
    try:
        return SkinModel(
            red=ChannelStats(float(data["mean_r"]), float(data["std_r"])),
            green=ChannelStats(float(data["mean_g"]), float(data["std_g"])),
            blue=ChannelStats(float(data["mean_b"]), float(data["std_b"])),
            threshold=float(data["threshold"]),
            threshold_log=float(data["threshold_log"]),
            kernel=str(data["kernel"]),
            train_pixel_count=int(data["train_pixel_count"]),
            format_version=int(data["format_version"]),
        )
    except KeyError as exc:
        raise ValueError(f"model file missing key: {exc}") from exc


def save_model(model: SkinModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path) -> SkinModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
