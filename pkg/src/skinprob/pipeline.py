"""End-to-end detection pipeline and its configuration.

``PipelineConfig`` gathers every tunable knob; defaults follow the module
constants. A config file is plain UTF-8 ``key=value`` lines with ``#``
comments; command-line flags override file values, which override the
built-in defaults.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import face_geometry, segmentation
from .baselines import BaselineConfig
from .face_geometry import FaceBox, face_box
from .imaging import equalize_histogram, validate_image
from .segmentation import NoSkinRegionError, classify_skin, square_se
from .skin_model import KERNEL_GAUSSIAN, SkinModel

__all__ = [
    "PipelineConfig",
    "load_config_file",
    "config_from_mapping",
    "detect_skin",
    "detect_faces",
    "draw_box",
]


@dataclass(frozen=True)
class PipelineConfig:
    """All pipeline knobs in one place.

    ``equalize`` applies histogram equalization to test images before
    classification (training always uses raw patches).
    """

    equalize: bool = True
    kernel: str = KERNEL_GAUSSIAN
    se_size: int = 3
    dark_threshold: int = segmentation.DEFAULT_DARK_THRESHOLD
    min_block_area_frac: float = segmentation.DEFAULT_MIN_BLOCK_AREA_FRAC
    eye_level_frac: float = face_geometry.DEFAULT_EYE_LEVEL_FRAC
    side_tolerance: float = face_geometry.DEFAULT_SIDE_TOLERANCE
    iou_success: float = 0.5
    axis_mode: str = "ydown"
    ratio_mode: str = "midpoint"
    baseline: BaselineConfig = BaselineConfig()

    def replace(self, **kwargs) -> "PipelineConfig":
        return dataclasses.replace(self, **kwargs)


_BOOL_WORDS = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _parse_bool(value: str) -> bool:
    try:
        return _BOOL_WORDS[value.strip().lower()]
    except KeyError:
        raise ValueError(f"expected a boolean, got {value!r}") from None


def _parse_pair(value: str, conv):
    parts = [p for p in value.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ValueError(f"expected two values, got {value!r}")
    return (conv(parts[0]), conv(parts[1]))


_CONFIG_PARSERS = {
    "equalize": _parse_bool,
    "kernel": str.strip,
    "se_size": int,
    "dark_threshold": int,
    "min_block_area_frac": float,
    "eye_level_frac": float,
    "side_tolerance": float,
    "iou_success": float,
    "axis_mode": str.strip,
    "ratio_mode": str.strip,
    "cb_range": lambda v: _parse_pair(v, int),
    "cr_range": lambda v: _parse_pair(v, int),
    "h_range": lambda v: _parse_pair(v, float),
    "s_range": lambda v: _parse_pair(v, float),
    "rg_bins": int,
    "rg_hist_threshold": float,
}

_BASELINE_KEYS = ("cb_range", "cr_range", "h_range", "s_range", "rg_bins", "rg_hist_threshold")


def load_config_file(path) -> dict:
    """Parse a key=value config file into typed values."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _CONFIG_PARSERS[key](value)
    return values


def config_from_mapping(values: dict, base: PipelineConfig | None = None) -> PipelineConfig:
    """Build a config from parsed key/value pairs layered over ``base``."""
    cfg = base if base is not None else PipelineConfig()
    baseline_kwargs = {k: values[k] for k in _BASELINE_KEYS if k in values}
    pipeline_kwargs = {k: v for k, v in values.items() if k not in _BASELINE_KEYS}
    if baseline_kwargs:
        pipeline_kwargs["baseline"] = dataclasses.replace(cfg.baseline, **baseline_kwargs)
    return cfg.replace(**pipeline_kwargs)


def detect_skin(img: np.ndarray, model: SkinModel, cfg: PipelineConfig | None = None) -> np.ndarray:
    """Skin mask for a test image under the pipeline's equalization policy."""
    cfg = cfg or PipelineConfig()
    return classify_skin(img, model, equalize=cfg.equalize)


def detect_faces(img: np.ndarray, model: SkinModel, cfg: PipelineConfig | None = None) -> list[FaceBox]:
    """Locate faces: skin mask, cleanup, dark blocks, triangle match, box.

    The skin mask is opened then closed to remove noise, dark feature
    blocks are extracted from the dominant skin region, and the best
    (lowest-deviation) frontal or profile triangle yields one face box.
    Returns an empty list when no face is found.
    """
    cfg = cfg or PipelineConfig()
    img = validate_image(img)
    proc = equalize_histogram(img) if cfg.equalize else img
    mask = classify_skin(proc, model, equalize=False)
    se = square_se(cfg.se_size)
    cleaned = segmentation.morph_close(segmentation.morph_open(mask, se), se)
    try:
        blocks = segmentation.extract_dark_blocks(
            proc,
            cleaned,
            dark_threshold=cfg.dark_threshold,
            min_area_frac=cfg.min_block_area_frac,
            se=se,
        )
    except NoSkinRegionError:
        return []
    if len(blocks) < 3:
        return []
    candidates = face_geometry.match_frontal_triangle(
        blocks, eye_level_frac=cfg.eye_level_frac, ratio_mode=cfg.ratio_mode
    )
    candidates += face_geometry.match_side_triangle(blocks, tolerance=cfg.side_tolerance)
    if not candidates:
        return []
    best = min(candidates, key=lambda c: c.score)
    return [face_box(best, axis_mode=cfg.axis_mode)]


def draw_box(img: np.ndarray, box: FaceBox, thickness: int = 2,
             color: tuple[int, int, int] = (0, 255, 0)) -> np.ndarray:
    """Copy of ``img`` with the box border drawn, clipped to the frame."""
    img = validate_image(img)
    out = img.copy()
    h, w = out.shape[:2]
    x0, y0, x1, y1 = box.rect()
    x0 = int(max(0, min(w - 1, round(x0))))
    x1 = int(max(0, min(w - 1, round(x1))))
    y0 = int(max(0, min(h - 1, round(y0))))
    y1 = int(max(0, min(h - 1, round(y1))))
    t = max(1, int(thickness))
    rgb = np.array(color, dtype=np.uint8)
    out[y0 : min(y0 + t, y1 + 1), x0 : x1 + 1] = rgb
    out[max(y1 - t + 1, y0) : y1 + 1, x0 : x1 + 1] = rgb
    out[y0 : y1 + 1, x0 : min(x0 + t, x1 + 1)] = rgb
    out[y0 : y1 + 1, max(x1 - t + 1, x0) : x1 + 1] = rgb
    return out
