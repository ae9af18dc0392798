"""Dataset manifests, localization scoring, and detection-rate reports.

Box-mode manifests list one image per line followed by one or more
ground-truth rectangles: ``path x_min y_min x_max y_max [...]``.
Pixel-mode manifests pair an image with a ground-truth mask:
``path maskpath``. Paths must not contain whitespace and must be unique.

An image counts as a successful localization when some emitted face box,
clipped to the frame, reaches IoU >= the configured success threshold
against some ground-truth box.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .imaging import FormatError, load_image, load_mask
from .pipeline import PipelineConfig, detect_faces, detect_skin
from .skin_model import SkinModel

__all__ = [
    "ManifestError",
    "BoxEntry",
    "PixelEntry",
    "ImageResult",
    "PixelImageResult",
    "EvaluationReport",
    "PixelEvaluationReport",
    "iou",
    "clip_rect",
    "load_manifest",
    "evaluate",
    "evaluate_pixels",
    "worker_count",
]

THREADS_ENV_VAR = "SKINPROB_THREADS"


class ManifestError(ValueError):
    """Raised when a manifest file is malformed."""


@dataclass(frozen=True)
class BoxEntry:
    path: str
    boxes: tuple[tuple[float, float, float, float], ...]


@dataclass(frozen=True)
class PixelEntry:
    path: str
    mask_path: str


@dataclass(frozen=True)
class ImageResult:
    path: str
    matched: bool
    best_iou: float
    error: str | None = None


@dataclass(frozen=True)
class PixelImageResult:
    path: str
    accuracy: float
    precision: float
    recall: float
    pixels: int
    correct: int
    error: str | None = None


@dataclass(frozen=True)
class EvaluationReport:
    total_images: int
    successful: int
    rate: float  # percent
    iou_success: float
    per_image: tuple[ImageResult, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "mode": "box",
            "iou_success": self.iou_success,
            "total_images": self.total_images,
            "successful": self.successful,
            "rate": self.rate,
            "per_image": [
                {
                    "path": r.path,
                    "matched": r.matched,
                    "best_iou": r.best_iou,
                    "error": r.error,
                }
                for r in self.per_image
            ],
        }


@dataclass(frozen=True)
class PixelEvaluationReport:
    total_images: int
    total_pixels: int
    correct_pixels: int
    rate: float  # percent of pixels classified correctly
    mean_accuracy: float
    per_image: tuple[PixelImageResult, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "mode": "pixel",
            "total_images": self.total_images,
            "total_pixels": self.total_pixels,
            "correct_pixels": self.correct_pixels,
            "rate": self.rate,
            "mean_accuracy": self.mean_accuracy,
            "per_image": [
                {
                    "path": r.path,
                    "accuracy": r.accuracy,
                    "precision": r.precision,
                    "recall": r.recall,
                    "pixels": r.pixels,
                    "correct": r.correct,
                    "error": r.error,
                }
                for r in self.per_image
            ],
        }


def iou(a, b) -> float:
    """Intersection area over union area of two (x0, y0, x1, y1) rectangles."""
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    iw = min(ax1, bx1) - max(ax0, bx0)
    ih = min(ay1, by1) - max(ay0, by0)
    inter = max(0.0, iw) * max(0.0, ih)
    area_a = max(0.0, ax1 - ax0) * max(0.0, ay1 - ay0)
    area_b = max(0.0, bx1 - bx0) * max(0.0, by1 - by0)
    union = area_a + area_b - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def clip_rect(rect, width: int, height: int) -> tuple[float, float, float, float]:
    """Clip a rectangle to the image frame [0, width] x [0, height]."""
    x0, y0, x1, y1 = rect
    return (
        min(max(x0, 0.0), float(width)),
        min(max(y0, 0.0), float(height)),
        min(max(x1, 0.0), float(width)),
        min(max(y1, 0.0), float(height)),
    )


def load_manifest(path, mode: str = "box"):
    """Parse a manifest file into entries for the given mode.

    Relative paths inside the manifest are resolved against the
    manifest's own directory.
    """
    if mode not in ("box", "pixel"):
        raise ValueError(f"mode must be 'box' or 'pixel', got {mode!r}")
    entries = []
    seen = set()
    base = os.path.dirname(os.fspath(path))
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            img_path = os.path.join(base, parts[0]) if base else parts[0]
            if img_path in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate path {parts[0]!r}")
            seen.add(img_path)
            if mode == "pixel":
                if len(parts) != 2:
                    raise ManifestError(
                        f"{path}:{lineno}: pixel-mode lines are 'path maskpath'"
                    )
                mask_path = os.path.join(base, parts[1]) if base else parts[1]
                entries.append(PixelEntry(path=img_path, mask_path=mask_path))
                continue
            coords = parts[1:]
            if not coords or len(coords) % 4 != 0:
                raise ManifestError(
                    f"{path}:{lineno}: expected 4 coordinates per box"
                )
            try:
                values = [float(v) for v in coords]
            except ValueError as exc:
                raise ManifestError(f"{path}:{lineno}: bad coordinate: {exc}") from exc
            boxes = tuple(
                (values[i], values[i + 1], values[i + 2], values[i + 3])
                for i in range(0, len(values), 4)
            )
            for x0, y0, x1, y1 in boxes:
                if x1 <= x0 or y1 <= y0:
                    raise ManifestError(
                        f"{path}:{lineno}: ground-truth box must have positive area"
                    )
            entries.append(BoxEntry(path=img_path, boxes=boxes))
    return entries


def worker_count() -> int:
    """Worker pool size from the environment; 0 means sequential."""
    raw = os.environ.get(THREADS_ENV_VAR, "0")
    try:
        n = int(raw)
    except ValueError:
        return 0
    return max(0, n)


def _map_entries(func, entries):
    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, entries))
    return [func(e) for e in entries]


def _score_box_entry(entry: BoxEntry, model: SkinModel, cfg: PipelineConfig) -> ImageResult:
    try:
        img = load_image(entry.path)
    except (OSError, FormatError) as exc:
        return ImageResult(path=entry.path, matched=False, best_iou=0.0, error=str(exc))
    boxes = detect_faces(img, model, cfg)
    h, w = img.shape[:2]
    best = 0.0
    for box in boxes:
        pred = clip_rect(box.rect(), w, h)
        for gt in entry.boxes:
            best = max(best, iou(pred, gt))
    return ImageResult(
        path=entry.path, matched=best >= cfg.iou_success, best_iou=best, error=None
    )


def evaluate(entries, model: SkinModel, cfg: PipelineConfig | None = None) -> EvaluationReport:
    """Box-mode evaluation: fraction of images with a successful localization.

    Per-entry I/O failures are recorded on the entry (counted as misses)
    rather than aborting the run. The report is identical regardless of
    the worker count.
    """
    cfg = cfg or PipelineConfig()
    results = _map_entries(lambda e: _score_box_entry(e, model, cfg), list(entries))
    successful = sum(1 for r in results if r.matched)
    total = len(results)
    rate = 100.0 * successful / total if total else 0.0
    return EvaluationReport(
        total_images=total,
        successful=successful,
        rate=rate,
        iou_success=cfg.iou_success,
        per_image=tuple(results),
    )


def _score_pixel_entry(entry: PixelEntry, model: SkinModel, cfg: PipelineConfig) -> PixelImageResult:
    try:
        img = load_image(entry.path)
        truth = load_mask(entry.mask_path)
    except (OSError, FormatError) as exc:
        return PixelImageResult(
            path=entry.path, accuracy=0.0, precision=0.0, recall=0.0,
            pixels=0, correct=0, error=str(exc),
        )
    if truth.shape != img.shape[:2]:
        return PixelImageResult(
            path=entry.path, accuracy=0.0, precision=0.0, recall=0.0,
            pixels=0, correct=0, error="mask dimensions differ from image",
        )
    predicted = detect_skin(img, model, cfg)
    tp = int(((predicted == 1) & (truth == 1)).sum())
    tn = int(((predicted == 0) & (truth == 0)).sum())
    fp = int(((predicted == 1) & (truth == 0)).sum())
    fn = int(((predicted == 0) & (truth == 1)).sum())
    total = tp + tn + fp + fn
    return PixelImageResult(
        path=entry.path,
        accuracy=(tp + tn) / total if total else 0.0,
        precision=tp / (tp + fp) if tp + fp else 0.0,
        recall=tp / (tp + fn) if tp + fn else 0.0,
        pixels=total,
        correct=tp + tn,
        error=None,
    )


def evaluate_pixels(entries, model: SkinModel, cfg: PipelineConfig | None = None) -> PixelEvaluationReport:
    """Pixel-mode evaluation against ground-truth masks."""
    cfg = cfg or PipelineConfig()
    results = _map_entries(lambda e: _score_pixel_entry(e, model, cfg), list(entries))
    total_pixels = sum(r.pixels for r in results)
    correct = sum(r.correct for r in results)
    scored = [r for r in results if r.error is None]
    return PixelEvaluationReport(
        total_images=len(results),
        total_pixels=total_pixels,
        correct_pixels=correct,
        rate=100.0 * correct / total_pixels if total_pixels else 0.0,
        mean_accuracy=(
            100.0 * sum(r.accuracy for r in scored) / len(scored) if scored else 0.0
        ),
        per_image=tuple(results),
    )


# -- report rendering ----------------------------------------------------------


def _table(rows: list[list[str]]) -> list[str]:
    widths = [max(len(row[c]) for row in rows) for c in range(len(rows[0]))]
    return ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]


def format_report_text(report: EvaluationReport | PixelEvaluationReport) -> str:
    """Aligned-column summary plus a per-image detail section."""
    lines: list[str] = []
    if isinstance(report, EvaluationReport):
        lines.append(f"Face localization (IoU >= {report.iou_success:g})")
        lines.append("")
        lines += _table(
            [
                ["Images", "Successful", "Localization Rate"],
                [str(report.total_images), str(report.successful), f"{report.rate:.2f}%"],
            ]
        )
        lines.append("")
        rows = [["Image", "Matched", "Best IoU"]]
        for r in report.per_image:
            status = "error" if r.error else ("yes" if r.matched else "no")
            rows.append([r.path, status, f"{r.best_iou:.4f}"])
        lines += _table(rows)
    else:
        lines.append("Skin detection (pixel mode)")
        lines.append("")
        lines += _table(
            [
                ["Images", "Pixels", "Detection Rate"],
                [str(report.total_images), str(report.total_pixels), f"{report.rate:.2f}%"],
            ]
        )
        lines.append("")
        rows = [["Image", "Accuracy", "Precision", "Recall"]]
        for r in report.per_image:
            if r.error:
                rows.append([r.path, "error", "-", "-"])
            else:
                rows.append(
                    [r.path, f"{100.0 * r.accuracy:.2f}%",
                     f"{r.precision:.4f}", f"{r.recall:.4f}"]
                )
        lines += _table(rows)
    return "\n".join(lines) + "\n"


def format_report_json(report: EvaluationReport | PixelEvaluationReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"
