"""Command-line interface.

Subcommands: train, detect-skin, detect-face, baseline, evaluate, synth.
Standard output carries only the machine-readable result; diagnostics go
to standard error. Exit codes: 0 success, 1 usage or parameter error,
2 I/O or file-format error. Outputs depend only on inputs and flags, so
repeated identical invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import baselines, evaluation, pipeline, synthetic
from .face_geometry import format_box_line
from .imaging import FormatError, load_image, save_image, save_mask
from .skin_model import (
    KERNELS,
    EmptyTrainingSetError,
    fit_skin_model,
    load_model,
    model_to_dict,
    save_model,
)

__all__ = ["main", "run_cli"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this CLI reserves 2 for I/O
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="skinprob", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", help="key=value config file")
        p.add_argument("--equalize", dest="equalize", action="store_true", default=None,
                       help="histogram-equalize test images (default on)")
        p.add_argument("--no-equalize", dest="equalize", action="store_false", default=None)
        p.add_argument("--kernel", choices=KERNELS, default=None)
        p.add_argument("--se-size", type=int, default=None, help="structuring element side")
        p.add_argument("--dark-threshold", type=int, default=None)
        p.add_argument("--min-block-area", type=float, default=None,
                       help="minimum block area as a fraction of image area")
        p.add_argument("--eye-level-frac", type=float, default=None)
        p.add_argument("--side-tolerance", type=float, default=None)
        p.add_argument("--iou-success", type=float, default=None)
        p.add_argument("--axis-mode", choices=("ydown", "yup"), default=None)
        p.add_argument("--ratio-mode", choices=("midpoint", "per-eye"), default=None)

    p = sub.add_parser("train", help="fit a skin model from pure-skin patches")
    p.add_argument("patches", nargs="+", help="training patch images (every pixel skin)")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    p.add_argument("--kernel", choices=KERNELS, default="gaussian")

    p = sub.add_parser("detect-skin", help="classify skin pixels of an image")
    p.add_argument("image")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-o", "--output", required=True, help="mask file (.pbm packed, else P6)")
    add_config_flags(p)

    p = sub.add_parser("detect-face", help="locate a face and emit its box")
    p.add_argument("image")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-o", "--output", required=True, help="box lines file")
    p.add_argument("--overlay", help="write a copy of the image with the box drawn")
    add_config_flags(p)

    p = sub.add_parser("baseline", help="classify with a classical color-space rule")
    p.add_argument("image")
    p.add_argument("--space", choices=("rg", "ycbcr", "hsv"), required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--train", nargs="+", default=None,
                   help="skin patches for the rg histogram (rg space only)")
    add_config_flags(p)

    p = sub.add_parser("evaluate", help="run the detection-rate harness on a manifest")
    p.add_argument("manifest")
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-o", "--output", required=True,
                   help="text report path; JSON is written alongside as <path>.json")
    p.add_argument("--mode", choices=("box", "pixel"), default="box")
    add_config_flags(p)

    p = sub.add_parser("synth", help="generate a deterministic synthetic scene")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output-dir", required=True)
    p.add_argument("--kind", choices=("scene", "faceless", "patch"), default="scene")
    p.add_argument("--width", type=int, default=None)
    p.add_argument("--height", type=int, default=None)
    p.add_argument("--ratio", type=float, default=None)

    return parser


def _load_pipeline_config(args) -> pipeline.PipelineConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(pipeline.load_config_file(args.config))
    flag_map = {
        "equalize": "equalize",
        "kernel": "kernel",
        "se_size": "se_size",
        "dark_threshold": "dark_threshold",
        "min_block_area": "min_block_area_frac",
        "eye_level_frac": "eye_level_frac",
        "side_tolerance": "side_tolerance",
        "iou_success": "iou_success",
        "axis_mode": "axis_mode",
        "ratio_mode": "ratio_mode",
    }
    for attr, key in flag_map.items():
        value = getattr(args, attr, None)
        if value is not None:
            values[key] = value
    return pipeline.config_from_mapping(values)


def _cmd_train(args) -> int:
    patches = [load_image(p) for p in args.patches]
    model = fit_skin_model(patches, kernel=args.kernel)
    save_model(model, args.output)
    print(json.dumps(model_to_dict(model)))
    return 0


def _cmd_detect_skin(args) -> int:
    cfg = _load_pipeline_config(args)
    model = load_model(args.model)
    img = load_image(args.image)
    mask = pipeline.detect_skin(img, model, cfg)
    save_mask(mask, args.output)
    print(json.dumps({
        "image": args.image,
        "skin_pixels": int(mask.sum()),
        "total_pixels": int(mask.size),
    }))
    return 0


def _cmd_detect_face(args) -> int:
    cfg = _load_pipeline_config(args)
    model = load_model(args.model)
    img = load_image(args.image)
    boxes = pipeline.detect_faces(img, model, cfg)
    lines = [format_box_line(b) for b in boxes]
    with open(args.output, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")
    if args.overlay:
        overlay = img
        for box in boxes:
            overlay = pipeline.draw_box(overlay, box)
        save_image(overlay, args.overlay)
    for line in lines:
        print(line)
    return 0


def _cmd_baseline(args) -> int:
    cfg = _load_pipeline_config(args)
    img = load_image(args.image)
    if args.space == "ycbcr":
        mask = baselines.classify_ycbcr(img, cfg.baseline)
    elif args.space == "hsv":
        mask = baselines.classify_hsv(img, cfg.baseline)
    else:
        if not args.train:
            raise _UsageError("--space rg requires --train patches")
        patches = [load_image(p) for p in args.train]
        hist = baselines.train_rg_histogram(patches, bins=cfg.baseline.rg_bins)
        mask = baselines.classify_rg(img, hist, threshold=cfg.baseline.rg_hist_threshold)
    save_mask(mask, args.output)
    print(json.dumps({
        "image": args.image,
        "space": args.space,
        "skin_pixels": int(mask.sum()),
        "total_pixels": int(mask.size),
    }))
    return 0


def _cmd_evaluate(args) -> int:
    cfg = _load_pipeline_config(args)
    model = load_model(args.model)
    entries = evaluation.load_manifest(args.manifest, mode=args.mode)
    if args.mode == "box":
        report = evaluation.evaluate(entries, model, cfg)
    else:
        report = evaluation.evaluate_pixels(entries, model, cfg)
    text = evaluation.format_report_text(report)
    payload = evaluation.format_report_json(report)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(text)
    with open(str(args.output) + ".json", "w", encoding="utf-8") as fh:
        fh.write(payload)
    sys.stdout.write(payload)
    return 0


def _cmd_synth(args) -> int:
    overrides = {}
    if args.width is not None:
        overrides["width"] = args.width
    if args.height is not None:
        overrides["height"] = args.height
    if args.ratio is not None:
        overrides["ratio"] = args.ratio
    if args.kind == "faceless":
        overrides["face"] = False
    params = synthetic.SceneParams(**overrides) if overrides else synthetic.SceneParams()

    os.makedirs(args.output_dir, exist_ok=True)
    if args.kind == "patch":
        patch = synthetic.generate_skin_patch(args.seed, params)
        path = os.path.join(args.output_dir, f"patch_{args.seed:04d}.ppm")
        save_image(patch, path)
        print(path)
        return 0
    img, gt = synthetic.generate_synthetic_scene(args.seed, params)
    name = "scene" if args.kind == "scene" else "faceless"
    path = os.path.join(args.output_dir, f"{name}_{args.seed:04d}.ppm")
    save_image(img, path)
    if gt is not None:
        # a ready-to-append manifest line
        print(f"{path} {gt[0]!r} {gt[1]!r} {gt[2]!r} {gt[3]!r}")
    else:
        print(path)
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "detect-skin": _cmd_detect_skin,
    "detect-face": _cmd_detect_face,
    "baseline": _cmd_baseline,
    "evaluate": _cmd_evaluate,
    "synth": _cmd_synth,
}


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"skinprob: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, FormatError, evaluation.ManifestError) as exc:
        print(f"skinprob: error: {exc}", file=sys.stderr)
        return 2
    except (EmptyTrainingSetError, synthetic.InfeasibleParamsError, ValueError) as exc:
        print(f"skinprob: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
