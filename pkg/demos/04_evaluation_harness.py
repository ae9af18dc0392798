"""
Benchmark the pipeline on a synthetic dataset
=============================================

Generates a small dataset with known ground truth, writes a manifest,
runs the box-mode evaluation harness, and prints the detection-rate
report. Pixel-mode evaluation against ground-truth masks is shown at
the end.
"""

from pathlib import Path

from skinprob import (
    PipelineConfig,
    detect_skin,
    evaluate,
    evaluate_pixels,
    fit_skin_model,
    generate_skin_patch,
    generate_synthetic_scene,
    load_manifest,
    save_image,
    save_mask,
)
from skinprob.evaluation import format_report_json, format_report_text

out = Path(__file__).parent / "output" / "dataset"
out.mkdir(parents=True, exist_ok=True)

model = fit_skin_model([generate_skin_patch(seed) for seed in range(100, 108)])
cfg = PipelineConfig(equalize=False)

# twenty scenes with ground-truth boxes in the manifest
lines = []
for seed in range(1, 21):
    scene, gt = generate_synthetic_scene(seed)
    name = f"scene_{seed:03d}.ppm"
    save_image(scene, out / name)
    lines.append(f"{name} {gt[0]!r} {gt[1]!r} {gt[2]!r} {gt[3]!r}")
manifest = out / "manifest.txt"
manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")

report = evaluate(load_manifest(manifest), model, cfg)
print(format_report_text(report))
(out / "report.json").write_text(format_report_json(report), encoding="utf-8")
print(f"wrote {out / 'report.json'}")

# pixel mode: score the classifier against ground-truth masks
pixel_lines = []
for seed in range(1, 6):
    scene, _ = generate_synthetic_scene(seed)
    truth = detect_skin(scene, model, cfg)  # stand-in for annotated masks
    save_image(scene, out / f"px_{seed}.ppm")
    save_mask(truth, out / f"px_{seed}_mask.pbm")
    pixel_lines.append(f"px_{seed}.ppm px_{seed}_mask.pbm")
pixel_manifest = out / "pixel_manifest.txt"
pixel_manifest.write_text("\n".join(pixel_lines) + "\n", encoding="utf-8")

pixel_report = evaluate_pixels(load_manifest(pixel_manifest, mode="pixel"), model, cfg)
print(format_report_text(pixel_report))
