"""
Locate a face step by step
==========================

Walks the full localization pipeline on one synthetic scene: skin mask,
morphological cleanup, dark feature blocks, triangle matching, and the
face box, then renders an overlay.
"""

from pathlib import Path

from skinprob import (
    PipelineConfig,
    classify_skin,
    connected_components,
    detect_faces,
    draw_box,
    extract_dark_blocks,
    face_box,
    fit_skin_model,
    generate_skin_patch,
    generate_synthetic_scene,
    match_frontal_triangle,
    morph_close,
    morph_open,
    save_image,
    save_mask,
)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

model = fit_skin_model([generate_skin_patch(seed) for seed in range(100, 108)])
scene, gt = generate_synthetic_scene(seed=11)
cfg = PipelineConfig(equalize=False)  # synthetic colors are already calibrated

# 1. per-pixel classification, then opening (specks) and closing (holes)
mask = classify_skin(scene, model, equalize=cfg.equalize)
cleaned = morph_close(morph_open(mask))
print(f"skin pixels: {mask.sum()} raw -> {cleaned.sum()} after open+close")
save_mask(cleaned, out / "face_skin_mask.pbm")

regions = connected_components(cleaned)
print(f"skin regions: {len(regions)}, largest area {regions[0].area}")

# 2. dark non-skin blocks inside the dominant skin region
blocks = extract_dark_blocks(scene, cleaned)
print(f"feature blocks: {len(blocks)}")
for b in blocks:
    print(f"  block {b.label}: area {b.area:3d}, centroid "
          f"({b.centroid[0]:6.2f}, {b.centroid[1]:6.2f})")

# 3. the eye-eye-mouth triangle: eye distance within 90-110% of the
#    midpoint-to-mouth distance
candidates = match_frontal_triangle(blocks)
best = candidates[0]
print(f"best triangle ratio: {best.frontal_ratio():.4f} "
      f"(deviation {best.score:.4f})")

# 4. the face box, one third of the eye distance beyond the triangle
box = face_box(best)
print("face box corners:", [f"({x:.1f}, {y:.1f})" for x, y in box.corners()])
print(f"ground-truth box: ({gt[0]:.1f}, {gt[1]:.1f}) - ({gt[2]:.1f}, {gt[3]:.1f})")

# ...or all four steps in one call
(same_box,) = detect_faces(scene, model, cfg)
assert same_box == box

save_image(draw_box(scene, box), out / "face_overlay.ppm")
print(f"wrote {out / 'face_overlay.ppm'}")
