"""
Train a skin model and classify an image
========================================

Fits per-channel Gaussian statistics on pure-skin patches, tunes the
decision threshold to the minimum training likelihood, and classifies a
synthetic scene. Outputs land in demos/output/.
"""

from pathlib import Path

import numpy as np

from skinprob import (
    classify_skin,
    fit_skin_model,
    generate_skin_patch,
    generate_synthetic_scene,
    pixel_likelihood,
    save_image,
    save_mask,
    save_model,
)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# Eight 32x32 patches of nothing but skin-toned pixels. In a real workflow
# these are crops from photographs of the skin you want to detect.
patches = [generate_skin_patch(seed) for seed in range(100, 108)]
model = fit_skin_model(patches)

print("channel statistics (mean / std):")
for name, stats in zip("RGB", model.stats):
    print(f"  {name}: {stats.mean:7.3f} / {stats.std:6.3f}")
print(f"threshold = {model.threshold:.3e}  (log {model.threshold_log:.3f})")
print(f"trained on {model.train_pixel_count} pixels")

save_model(model, out / "skin.model")

# Every training pixel scores at least the threshold, by construction.
worst = min(pixel_likelihood(px, model) for px in patches[0].reshape(-1, 3))
print(f"lowest likelihood inside patch 0: {worst:.3e} >= threshold: "
      f"{worst >= model.threshold}")

# Classify a scene containing a face drawn from the same skin distribution.
scene, _ = generate_synthetic_scene(seed=1)
mask = classify_skin(scene, model, equalize=False)
print(f"scene: {mask.sum()} of {mask.size} pixels classified as skin")

save_image(scene, out / "scene.ppm")
save_mask(mask, out / "scene_skin.pbm")
save_mask(mask, out / "scene_skin.ppm")  # white-on-black view
print(f"wrote {out / 'scene.ppm'}, {out / 'scene_skin.pbm'}")

# The alternative kernel drops the normalization factor and divides the
# squared distance by std instead of variance; its likelihood at the
# channel means is exactly 1.
alt = fit_skin_model(patches, kernel="unnormalized")
center = tuple(int(round(s.mean)) for s in alt.stats)
print(f"unnormalized kernel at the mean pixel {center}: "
      f"{pixel_likelihood(center, alt):.6f}")
