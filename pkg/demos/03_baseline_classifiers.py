"""
Classical color-space baselines
===============================

Runs the three reference classifiers over the same scene: the YCbCr
chroma box, the HSV hue/saturation box, and the trainable normalized-rg
histogram, and compares them with the Gaussian model.
"""

from pathlib import Path

from skinprob import (
    BaselineConfig,
    classify_hsv,
    classify_rg,
    classify_skin,
    classify_ycbcr,
    fit_skin_model,
    generate_skin_patch,
    generate_synthetic_scene,
    rgb_to_hsv,
    rgb_to_ycbcr,
    save_mask,
    train_rg_histogram,
)

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

scene, _ = generate_synthetic_scene(seed=21)
patches = [generate_skin_patch(seed) for seed in range(100, 108)]

# the conversions underneath: studio-range YCbCr and hexcone HSV
sample = scene[60, 80]
y, cb, cr = rgb_to_ycbcr(sample.reshape(1, 1, 3))[0, 0]
h, s, v = (a[0, 0] for a in rgb_to_hsv(sample.reshape(1, 1, 3)))
print(f"pixel {tuple(int(c) for c in sample)} -> "
      f"YCbCr ({y}, {cb}, {cr}), HSV ({h:.1f} deg, {s:.2f}, {v:.2f})")

cfg = BaselineConfig()  # implementation defaults, tune per dataset
print(f"chroma box: Cb {cfg.cb_range}, Cr {cfg.cr_range}; "
      f"hue box: H {cfg.h_range}, S {cfg.s_range}")

masks = {
    "ycbcr": classify_ycbcr(scene, cfg),
    "hsv": classify_hsv(scene, cfg),
}

hist = train_rg_histogram(patches, bins=cfg.rg_bins)
masks["rg"] = classify_rg(scene, hist, threshold=cfg.rg_hist_threshold)

model = fit_skin_model(patches)
masks["gaussian"] = classify_skin(scene, model, equalize=False)

print(f"{'classifier':>10}  skin pixels (of {scene.shape[0] * scene.shape[1]})")
for name, mask in masks.items():
    print(f"{name:>10}  {int(mask.sum()):6d}")
    save_mask(mask, out / f"baseline_{name}.pbm")

overlap = (masks["gaussian"] & masks["ycbcr"]).sum()
print(f"gaussian/ycbcr agreement on skin: {overlap} pixels")
print(f"wrote masks to {out}")
