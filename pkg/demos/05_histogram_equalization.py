"""
Histogram equalization preprocessing
====================================

Shows the per-channel cumulative-distribution remapping used to flatten
test-image histograms before classification: a dim, low-contrast image
spreads across the full range, the mapping is monotone, and applying it
twice changes almost nothing.
"""

from pathlib import Path

import numpy as np

from skinprob import equalize_histogram, save_image

out = Path(__file__).parent / "output"
out.mkdir(exist_ok=True)

# a dim gradient occupying only a quarter of the dynamic range
rng = np.random.default_rng(0)
ramp = np.linspace(40, 100, 160)
img = np.clip(ramp[None, :, None] + rng.normal(0, 4, (120, 160, 3)), 0, 255)
img = img.astype(np.uint8)

eq = equalize_histogram(img)
print(f"input range  : {img.min()} .. {img.max()}")
print(f"output range : {eq.min()} .. {eq.max()}")

save_image(img, out / "equalize_before.ppm")
save_image(eq, out / "equalize_after.ppm")

# monotone: sorting pixels by input value sorts them by output value
channel_in = img[:, :, 0].ravel()
channel_out = eq[:, :, 0].ravel()
order = np.argsort(channel_in, kind="stable")
assert (np.diff(channel_out[order].astype(int)) >= 0).all()
print("mapping is monotone non-decreasing")

# pixel counts are conserved: the same number of pixels, redistributed
assert np.bincount(channel_out, minlength=256).sum() == channel_in.size
print("pixel count conserved per channel")

twice = equalize_histogram(eq)
delta = np.abs(twice.astype(int) - eq.astype(int)).max()
print(f"second pass changes pixels by at most {delta} level(s)")

# degenerate input: a constant image maps to black
flat = equalize_histogram(np.full((8, 8, 3), 200, dtype=np.uint8))
print(f"constant image maps to {int(flat.max())}")
print(f"wrote {out / 'equalize_before.ppm'} and {out / 'equalize_after.ppm'}")
