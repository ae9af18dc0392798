import numpy as np
import pytest

from skinprob.baselines import (
    BaselineConfig,
    classify_hsv,
    classify_rg,
    classify_ycbcr,
    rg_chromaticity,
    rgb_to_hsv,
    rgb_to_ycbcr,
    train_rg_histogram,
)
from skinprob.skin_model import EmptyTrainingSetError

import naive_impls
from conftest import random_image


def one_pixel(r, g, b):
    return np.array([[[r, g, b]]], dtype=np.uint8)


class TestYCbCrConversion:
    def test_white_anchor(self):
        y, cb, cr = rgb_to_ycbcr(one_pixel(255, 255, 255))[0, 0]
        assert (y, cb, cr) == (235, 128, 128)

    def test_black_anchor(self):
        y, cb, cr = rgb_to_ycbcr(one_pixel(0, 0, 0))[0, 0]
        assert (y, cb, cr) == (16, 128, 128)

    def test_gray_ramp_has_neutral_chroma(self):
        ramp = np.arange(256, dtype=np.uint8).reshape(1, 256, 1).repeat(3, axis=2)
        out = rgb_to_ycbcr(ramp)
        assert (out[..., 1] == 128).all()
        assert (out[..., 2] == 128).all()
        assert (np.diff(out[0, :, 0]) >= 0).all()

    def test_range_over_rgb_lattice(self):
        # 32^3 lattice spanning the full cube, extremes included
        axis = np.linspace(0, 255, 32).round().astype(np.uint8)
        r, g, b = np.meshgrid(axis, axis, axis, indexing="ij")
        cube = np.stack([r, g, b], axis=-1).reshape(-1, 3)
        out = rgb_to_ycbcr(cube)
        assert out[..., 0].min() >= 16 and out[..., 0].max() <= 235
        assert out[..., 1].min() >= 16 and out[..., 1].max() <= 240
        assert out[..., 2].min() >= 16 and out[..., 2].max() <= 240
        # saturated primaries reach the ends of the chroma excursion
        assert rgb_to_ycbcr(one_pixel(0, 0, 255))[0, 0, 1] == 240
        assert rgb_to_ycbcr(one_pixel(255, 0, 0))[0, 0, 2] == 240

    def test_matches_scalar_oracle(self):
        rng = np.random.default_rng(71)
        img = random_image(rng, 16, 16)
        out = rgb_to_ycbcr(img)
        for y in range(16):
            for x in range(16):
                assert tuple(out[y, x]) == naive_impls.ycbcr(*(int(v) for v in img[y, x]))


class TestHsvConversion:
    @pytest.mark.parametrize(
        "rgb,expected",
        [
            ((255, 0, 0), (0.0, 1.0, 1.0)),
            ((0, 255, 0), (120.0, 1.0, 1.0)),
            ((0, 0, 255), (240.0, 1.0, 1.0)),
        ],
    )
    def test_primary_anchors(self, rgb, expected):
        h, s, v = (a[0, 0] for a in rgb_to_hsv(one_pixel(*rgb)))
        assert (h, s, v) == expected

    def test_gray_is_achromatic(self):
        h, s, v = (a[0, 0] for a in rgb_to_hsv(one_pixel(128, 128, 128)))
        assert s == 0.0
        assert h == 0.0
        assert v == pytest.approx(128 / 255)

    def test_black_is_achromatic(self):
        h, s, v = (a[0, 0] for a in rgb_to_hsv(one_pixel(0, 0, 0)))
        assert (h, s, v) == (0.0, 0.0, 0.0)

    def test_hue_stays_in_range(self):
        rng = np.random.default_rng(72)
        img = random_image(rng, 32, 32)
        h, s, v = rgb_to_hsv(img)
        assert (h >= 0.0).all() and (h < 360.0).all()
        assert (s >= 0.0).all() and (s <= 1.0).all()
        assert (v >= 0.0).all() and (v <= 1.0).all()

    def test_matches_scalar_oracle(self):
        rng = np.random.default_rng(73)
        img = random_image(rng, 16, 16)
        h, s, v = rgb_to_hsv(img)
        for yy in range(16):
            for xx in range(16):
                expected = naive_impls.hsv(*(int(c) for c in img[yy, xx]))
                assert (h[yy, xx], s[yy, xx], v[yy, xx]) == expected


class TestYCbCrClassifier:
    def test_inclusive_lower_corner(self):
        cfg = BaselineConfig()
        # search the lattice for a pixel mapping exactly to (Cb1, Cr1)
        rng = np.random.default_rng(74)
        img = random_image(rng, 64, 64)
        ycbcr = rgb_to_ycbcr(img)
        mask = classify_ycbcr(img, cfg)
        on_edge = (ycbcr[..., 1] == cfg.cb_range[0]) & (ycbcr[..., 2] >= cfg.cr_range[0]) & (
            ycbcr[..., 2] <= cfg.cr_range[1]
        )
        if on_edge.any():
            assert mask[on_edge].all()
        # direct synthetic check: a config box placed exactly on one pixel's values
        y0, cb0, cr0 = (int(v) for v in ycbcr[0, 0])
        tight = BaselineConfig(cb_range=(cb0, cb0), cr_range=(cr0, cr0))
        assert classify_ycbcr(img, tight)[0, 0] == 1

    def test_out_of_range_cb_rejects_regardless_of_cr(self):
        cfg = BaselineConfig(cb_range=(77, 127), cr_range=(16, 240))
        blue = one_pixel(0, 0, 255)  # Cb = 240, far above the box
        assert classify_ycbcr(blue, cfg)[0, 0] == 0

    def test_matches_per_pixel_oracle(self):
        cfg = BaselineConfig()
        rng = np.random.default_rng(75)
        for _ in range(3):
            img = random_image(rng, 64, 64)
            assert np.array_equal(classify_ycbcr(img, cfg), naive_impls.ycbcr_mask(img, cfg))


class TestHsvClassifier:
    def test_achromatic_pixel_is_never_skin(self):
        cfg = BaselineConfig(h_range=(0.0, 359.0), s_range=(0.0, 1.0))
        assert classify_hsv(one_pixel(77, 77, 77), cfg)[0, 0] == 0

    def test_wrapping_hue_interval(self):
        cfg = BaselineConfig(h_range=(350.0, 10.0), s_range=(0.0, 1.0))
        assert classify_hsv(one_pixel(255, 0, 0), cfg)[0, 0] == 1  # H = 0
        assert classify_hsv(one_pixel(255, 30, 0), cfg)[0, 0] == 1  # H ~ 7
        assert classify_hsv(one_pixel(0, 255, 0), cfg)[0, 0] == 0  # H = 120

    def test_matches_per_pixel_oracle(self):
        rng = np.random.default_rng(76)
        for cfg in (BaselineConfig(), BaselineConfig(h_range=(350.0, 10.0))):
            img = random_image(rng, 64, 64)
            assert np.array_equal(classify_hsv(img, cfg), naive_impls.hsv_mask(img, cfg))


class TestRgClassifier:
    def test_gray_pixel_chromaticity(self):
        r, g = rg_chromaticity(np.array([9, 9, 9], dtype=np.float64))
        assert (r, g) == (1.0 / 3.0, 1.0 / 3.0)

    def test_pure_red_chromaticity(self):
        r, g = rg_chromaticity(np.array([255, 0, 0], dtype=np.float64))
        assert (r, g) == (1.0, 0.0)

    def test_zero_sum_pixel_maps_to_center(self):
        r, g = rg_chromaticity(np.array([0, 0, 0], dtype=np.float64))
        assert (r, g) == (1.0 / 3.0, 1.0 / 3.0)

    def test_components_sum_to_one(self):
        rng = np.random.default_rng(77)
        img = random_image(rng, 8, 8)
        r, g = rg_chromaticity(img)
        b = img[..., 2] / img.sum(axis=2, dtype=np.float64).clip(min=1)
        nonzero = img.sum(axis=2) > 0
        assert np.allclose((r + g + b)[nonzero], 1.0, atol=1e-12)

    def test_training_peak_is_one(self):
        patch = one_pixel(255, 0, 0).repeat(4, axis=0)
        hist = train_rg_histogram([patch], bins=16)
        assert hist.max() == 1.0

    def test_self_classification_of_training_patch(self):
        patch = one_pixel(255, 0, 0).repeat(4, axis=0).repeat(4, axis=1)
        hist = train_rg_histogram([patch], bins=32)
        assert classify_rg(patch, hist, threshold=0.05).all()

    def test_empty_training_set(self):
        with pytest.raises(EmptyTrainingSetError):
            train_rg_histogram([], bins=8)

    def test_matches_per_pixel_oracle(self):
        rng = np.random.default_rng(78)
        patches = [random_image(rng, 8, 8) for _ in range(2)]
        hist = train_rg_histogram(patches, bins=32)
        img = random_image(rng, 64, 64)
        assert np.array_equal(
            classify_rg(img, hist, threshold=0.05),
            naive_impls.rg_mask(img, hist, 0.05),
        )


class TestBaselineConfig:
    def test_invalid_ranges_rejected(self):
        with pytest.raises(ValueError):
            BaselineConfig(cb_range=(127, 77))
        with pytest.raises(ValueError):
            BaselineConfig(cb_range=(0, 77))
        with pytest.raises(ValueError):
            BaselineConfig(s_range=(0.7, 0.2))
        with pytest.raises(ValueError):
            BaselineConfig(h_range=(0.0, 360.0))
        with pytest.raises(ValueError):
            BaselineConfig(rg_bins=1)

    def test_wrapping_hue_config_is_legal(self):
        cfg = BaselineConfig(h_range=(350.0, 10.0))
        assert cfg.h_range == (350.0, 10.0)
