import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from skinprob.segmentation import (
    NoSkinRegionError,
    classify_skin,
    connected_components,
    dilate,
    erode,
    extract_dark_blocks,
    morph_close,
    morph_open,
    square_se,
)
from skinprob.skin_model import fit_skin_model

import naive_impls
from conftest import random_image, random_mask

masks_16 = arrays(np.uint8, (16, 16), elements=st.integers(0, 1))


class TestClassifySkin:
    def test_training_patch_is_all_skin(self, skin_patches, model):
        for patch in skin_patches:
            assert classify_skin(patch, model, equalize=False).all()

    def test_matches_per_pixel_oracle(self, model):
        rng = np.random.default_rng(21)
        for _ in range(5):
            img = random_image(rng, 64, 64)
            assert np.array_equal(classify_skin(img, model), naive_impls.skin_mask(img, model))

    def test_threshold_boundary_is_inclusive(self, skin_patches, model):
        # the pixel attaining the tuned minimum sits exactly on the boundary
        pixels = np.concatenate([p.reshape(-1, 3) for p in skin_patches])
        lls = [naive_impls.pixel_loglik(*map(float, p), model) for p in pixels]
        argmin_pixel = pixels[int(np.argmin(lls))]
        img = argmin_pixel.reshape(1, 1, 3)
        assert classify_skin(img, model)[0, 0] == 1

    def test_row_permutation_locality(self, model):
        rng = np.random.default_rng(22)
        img = random_image(rng, 16, 16)
        perm = rng.permutation(16)
        assert np.array_equal(
            classify_skin(img[perm], model), classify_skin(img, model)[perm]
        )

    def test_dimensions_preserved(self, model):
        rng = np.random.default_rng(23)
        img = random_image(rng, 5, 9)
        assert classify_skin(img, model).shape == (9, 5)

    def test_equalize_flag_routes_through_equalization(self, model):
        from skinprob.imaging import equalize_histogram

        rng = np.random.default_rng(24)
        img = random_image(rng, 16, 16)
        expected = classify_skin(equalize_histogram(img), model, equalize=False)
        assert np.array_equal(classify_skin(img, model, equalize=True), expected)


class TestMorphology:
    def test_isolated_pixel_is_opened_away(self):
        mask = np.zeros((5, 5), dtype=np.uint8)
        mask[2, 2] = 1
        assert not morph_open(mask).any()

    def test_closing_fills_center_hole(self):
        mask = np.ones((3, 3), dtype=np.uint8)
        mask[1, 1] = 0
        assert morph_close(mask).all()

    def test_matches_set_theoretic_oracle(self):
        rng = np.random.default_rng(31)
        se = square_se(3)
        for _ in range(20):
            mask = random_mask(rng)
            assert np.array_equal(erode(mask, se), naive_impls.erode(mask, se))
            assert np.array_equal(dilate(mask, se), naive_impls.dilate(mask, se))
            assert np.array_equal(morph_open(mask, se), naive_impls.morph_open(mask, se))
            assert np.array_equal(morph_close(mask, se), naive_impls.morph_close(mask, se))

    def test_five_by_five_se_matches_oracle(self):
        rng = np.random.default_rng(32)
        se = square_se(5)
        mask = random_mask(rng, 12, 12, p=0.7)
        assert np.array_equal(morph_open(mask, se), naive_impls.morph_open(mask, se))
        assert np.array_equal(morph_close(mask, se), naive_impls.morph_close(mask, se))

    def test_unit_se_is_identity(self):
        rng = np.random.default_rng(33)
        mask = random_mask(rng)
        se = square_se(1)
        assert np.array_equal(morph_open(mask, se), mask)
        assert np.array_equal(morph_close(mask, se), mask)

    @given(masks_16)
    @settings(max_examples=60, deadline=None)
    def test_open_close_sandwich(self, mask):
        opened, closed = morph_open(mask), morph_close(mask)
        assert (opened <= mask).all()
        assert (mask <= closed).all()

    @given(masks_16)
    @settings(max_examples=60, deadline=None)
    def test_idempotence(self, mask):
        opened, closed = morph_open(mask), morph_close(mask)
        assert np.array_equal(morph_open(opened), opened)
        assert np.array_equal(morph_close(closed), closed)

    @given(masks_16)
    @settings(max_examples=60, deadline=None)
    def test_open_close_duality(self, mask):
        assert np.array_equal(morph_open(1 - mask), 1 - morph_close(mask))

    def test_even_se_rejected(self):
        with pytest.raises(ValueError):
            square_se(4)


class TestConnectedComponents:
    def test_empty_mask_has_no_blocks(self):
        assert connected_components(np.zeros((4, 4), dtype=np.uint8)) == []

    def test_two_by_two_block(self):
        mask = np.zeros((4, 4), dtype=np.uint8)
        mask[0:2, 0:2] = 1
        (block,) = connected_components(mask)
        assert block.area == 4
        assert block.centroid == (0.5, 0.5)
        assert block.bbox == (0, 0, 1, 1)

    def test_diagonal_touch_depends_on_connectivity(self):
        mask = np.zeros((3, 3), dtype=np.uint8)
        mask[0, 0] = mask[1, 1] = 1
        assert len(connected_components(mask, connectivity=4)) == 2
        assert len(connected_components(mask, connectivity=8)) == 1

    def test_blocks_partition_the_mask(self):
        rng = np.random.default_rng(41)
        for _ in range(10):
            mask = random_mask(rng, 24, 24, p=0.4)
            blocks = connected_components(mask)
            assert sum(b.area for b in blocks) == int(mask.sum())
            assert len({b.label for b in blocks}) == len(blocks)

    def test_sorted_by_area_then_topleft(self):
        mask = np.zeros((8, 8), dtype=np.uint8)
        mask[0, 0:3] = 1  # area 3
        mask[4, 4] = 1  # area 1
        mask[6, 0:3] = 1  # area 3
        blocks = connected_components(mask)
        assert [b.area for b in blocks] == [3, 3, 1]
        assert blocks[0].bbox[1] < blocks[1].bbox[1]

    def test_centroid_inside_bbox(self):
        rng = np.random.default_rng(42)
        mask = random_mask(rng, 20, 20, p=0.3)
        for b in connected_components(mask):
            x0, y0, x1, y1 = b.bbox
            assert x0 <= b.centroid[0] <= x1
            assert y0 <= b.centroid[1] <= y1
            assert b.area <= (x1 - x0 + 1) * (y1 - y0 + 1)

    def test_bad_connectivity_rejected(self):
        with pytest.raises(ValueError):
            connected_components(np.zeros((2, 2), dtype=np.uint8), connectivity=6)


def scene_with_discs(disc_centers, disc_radius=3):
    """Skin-colored rectangle with dark discs; returns (img, skin_mask)."""
    img = np.full((60, 80, 3), (40, 40, 200), dtype=np.uint8)  # non-skin bg
    img[10:50, 10:70] = (200, 150, 120)
    skin = np.zeros((60, 80), dtype=np.uint8)
    skin[10:50, 10:70] = 1
    ys, xs = np.mgrid[0:60, 0:80]
    for cx, cy in disc_centers:
        disc = (xs - cx) ** 2 + (ys - cy) ** 2 <= disc_radius**2
        img[disc] = (15, 15, 15)
        skin[disc] = 0
    return img, skin


class TestExtractDarkBlocks:
    def test_three_discs_yield_three_blocks(self):
        img, skin = scene_with_discs([(25, 20), (45, 20), (35, 38)])
        blocks = extract_dark_blocks(img, skin)
        assert len(blocks) == 3

    def test_no_dark_pixels_yield_empty(self):
        img, skin = scene_with_discs([])
        assert extract_dark_blocks(img, skin) == []

    def test_dark_blob_outside_skin_bbox_is_excluded(self):
        img, skin = scene_with_discs([(25, 20), (45, 20), (35, 38)])
        img[52:58, 72:78] = (5, 5, 5)  # outside the 10..49 x 10..69 skin bbox
        assert len(extract_dark_blocks(img, skin)) == 3

    def test_empty_skin_mask_is_error(self):
        img, _ = scene_with_discs([])
        with pytest.raises(NoSkinRegionError):
            extract_dark_blocks(img, np.zeros(img.shape[:2], dtype=np.uint8))

    def test_dark_threshold_is_exclusive_upper_bound(self):
        img, skin = scene_with_discs([(25, 20), (45, 20), (35, 38)])
        # disc intensity is exactly 15; threshold 15 excludes, 16 keeps
        assert extract_dark_blocks(img, skin, dark_threshold=15) == []
        assert len(extract_dark_blocks(img, skin, dark_threshold=16)) == 3

    def test_small_blocks_are_dropped(self):
        img, skin = scene_with_discs([(25, 20), (45, 20), (35, 38)], disc_radius=1)
        # radius-1 discs survive a 3x3 opening only as tiny fragments
        blocks = extract_dark_blocks(img, skin, min_area_frac=0.01)
        assert blocks == []

    def test_classifier_scene_end_to_end(self):
        # discs found on a mask produced by the actual classifier
        rng = np.random.default_rng(55)
        img = np.clip(
            np.rint(rng.normal((200, 150, 120), 8.0, size=(60, 80, 3))), 0, 255
        ).astype(np.uint8)
        img[:, :5] = (10, 220, 10)  # non-skin stripe
        ys, xs = np.mgrid[0:60, 0:80]
        for cx, cy in [(30, 20), (50, 20), (40, 40)]:
            disc = (xs - cx) ** 2 + (ys - cy) ** 2 <= 9
            img[disc] = (20, 18, 15)
        patches = [
            np.clip(
                np.rint(rng.normal((200, 150, 120), 8.0, size=(16, 16, 3))), 0, 255
            ).astype(np.uint8)
            for _ in range(6)
        ]
        local_model = fit_skin_model(patches)
        mask = classify_skin(img, local_model)
        blocks = extract_dark_blocks(img, mask)
        assert len(blocks) == 3
