import numpy as np
import pytest

from skinprob import fit_skin_model


def random_image(rng, width=64, height=64):
    return rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8)


def random_mask(rng, width=16, height=16, p=0.5):
    return (rng.random((height, width)) < p).astype(np.uint8)


@pytest.fixture(scope="session")
def skin_patches():
    rng = np.random.default_rng(42)
    return [
        np.clip(
            np.rint(rng.normal(loc=(200, 150, 120), scale=12.0, size=(16, 16, 3))),
            0,
            255,
        ).astype(np.uint8)
        for _ in range(4)
    ]


@pytest.fixture(scope="session")
def model(skin_patches):
    return fit_skin_model(skin_patches)


@pytest.fixture(scope="session")
def model_unnormalized(skin_patches):
    return fit_skin_model(skin_patches, kernel="unnormalized")
