"""Image buffers, netpbm codecs, and histogram equalization.

Images are numpy arrays of shape (height, width, 3), dtype uint8, RGB
channel order. Binary masks are arrays of shape (height, width), dtype
uint8, with values in {0, 1}. Pixel coordinates are (x, y) with x along
columns and y along rows, y increasing downward.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "FormatError",
    "round_half_away",
    "validate_image",
    "validate_mask",
    "load_image",
    "save_image",
    "load_mask",
    "save_mask",
    "equalize_histogram",
]


class FormatError(ValueError):
    """Raised when a file does not conform to its declared format."""


def round_half_away(x):
    """Round to nearest integer, halves away from zero.

    Used everywhere a real value is quantized to an integer code so the
    rounding rule is uniform across the package.
    """
    x = np.asarray(x)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def validate_image(img: np.ndarray) -> np.ndarray:
    """Check that ``img`` is an (H, W, 3) uint8 RGB buffer and return it."""
    img = np.asarray(img)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {img.shape}")
    if img.dtype != np.uint8:
        raise ValueError(f"expected uint8 image, got {img.dtype}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image dimensions must be >= 1")
    return img


def validate_mask(mask: np.ndarray) -> np.ndarray:
    """Check that ``mask`` is an (H, W) array with values in {0, 1}."""
    mask = np.asarray(mask)
    if mask.ndim != 2:
        raise ValueError(f"expected (H, W) mask, got shape {mask.shape}")
    if not np.isin(mask, (0, 1)).all():
        raise ValueError("mask values must be 0 or 1")
    return mask.astype(np.uint8, copy=False)


# -- netpbm parsing -----------------------------------------------------------


def _read_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, honoring '#' comments.

    Returns the tokens and the offset of the first byte after the single
    whitespace byte that terminates the last token.
    """
    tokens: list[bytes] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        # skip whitespace and comment lines
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] not in (0x0A, 0x0D):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i] != ord("#"):
            i += 1
        if i == start:
            raise FormatError("truncated header")
        tokens.append(data[start:i])
        if len(tokens) == count:
            # exactly one whitespace byte separates the header from the payload
            if i >= n or not data[i : i + 1].isspace():
                raise FormatError("missing whitespace after header")
            i += 1
    return tokens, i


def _parse_dims(tokens: list[bytes]) -> tuple[int, ...]:
    try:
        values = tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise FormatError(f"non-numeric header field: {exc}") from exc
    if any(v < 1 for v in values[:2]):
        raise FormatError("dimensions must be >= 1")
    return values


def _load_ppm(data: bytes) -> np.ndarray:
    tokens, offset = _read_tokens(data, 3)
    width, height, maxval = _parse_dims(tokens)
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval} (must be 255)")
    payload = data[offset : offset + width * height * 3]
    if len(payload) != width * height * 3:
        raise FormatError(
            f"truncated pixel data: expected {width * height * 3} bytes, "
            f"got {len(payload)}"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3).copy()


def _load_pbm(data: bytes) -> np.ndarray:
    tokens, offset = _read_tokens(data, 2)
    width, height = _parse_dims(tokens)
    row_bytes = (width + 7) // 8
    payload = data[offset : offset + row_bytes * height]
    if len(payload) != row_bytes * height:
        raise FormatError("truncated bitmap data")
    rows = np.frombuffer(payload, dtype=np.uint8).reshape(height, row_bytes)
    bits = np.unpackbits(rows, axis=1)[:, :width]
    return bits.astype(np.uint8)


def load_image(path) -> np.ndarray:
    """Load an RGB image from a binary PPM (P6) file.

    PNG files are also accepted when Pillow is installed. Pixel values are
    returned exactly as stored; no color transformation is applied.
    """
    if str(path).lower().endswith(".png"):
        return _load_png(path)
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] != b"P6":
        raise FormatError(f"not a binary PPM (P6) file: {path!s}")
    return _load_ppm(data[2:])


def save_image(img: np.ndarray, path) -> None:
    """Write an RGB image as binary PPM (P6), or PNG by file extension."""
    img = validate_image(img)
    if str(path).lower().endswith(".png"):
        _save_png(img, path)
        return
    height, width = img.shape[:2]
    with open(path, "wb") as fh:
        fh.write(b"P6\n%d %d\n255\n" % (width, height))
        fh.write(img.tobytes())


def _load_png(path) -> np.ndarray:
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on extras
        raise FormatError("PNG support requires Pillow (pip install skinprob[png])") from exc
    with Image.open(path) as im:
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def _save_png(img: np.ndarray, path) -> None:
    try:
        from PIL import Image
    except ImportError as exc:  # pragma: no cover - depends on extras
        raise FormatError("PNG support requires Pillow (pip install skinprob[png])") from exc
    Image.fromarray(img, mode="RGB").save(path, format="PNG")


def save_mask(mask: np.ndarray, path) -> None:
    """Write a binary mask, format chosen by file extension.

    ``.pbm`` writes packed P4 (MSB-first bits, rows padded to a byte
    boundary, mask value 1 stored as bit 1). Any other extension writes a
    P6 image with 0 -> (0,0,0) and 1 -> (255,255,255).
    """
    mask = validate_mask(mask)
    if str(path).lower().endswith(".pbm"):
        height, width = mask.shape
        packed = np.packbits(mask, axis=1)
        with open(path, "wb") as fh:
            fh.write(b"P4\n%d %d\n" % (width, height))
            fh.write(packed.tobytes())
    else:
        rgb = (mask[:, :, None] * np.uint8(255)).repeat(3, axis=2)
        save_image(rgb, path)


def load_mask(path) -> np.ndarray:
    """Load a binary mask from P4, or from a strictly black/white P6."""
    with open(path, "rb") as fh:
        data = fh.read()
    magic = data[:2]
    if magic == b"P4":
        return _load_pbm(data[2:])
    if magic == b"P6":
        img = _load_ppm(data[2:])
        black = (img == 0).all(axis=2)
        white = (img == 255).all(axis=2)
        if not (black | white).all():
            raise FormatError("mask image contains values other than 0 and 255")
        return white.astype(np.uint8)
    raise FormatError(f"not a P4/P6 file: {path!s}")


# -- preprocessing ------------------------------------------------------------


def equalize_histogram(img: np.ndarray) -> np.ndarray:
    """Equalize each RGB channel independently.

    Each channel value v is remapped by

        h(v) = round((cdf(v) - cdf_min) / (N - cdf_min) * 255)

    where cdf is the channel's cumulative histogram, N the pixel count and
    cdf_min the smallest nonzero cdf value. The mapping is monotone
    non-decreasing and a constant channel maps to 0.
    """
    img = validate_image(img)
    n = img.shape[0] * img.shape[1]
    out = np.empty_like(img)
    for c in range(3):
        channel = img[:, :, c]
        cdf = np.cumsum(np.bincount(channel.ravel(), minlength=256))
        cdf_min = cdf[np.nonzero(cdf)[0][0]]
        if n == cdf_min:
            # single occupied level: cdf(v) = cdf_min everywhere it matters
            out[:, :, c] = 0
            continue
        lut = round_half_away((cdf - cdf_min) / (n - cdf_min) * 255.0)
        lut = np.clip(lut, 0, 255).astype(np.uint8)
        out[:, :, c] = lut[channel]
    return out
