"""Image file I/O mapped to float samples in [0, 1]."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

__all__ = ["read_image", "write_image", "IMAGE_SUFFIXES"]

IMAGE_SUFFIXES = (".png", ".ppm", ".pgm", ".pnm", ".tif", ".tiff", ".bmp")


def read_image(path) -> np.ndarray:
    """Load an image as float64, shape (H, W) for gray or (H, W, 3) for colour.

    8-bit data is divided by 255 and 16-bit data by 65535. Alpha channels
    are dropped and palette images expanded.
    """
    with Image.open(path) as im:
        if im.mode in ("I;16", "I;16B", "I;16L", "I"):
            data = np.asarray(im, dtype=np.float64)
            return data / 65535.0
        if im.mode in ("1", "L", "LA", "P") and _is_gray(im):
            return np.asarray(im.convert("L"), dtype=np.float64) / 255.0
        return np.asarray(im.convert("RGB"), dtype=np.float64) / 255.0


def _is_gray(im: Image.Image) -> bool:
    if im.mode != "P":
        return True
    rgb = np.asarray(im.convert("RGB"))
    return bool(np.all(rgb[..., 0] == rgb[..., 1]) and np.all(rgb[..., 1] == rgb[..., 2]))


def write_image(path, image) -> Path:
    """Write ``image`` as 8 bit, mapping x to round(255 x) after clipping."""
    path = Path(path)
    img = np.asarray(image, dtype=np.float64)
    if img.ndim == 3 and img.shape[2] == 1:
        img = img[..., 0]
    data = np.round(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    Image.fromarray(data).save(path)
    return path
