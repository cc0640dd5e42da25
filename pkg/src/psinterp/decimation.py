"""Low-resolution input generators and Catmull-Rom bicubic resampling."""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy.ndimage import correlate1d

from .wavelet import dwt2, make_filter

__all__ = [
    "DecimationScheme",
    "decimate",
    "bicubic_resize",
    "resize_to",
    "gaussian_blur",
]

CUBIC_A = -0.5
BLUR_TAPS = 7
BLUR_SIGMA = 1.0


class DecimationScheme(enum.Enum):
    BICUBIC = "bicubic"
    DAUBECHIES = "daubechies"
    DMEYER = "dmeyer"
    GAUSSIAN = "gaussian"
    SUBSAMPLE = "subsample"

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, text: str) -> "DecimationScheme":
        key = text.strip().lower().replace("-", "").replace("_", "")
        for scheme in cls:
            if key in (scheme.value, scheme.name.lower(), _LABELS[scheme].lower().replace("-", "")):
                return scheme
        raise ValueError(f"unknown decimation scheme {text!r}")


_LABELS = {
    DecimationScheme.BICUBIC: "Bicubic",
    DecimationScheme.DAUBECHIES: "Daubechies",
    DecimationScheme.DMEYER: "D-Meyer",
    DecimationScheme.GAUSSIAN: "Gaussian",
    DecimationScheme.SUBSAMPLE: "Sub-sampling",
}


def _cubic(x: np.ndarray, a: float = CUBIC_A) -> np.ndarray:
    x = np.abs(x)
    near = (a + 2) * x**3 - (a + 3) * x**2 + 1
    far = a * x**3 - 5 * a * x**2 + 8 * a * x - 4 * a
    return np.where(x <= 1, near, np.where(x < 2, far, 0.0))


def _reflect(idx: np.ndarray, n: int) -> np.ndarray:
    # half-sample symmetric extension: ... b a | a b c ... c | c b ...
    period = 2 * n
    idx = np.mod(idx, period)
    return np.where(idx >= n, period - 1 - idx, idx)


def _resample_matrix(n_in: int, n_out: int) -> np.ndarray:
    src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    base = np.floor(src).astype(int)
    mat = np.zeros((n_out, n_in))
    rows = np.arange(n_out)
    for offset in (-1, 0, 1, 2):
        tap = base + offset
        np.add.at(mat, (rows, _reflect(tap, n_in)), _cubic(src - tap))
    return mat


def resize_to(image, shape: tuple[int, int]) -> np.ndarray:
    """Separable Catmull-Rom resampling of the first two axes to ``shape``."""
    img = np.asarray(image, dtype=float)
    rows, cols = shape
    if rows < 1 or cols < 1:
        raise ValueError(f"degenerate output size {shape}")
    wy = _resample_matrix(img.shape[0], rows)
    wx = _resample_matrix(img.shape[1], cols)
    out = np.tensordot(wy, img, axes=(1, 0))
    out = np.tensordot(wx, out, axes=(1, 1))
    return np.moveaxis(out, 0, 1)


def bicubic_resize(image, scale: float) -> np.ndarray:
    """Bicubic (a = -0.5) resize to ``round(scale * dims)`` with symmetric edges."""
    if not scale > 0:
        raise ValueError("scale must be positive")
    img = np.asarray(image, dtype=float)
    shape = (round(scale * img.shape[0]), round(scale * img.shape[1]))
    return resize_to(img, shape)


def gaussian_blur(image) -> np.ndarray:
    """7x7 Gaussian (sigma 1) with unit gain and symmetric boundaries."""
    half = BLUR_TAPS // 2
    x = np.arange(-half, half + 1, dtype=float)
    g = np.exp(-0.5 * (x / BLUR_SIGMA) ** 2)
    g /= g.sum()
    img = np.asarray(image, dtype=float)
    return correlate1d(correlate1d(img, g, axis=0, mode="reflect"), g, axis=1, mode="reflect")


def _wavelet_approx(image: np.ndarray, name: str, levels: int) -> np.ndarray:
    bank = make_filter(name)
    planes = image[..., None] if image.ndim == 2 else image
    out = []
    for c in range(planes.shape[2]):
        p = planes[..., c]
        for _ in range(levels):
            # orthonormal LL has gain 2; halve to stay in the display range
            p = 0.5 * dwt2(p, bank).ll
        out.append(p)
    out = np.stack(out, axis=-1)
    return out[..., 0] if image.ndim == 2 else out


def decimate(image, scheme: DecimationScheme | str, factor: int) -> np.ndarray:
    """Produce the low-resolution input for one of the five evaluation schemes.

    Parameters
    ----------
    image : ndarray, shape (M, N) or (M, N, C)
        Ground-truth image with samples in [0, 1].
    scheme : DecimationScheme or str
    factor : {2, 4}
        Both M and N must be divisible by it.
    """
    if isinstance(scheme, str):
        scheme = DecimationScheme.parse(scheme)
    if factor not in (2, 4):
        raise ValueError(f"factor must be 2 or 4, got {factor}")
    img = np.asarray(image, dtype=float)
    if img.shape[0] % factor or img.shape[1] % factor:
        raise ValueError(f"image size {img.shape[:2]} is not divisible by {factor}")

    levels = int(math.log2(factor))
    if scheme is DecimationScheme.BICUBIC:
        return resize_to(img, (img.shape[0] // factor, img.shape[1] // factor))
    if scheme is DecimationScheme.DAUBECHIES:
        return _wavelet_approx(img, "db2", levels)
    if scheme is DecimationScheme.DMEYER:
        return _wavelet_approx(img, "dmey", levels)
    if scheme is DecimationScheme.GAUSSIAN:
        return gaussian_blur(img)[::factor, ::factor].copy()
    return img[::factor, ::factor].copy()
