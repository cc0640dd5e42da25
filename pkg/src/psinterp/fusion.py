"""Across-scale addition of DWT and SWT detail subbands."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import fft

__all__ = [
    "FusionWeights",
    "DetailTriple",
    "smoothing_kernel",
    "upsample_smooth",
    "fuse_details",
]

KERNEL_TAPS = 7
KERNEL_SIGMA = 1.0


@dataclass(frozen=True)
class FusionWeights:
    """Six fusion weights: (DWT lh, hl, hh, SWT lh, hl, hh), each in [0, 1]."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != 6:
            raise ValueError(f"need 6 fusion weights, got {len(vals)}")
        if not all(0.0 <= v <= 1.0 for v in vals):
            raise ValueError(f"fusion weights must lie in [0, 1], got {vals}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls) -> "FusionWeights":
        return cls((0.0,) * 6)

    @classmethod
    def ones(cls) -> "FusionWeights":
        return cls((1.0,) * 6)

    @property
    def dwt(self) -> tuple[float, float, float]:
        return self.values[:3]

    @property
    def swt(self) -> tuple[float, float, float]:
        return self.values[3:]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


class DetailTriple(NamedTuple):
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray


@functools.lru_cache(maxsize=None)
def _kernel_1d(taps: int = KERNEL_TAPS, sigma: float = KERNEL_SIGMA) -> np.ndarray:
    half = taps // 2
    x = np.arange(-half, half + 1, dtype=float)
    g = np.exp(-0.5 * (x / sigma) ** 2)
    # Each polyphase branch sums to 1/2 so that zero-insertion upsampling
    # followed by this filter (x2 per axis) reproduces constants exactly.
    even = (x % 2) == 0
    g[even] *= 0.5 / g[even].sum()
    g[~even] *= 0.5 / g[~even].sum()
    return g


def smoothing_kernel() -> np.ndarray:
    """The 7x7 zero-phase Gaussian used after zero-insertion upsampling.

    Unit total gain; :func:`upsample_smooth` applies the extra factor 4.
    """
    g = _kernel_1d()
    return np.outer(g, g)


@functools.lru_cache(maxsize=32)
def _kernel_spectrum(n: int) -> np.ndarray:
    g = _kernel_1d()
    half = g.size // 2
    k = np.zeros(n)
    np.add.at(k, np.arange(-half, half + 1) % n, 2.0 * g)
    return fft.rfft(k)


def _smooth_axis(x: np.ndarray, axis: int) -> np.ndarray:
    n = x.shape[axis]
    spectrum = _kernel_spectrum(n)
    shape = [1, 1]
    shape[axis] = spectrum.size
    return fft.irfft(fft.rfft(x, axis=axis) * spectrum.reshape(shape), n=n, axis=axis)


def upsample_smooth(plane) -> np.ndarray:
    """Double both dimensions by zero insertion and Gaussian smoothing.

    Original samples land on even indices, matching the alignment of the
    stationary transform. Boundaries are periodic.
    """
    p = np.asarray(plane, dtype=float)
    if p.ndim != 2:
        raise ValueError(f"expected a 2D plane, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("plane contains non-finite samples")
    up = np.zeros((2 * p.shape[0], 2 * p.shape[1]))
    up[::2, ::2] = p
    return _smooth_axis(_smooth_axis(up, 0), 1)


def fuse_details(
    dwt_details: DetailTriple,
    swt_details: DetailTriple,
    weights: FusionWeights,
    lifted: DetailTriple | None = None,
) -> DetailTriple:
    """Weighted across-scale addition, band by band.

    ``out_b = W_dwt[b] * upsample_smooth(dwt_b) + W_swt[b] * swt_b``

    ``lifted`` may carry precomputed ``upsample_smooth(dwt_b)`` planes; the
    optimizer passes them to avoid repeating the W-independent work.
    """
    if lifted is None:
        for d, s in zip(dwt_details, swt_details):
            if (2 * d.shape[0], 2 * d.shape[1]) != s.shape:
                raise ValueError(
                    f"DWT band {d.shape} must be half the size of SWT band {s.shape}"
                )
        lifted = DetailTriple(*(upsample_smooth(d) for d in dwt_details))
    elif any(u.shape != s.shape for u, s in zip(lifted, swt_details)):
        raise ValueError("lifted DWT bands must match the SWT band shapes")
    return DetailTriple(
        *(
            wd * u + ws * s
            for wd, ws, u, s in zip(weights.dwt, weights.swt, lifted, swt_details)
        )
    )
