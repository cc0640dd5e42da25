"""Single-level 2D discrete (DWT) and stationary (SWT) wavelet transforms.

Both transforms use periodic extension, which makes the DWT exactly
invertible and the SWT exactly covariant under circular shifts. Filtering
is done as circular convolution in the Fourier domain, so long filters such
as the 102-tap discrete Meyer cost the same as db2.

Plane axes follow the (row, column) convention. Subband names give the
filter applied along axis 0 first and axis 1 second, so ``lh`` is low-pass
down the columns and high-pass along the rows (vertical details).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import fft

__all__ = [
    "WaveletFilter",
    "SubbandSet",
    "make_filter",
    "dwt2",
    "idwt2",
    "swt2",
    "FILTER_NAMES",
]

FILTER_NAMES = ("db2", "dmey")

# Daubechies scaling coefficients with two vanishing moments, in the
# (time-reversed) decomposition order used by the common toolboxes.
_DB2_DEC_LO = (
    -0.12940952255126037,
    0.2241438680420134,
    0.8365163037378079,
    0.48296291314453416,
)

DMEY_LENGTH = 102


@dataclass(frozen=True)
class WaveletFilter:
    """Orthonormal two-channel filter bank.

    ``dec_hi`` is the quadrature mirror of ``dec_lo`` and the reconstruction
    filters are the time reverses of the decomposition filters.
    """

    name: str
    dec_lo: tuple[float, ...]
    dec_hi: tuple[float, ...]
    rec_lo: tuple[float, ...]
    rec_hi: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.dec_lo)

    @classmethod
    def from_dec_lo(cls, name: str, dec_lo) -> "WaveletFilter":
        lo = np.asarray(dec_lo, dtype=float)
        n = lo.size
        hi = lo[::-1] * (-1.0) ** (np.arange(n) + 1)
        return cls(
            name=name,
            dec_lo=tuple(lo.tolist()),
            dec_hi=tuple(hi.tolist()),
            rec_lo=tuple(lo[::-1].tolist()),
            rec_hi=tuple(hi[::-1].tolist()),
        )


class SubbandSet(NamedTuple):
    """Approximation and detail planes from one decomposition level."""

    ll: np.ndarray
    lh: np.ndarray
    hl: np.ndarray
    hh: np.ndarray
    mode: str = "dwt"

    @property
    def details(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.lh, self.hl, self.hh


def _meyer_amplitude(omega: np.ndarray) -> np.ndarray:
    """Magnitude response of the Meyer scaling filter on [0, pi].

    Flat at sqrt(2) up to pi/3, zero beyond 2pi/3, with the usual degree-7
    polynomial transition so the power-complementary condition holds.
    """
    w = np.abs(omega)
    x = np.clip(3.0 * w / np.pi - 1.0, 0.0, 1.0)
    nu = x**4 * (35.0 - 84.0 * x + 70.0 * x**2 - 20.0 * x**3)
    amp = np.sqrt(2.0) * np.cos(0.5 * np.pi * nu)
    amp[w >= 2.0 * np.pi / 3.0] = 0.0
    return amp


def _orthonormality_residual(h: np.ndarray) -> np.ndarray:
    n = h.size
    res = np.array([h[: n - 2 * k] @ h[2 * k :] for k in range(n // 2)])
    res[0] -= 1.0
    # H(pi) = 0 pins the highpass to zero DC gain
    return np.append(res, h @ (-1.0) ** np.arange(n))


def _orthonormality_jacobian(h: np.ndarray) -> np.ndarray:
    n = h.size
    jac = np.zeros((n // 2 + 1, n))
    for k in range(n // 2):
        jac[k, : n - 2 * k] += h[2 * k :]
        jac[k, 2 * k :] += h[: n - 2 * k]
    jac[-1] = (-1.0) ** np.arange(n)
    return jac


@functools.lru_cache(maxsize=None)
def _dmey_dec_lo() -> tuple[float, ...]:
    # Samples of the ideal Meyer lowpass impulse response at n = -50..50,
    # by periodic trapezoid quadrature of the inverse DTFT.
    grid = 1 << 15
    omega = 2.0 * np.pi * np.fft.fftfreq(grid)
    impulse = np.fft.ifft(_meyer_amplitude(omega)).real
    half = (DMEY_LENGTH - 2) // 2
    taps = np.concatenate([[0.0], impulse[-half:], impulse[: half + 1]])

    # Truncation breaks orthonormality at the 1e-6 level. Project back onto
    # the set of orthonormal filters: first steps minimise the distance to
    # the analytic taps, the final Newton steps polish to machine precision.
    target = taps.copy()
    h = taps.copy()
    for _ in range(40):
        res = _orthonormality_residual(h)
        if np.abs(res).max() < 1e-12:
            break
        jac = _orthonormality_jacobian(h)
        offset = h - target
        lam = np.linalg.solve(jac @ jac.T, jac @ offset - res)
        h = h + jac.T @ lam - offset
    for _ in range(10):
        res = _orthonormality_residual(h)
        if np.abs(res).max() < 1e-15:
            break
        jac = _orthonormality_jacobian(h)
        h = h + np.linalg.lstsq(jac, -res, rcond=None)[0]
    if h.sum() < 0:
        h = -h
    return tuple(h.tolist())


@functools.lru_cache(maxsize=None)
def make_filter(name: str) -> WaveletFilter:
    """Return the orthonormal filter bank ``"db2"`` or ``"dmey"``."""
    if name == "db2":
        return WaveletFilter.from_dec_lo("db2", _DB2_DEC_LO)
    if name == "dmey":
        return WaveletFilter.from_dec_lo("dmey", _dmey_dec_lo())
    raise ValueError(
        f"unknown wavelet {name!r}; expected one of {', '.join(FILTER_NAMES)}"
    )


@functools.lru_cache(maxsize=64)
def _spectra(bank: WaveletFilter, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Real FFTs of the length-n periodized analysis kernels."""
    length = len(bank)
    idx = (np.arange(length) - length // 2) % n
    lo = np.zeros(n)
    hi = np.zeros(n)
    np.add.at(lo, idx, bank.dec_lo)
    np.add.at(hi, idx, bank.dec_hi)
    return fft.rfft(lo), fft.rfft(hi)


def _shape_spectrum(spectrum: np.ndarray, axis: int, ndim: int) -> np.ndarray:
    shape = [1] * ndim
    shape[axis] = spectrum.size
    return spectrum.reshape(shape)


def _analysis(x: np.ndarray, bank: WaveletFilter, axis: int, decimate: bool):
    n = x.shape[axis]
    lo, hi = _spectra(bank, n)
    xf = fft.rfft(x, axis=axis)
    ylo = fft.irfft(xf * _shape_spectrum(lo, axis, x.ndim), n=n, axis=axis)
    yhi = fft.irfft(xf * _shape_spectrum(hi, axis, x.ndim), n=n, axis=axis)
    if decimate:
        sl = [slice(None)] * x.ndim
        sl[axis] = slice(0, None, 2)
        ylo, yhi = ylo[tuple(sl)], yhi[tuple(sl)]
    return ylo, yhi


def _synthesis(lo_part: np.ndarray, hi_part: np.ndarray, bank: WaveletFilter, axis: int):
    n = 2 * lo_part.shape[axis]
    shape = list(lo_part.shape)
    shape[axis] = n
    sl = [slice(None)] * lo_part.ndim
    sl[axis] = slice(0, None, 2)
    sl = tuple(sl)
    up_lo = np.zeros(shape)
    up_hi = np.zeros(shape)
    up_lo[sl] = lo_part
    up_hi[sl] = hi_part
    klo, khi = _spectra(bank, n)
    spectrum = fft.rfft(up_lo, axis=axis) * _shape_spectrum(np.conj(klo), axis, up_lo.ndim)
    spectrum += fft.rfft(up_hi, axis=axis) * _shape_spectrum(np.conj(khi), axis, up_hi.ndim)
    return fft.irfft(spectrum, n=n, axis=axis)


def _check_plane(plane) -> np.ndarray:
    p = np.asarray(plane, dtype=float)
    if p.ndim != 2:
        raise ValueError(f"expected a 2D plane, got shape {p.shape}")
    if p.shape[0] % 2 or p.shape[1] % 2:
        raise ValueError(
            f"plane shape {p.shape} has an odd dimension; pad to even size first"
        )
    if not np.all(np.isfinite(p)):
        raise ValueError("plane contains non-finite samples")
    return p


def dwt2(plane, bank: WaveletFilter) -> SubbandSet:
    """One level of the separable, periodized, critically sampled DWT.

    Parameters
    ----------
    plane : array_like, shape (M, N)
        Input plane with even M and N.
    bank : WaveletFilter

    Returns
    -------
    SubbandSet
        Four planes of shape (M/2, N/2). A constant plane ``c`` gives
        ``ll == 2c`` and vanishing details.
    """
    p = _check_plane(plane)
    lo, hi = _analysis(p, bank, axis=1, decimate=True)
    ll, hl = _analysis(lo, bank, axis=0, decimate=True)
    lh, hh = _analysis(hi, bank, axis=0, decimate=True)
    return SubbandSet(ll, lh, hl, hh, "dwt")


def idwt2(subbands: SubbandSet, bank: WaveletFilter) -> np.ndarray:
    """Invert :func:`dwt2`; returns a plane of doubled dimensions."""
    ll, lh, hl, hh = (np.asarray(b, dtype=float) for b in subbands[:4])
    if not (ll.shape == lh.shape == hl.shape == hh.shape) or ll.ndim != 2:
        raise ValueError(
            "subband planes must be 2D and equally sized, got "
            f"{ll.shape}, {lh.shape}, {hl.shape}, {hh.shape}"
        )
    lo = _synthesis(ll, hl, bank, axis=0)
    hi = _synthesis(lh, hh, bank, axis=0)
    return _synthesis(lo, hi, bank, axis=1)


def swt2(plane, bank: WaveletFilter) -> SubbandSet:
    """One level of the undecimated (stationary) wavelet transform.

    Same filtering as :func:`dwt2` without the downsampling, so every band
    keeps the input shape and the even-indexed samples of each band equal
    the corresponding DWT coefficients.
    """
    p = _check_plane(plane)
    lo, hi = _analysis(p, bank, axis=1, decimate=False)
    ll, hl = _analysis(lo, bank, axis=0, decimate=False)
    lh, hh = _analysis(hi, bank, axis=0, decimate=False)
    return SubbandSet(ll, lh, hl, hh, "swt")
