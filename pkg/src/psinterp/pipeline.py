"""Modeling and generation stages of process-similarity interpolation.

Modeling learns six fusion weights by asking how well the input can be
rebuilt from its own half-resolution approximation. Generation applies the
same weights one scale up, treating the input as the approximation band of
the unknown double-size image.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .decimation import resize_to
from .fusion import DetailTriple, FusionWeights, fuse_details, upsample_smooth
from .metrics import psnr
from .pso import PsoConfig, optimize
from .wavelet import SubbandSet, WaveletFilter, dwt2, idwt2, make_filter, swt2

__all__ = [
    "ModelResult",
    "ScaleFactor",
    "SelfEstimator",
    "reconstruct_estimate",
    "self_estimate_fitness",
    "model_weights",
    "model_channels",
    "generate_2x",
    "interpolate",
    "color_policy",
    "merge_channels",
]

log = logging.getLogger(__name__)

# Finite stand-in for the infinite PSNR of an exact self-estimate.
FITNESS_CAP_DB = 1000.0
MIN_MODEL_SIZE = 16


@dataclass(frozen=True)
class ModelResult:
    weights: FusionWeights
    fitness_db: float
    iterations: int
    wavelet: str
    degenerate: bool = False
    history: tuple[float, ...] = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class ScaleFactor:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(f"scale factor must exceed 1, got {self.alpha}")

    @property
    def levels(self) -> int:
        """Smallest l with alpha <= 2**l."""
        levels = 1
        while 2**levels < self.alpha * (1 - 1e-12):
            levels += 1
        return levels

    @property
    def dyadic(self) -> bool:
        return math.isclose(self.alpha, 2**self.levels)


def _bank(bank: WaveletFilter | str) -> WaveletFilter:
    return make_filter(bank) if isinstance(bank, str) else bank


def reconstruct_estimate(ll, weights: FusionWeights, bank: WaveletFilter | str) -> np.ndarray:
    """Rebuild a plane from its approximation band and fused estimated details.

    The DWT of ``ll`` supplies details one scale down, the SWT supplies
    them at the scale of ``ll``; the weighted across-scale sum stands in for
    the missing details of the IDWT.
    """
    bank = _bank(bank)
    ll = np.asarray(ll, dtype=float)
    if ll.ndim != 2 or min(ll.shape) < 8:
        raise ValueError(f"approximation band must be at least 8x8, got {ll.shape}")
    coarse = dwt2(ll, bank)
    fine = swt2(ll, bank)
    fused = fuse_details(DetailTriple(*coarse.details), DetailTriple(*fine.details), weights)
    return idwt2(SubbandSet(ll, *fused), bank)


def _pad_to_multiple(plane: np.ndarray, multiple: int) -> np.ndarray:
    rows = -plane.shape[0] % multiple
    cols = -plane.shape[1] % multiple
    if rows or cols:
        plane = np.pad(plane, ((0, rows), (0, cols)), mode="symmetric")
    return plane


class SelfEstimator:
    """Fitness of fusion weights for rebuilding ``image`` from its own LL.

    Everything that does not depend on the weights is computed once.
    ``mode="direct"`` performs the weighted fusion and IDWT for every call
    and is bit-identical to :func:`reconstruct_estimate`. ``mode="gram"``
    exploits linearity in the weights: the squared error is a quadratic form
    in six variables, so each call costs O(36) after setup.
    """

    def __init__(self, image, bank: WaveletFilter | str, mode: str = "direct"):
        if mode not in ("direct", "gram"):
            raise ValueError(f"unknown fitness mode {mode!r}")
        self.bank = _bank(bank)
        self.mode = mode
        self.image = np.asarray(image, dtype=float)
        self.ll = dwt2(self.image, self.bank).ll
        coarse = dwt2(self.ll, self.bank)
        fine = swt2(self.ll, self.bank)
        self.dwt_details = DetailTriple(*coarse.details)
        self.swt_details = DetailTriple(*fine.details)
        self.lifted = DetailTriple(*(upsample_smooth(d) for d in self.dwt_details))
        if mode == "gram":
            self._prepare_gram()

    def estimate(self, weights: FusionWeights) -> np.ndarray:
        fused = fuse_details(self.dwt_details, self.swt_details, weights, lifted=self.lifted)
        return idwt2(SubbandSet(self.ll, *fused), self.bank)

    def _prepare_gram(self):
        zero = np.zeros_like(self.ll)
        base = idwt2(SubbandSet(self.ll, zero, zero, zero), self.bank)
        columns = []
        for source in (self.lifted, self.swt_details):
            for band in range(3):
                bands = [zero, zero, zero]
                bands[band] = source[band]
                columns.append(idwt2(SubbandSet(zero, *bands), self.bank).ravel())
        basis = np.stack(columns, axis=1)
        resid = (self.image - base).ravel()
        self._n = resid.size
        self._rr = float(resid @ resid)
        self._br = basis.T @ resid
        self._gram = basis.T @ basis

    def fitness(self, weights) -> float:
        if not isinstance(weights, FusionWeights):
            weights = FusionWeights(tuple(weights))
        if self.mode == "gram":
            w = weights.as_array()
            sse = self._rr - 2.0 * w @ self._br + w @ self._gram @ w
            mse = max(sse, 0.0) / self._n
            value = math.inf if mse == 0.0 else -10.0 * math.log10(mse)
        else:
            value = psnr(self.image, self.estimate(weights))
        return min(value, FITNESS_CAP_DB)


def self_estimate_fitness(image, weights: FusionWeights, bank: WaveletFilter | str) -> float:
    """PSNR (peak 1) of ``image`` against its estimate from its own LL band."""
    image = np.asarray(image, dtype=float)
    ll = dwt2(image, _bank(bank)).ll
    return min(psnr(image, reconstruct_estimate(ll, weights, bank)), FITNESS_CAP_DB)


def model_weights(
    image,
    bank: WaveletFilter | str,
    pso_config: PsoConfig = PsoConfig(),
    fitness_mode: str = "direct",
) -> ModelResult:
    """Learn the fusion weights that best rebuild ``image`` from its LL band.

    The all-zeros and all-ones weight vectors seed the swarm, so the result
    is never worse than either. Planes whose size is not a multiple of 4 are
    symmetric-padded first so the approximation band stays even.
    """
    bank = _bank(bank)
    plane = np.asarray(image, dtype=float)
    if plane.ndim != 2:
        raise ValueError(f"model_weights expects a single-channel plane, got {plane.shape}")
    if min(plane.shape) < MIN_MODEL_SIZE:
        raise ValueError(f"image must be at least {MIN_MODEL_SIZE}x{MIN_MODEL_SIZE}")
    plane = _pad_to_multiple(plane, 4)

    estimator = SelfEstimator(plane, bank, mode=fitness_mode)
    zeros, ones = FusionWeights.zeros(), FusionWeights.ones()
    cfg = replace(pso_config, dims=6, pos_bounds=(0.0, 1.0))
    result = optimize(estimator.fitness, cfg, anchors=[zeros.values, ones.values])

    best = FusionWeights(tuple(np.clip(result.position, 0.0, 1.0)))
    if fitness_mode == "direct":
        best_fit = result.fitness
    else:
        # the quadratic form agrees only to rounding; settle ties with the
        # reference composition so the anchor guarantee is exact
        best_fit = -math.inf
        for cand in (best, zeros, ones):
            f = self_estimate_fitness(plane, cand, bank)
            if f > best_fit:
                best, best_fit = cand, f

    degenerate = bool(np.ptp(plane) == 0.0) or best_fit >= FITNESS_CAP_DB
    if degenerate:
        log.warning("degenerate modeling input (exact self-estimate); weights are arbitrary")
    return ModelResult(
        weights=best,
        fitness_db=float(best_fit),
        iterations=result.iterations,
        wavelet=bank.name,
        degenerate=degenerate,
        history=tuple(result.history),
    )


def generate_2x(
    image, weights: FusionWeights, bank: WaveletFilter | str, clip: bool = True
) -> np.ndarray:
    """Synthesize the double-size plane with learned weights.

    The input, scaled by the orthonormal LL gain of 2, acts as the
    approximation band; its DWT and SWT details are fused into the missing
    detail bands. A constant input therefore maps to the same constant.
    """
    plane = np.asarray(image, dtype=float)
    if plane.ndim != 2:
        raise ValueError(f"generate_2x expects a single-channel plane, got {plane.shape}")
    out = reconstruct_estimate(2.0 * plane, weights, bank)
    return np.clip(out, 0.0, 1.0) if clip else out


def color_policy(image) -> list[np.ndarray]:
    """Split an image into independent single-channel planes."""
    img = np.asarray(image, dtype=float)
    if img.ndim == 2:
        return [img]
    if img.ndim == 3 and img.shape[2] in (1, 3):
        return [img[..., c] for c in range(img.shape[2])]
    raise ValueError(f"unsupported image shape {img.shape}; need 1 or 3 channels")


def merge_channels(planes: list[np.ndarray], like) -> np.ndarray:
    like = np.asarray(like)
    if like.ndim == 2:
        return planes[0]
    return np.stack(planes, axis=-1)


def model_channels(
    image,
    bank: WaveletFilter | str,
    pso_config: PsoConfig = PsoConfig(),
    fitness_mode: str = "direct",
) -> list[ModelResult]:
    """Run :func:`model_weights` on every channel with the same seed."""
    return [
        model_weights(plane, bank, pso_config, fitness_mode)
        for plane in color_policy(image)
    ]


def interpolate(
    image,
    alpha: float | ScaleFactor,
    bank: WaveletFilter | str = "db2",
    pso_config: PsoConfig = PsoConfig(),
    models: list[ModelResult] | list[FusionWeights] | None = None,
    remodel_each_level: bool = False,
    fitness_mode: str = "direct",
) -> np.ndarray:
    """Enlarge ``image`` by ``alpha``; output is ``round(alpha * M) x round(alpha * N)``.

    Each channel is modeled once (unless ``models`` supplies weights) and
    generation is applied ``l = ceil(log2 alpha)`` times with those weights.
    A non-dyadic factor is reached by a final bicubic reduction by
    ``alpha / 2**l``. ``remodel_each_level`` re-learns the weights on every
    intermediate result instead of reusing the first set.
    """
    bank = _bank(bank)
    scale = alpha if isinstance(alpha, ScaleFactor) else ScaleFactor(float(alpha))
    planes = color_policy(image)
    if min(planes[0].shape) < MIN_MODEL_SIZE:
        raise ValueError(f"image must be at least {MIN_MODEL_SIZE}x{MIN_MODEL_SIZE}")
    if models is not None and len(models) != len(planes):
        raise ValueError(f"got {len(models)} weight sets for {len(planes)} channels")

    levels = scale.levels
    rows, cols = planes[0].shape
    target = (round(scale.alpha * rows), round(scale.alpha * cols))
    out_planes = []
    for c, plane in enumerate(planes):
        if models is None:
            weights = model_weights(plane, bank, pso_config, fitness_mode).weights
        else:
            m = models[c]
            weights = m.weights if isinstance(m, ModelResult) else m
        cur = _pad_to_multiple(plane, 4)
        for level in range(levels):
            if remodel_each_level and level > 0:
                weights = model_weights(cur, bank, pso_config, fitness_mode).weights
            cur = generate_2x(cur, weights, bank, clip=False)
        cur = cur[: rows * 2**levels, : cols * 2**levels]
        if cur.shape != target:
            cur = resize_to(cur, target)
        out_planes.append(np.clip(cur, 0.0, 1.0))
    return merge_channels(out_planes, image)
