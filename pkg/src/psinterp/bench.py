"""Evaluation harness: decimate, interpolate, score, aggregate.

Every (image, scheme, factor, wavelet, repeat) combination is one task.
Tasks may run in worker processes; records are gathered in task order so
the report does not depend on the worker count.
"""

from __future__ import annotations

import csv
import logging
import math
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .decimation import DecimationScheme, decimate
from .imageio import IMAGE_SUFFIXES, read_image
from .metrics import psnr, ssim
from .pipeline import interpolate
from .pso import PsoConfig

__all__ = [
    "BenchRun",
    "BenchRecord",
    "StepClock",
    "run_benchmark",
    "derive_seed",
    "summarize",
    "write_report",
    "read_report",
    "summary_path",
    "DETAIL_HEADER",
    "SUMMARY_HEADER",
]

log = logging.getLogger(__name__)

DETAIL_HEADER = ["image", "scheme", "factor", "wavelet", "repeat", "psnr_db", "ssim", "seconds"]
SUMMARY_HEADER = [
    "scheme",
    "factor",
    "wavelet",
    "images",
    "runs",
    "infinite",
    "psnr_mean",
    "psnr_std",
    "ssim_mean",
    "ssim_std",
    "seconds_mean",
    "seconds_std",
]


@dataclass(frozen=True)
class BenchRecord:
    image: str
    scheme: str
    factor: int
    wavelet: str
    repeat: int
    psnr_db: float
    ssim: float
    seconds: float

    def row(self) -> list:
        return [
            self.image,
            self.scheme,
            self.factor,
            self.wavelet,
            self.repeat,
            repr(self.psnr_db),
            repr(self.ssim),
            repr(self.seconds),
        ]


class StepClock:
    """Deterministic stand-in for ``time.perf_counter``.

    Each call advances by ``step`` seconds, so every timed interval has the
    same positive length and reports become byte-reproducible. Worker
    processes receive their own copy, so keep ``step`` a power of two: then
    every interval is exactly ``step`` whatever the running total.
    """

    def __init__(self, step: float = 1.0):
        self.step = step
        self._now = 0.0

    def __call__(self) -> float:
        self._now += self.step
        return self._now


@dataclass
class BenchRun:
    dataset_path: Path
    schemes: Sequence[DecimationScheme] = tuple(DecimationScheme)
    factors: Sequence[int] = (2,)
    wavelets: Sequence[str] = ("db2",)
    repeats: int = 5
    seed_base: int = 0
    workers: int = 1
    pso_config: PsoConfig = field(default_factory=PsoConfig)
    clock: Callable[[], float] = time.perf_counter


def derive_seed(seed_base: int, image_id: str, repeat: int) -> int:
    """Seed for one (image, repeat) pair; stable across runs and platforms."""
    return seed_base ^ zlib.crc32(f"{image_id}\x00{repeat}".encode())


def _load_dataset(path: Path) -> list[tuple[str, np.ndarray]]:
    path = Path(path)
    if not path.is_dir():
        raise FileNotFoundError(f"dataset directory {path} does not exist")
    images = []
    for file in sorted(path.iterdir()):
        if file.suffix.lower() not in IMAGE_SUFFIXES:
            continue
        try:
            images.append((file.name, read_image(file)))
        except Exception as exc:  # any decoder failure skips the file
            log.warning("skipping %s: %s", file.name, exc)
    if not images:
        raise ValueError(f"no decodable images in {path}")
    return images


def _run_task(task) -> BenchRecord:
    image_id, truth, scheme, factor, wavelet, repeat, cfg, clock = task
    rows = truth.shape[0] - truth.shape[0] % factor
    cols = truth.shape[1] - truth.shape[1] % factor
    truth = truth[:rows, :cols]
    low = decimate(truth, scheme, factor)
    start = clock()
    out = interpolate(low, factor, wavelet, cfg)
    elapsed = clock() - start
    return BenchRecord(
        image=image_id,
        scheme=scheme.value,
        factor=factor,
        wavelet=wavelet,
        repeat=repeat,
        psnr_db=psnr(truth, out),
        ssim=ssim(truth, out),
        seconds=elapsed,
    )


def run_benchmark(config: BenchRun) -> list[BenchRecord]:
    """Run every task of ``config`` and return its records in task order."""
    images = _load_dataset(config.dataset_path)
    tasks = []
    for image_id, truth in images:
        for scheme in config.schemes:
            scheme = DecimationScheme.parse(scheme) if isinstance(scheme, str) else scheme
            for factor in config.factors:
                for wavelet in config.wavelets:
                    for repeat in range(config.repeats):
                        seed = derive_seed(config.seed_base, image_id, repeat)
                        cfg = replace(config.pso_config, seed=seed)
                        tasks.append(
                            (image_id, truth, scheme, factor, wavelet, repeat, cfg, config.clock)
                        )
    log.info("benchmark: %d images, %d tasks", len(images), len(tasks))
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            return list(pool.map(_run_task, tasks))
    return [_run_task(t) for t in tasks]


def _stats(values: list[float]) -> tuple[float, float]:
    if not values:
        return math.nan, math.nan
    arr = np.asarray(values, dtype=float)
    return float(arr.mean()), float(arr.std())


def summarize(records: Iterable[BenchRecord]) -> list[dict]:
    """Per (scheme, factor, wavelet) means and population standard deviations.

    Rows with infinite PSNR are left out of the PSNR statistics and counted
    in the ``infinite`` column instead.
    """
    groups: dict[tuple, list[BenchRecord]] = {}
    for rec in records:
        groups.setdefault((rec.scheme, rec.factor, rec.wavelet), []).append(rec)
    rows = []
    for (scheme, factor, wavelet), recs in groups.items():
        finite = [r.psnr_db for r in recs if math.isfinite(r.psnr_db)]
        psnr_mean, psnr_std = _stats(finite)
        ssim_mean, ssim_std = _stats([r.ssim for r in recs])
        sec_mean, sec_std = _stats([r.seconds for r in recs])
        rows.append(
            {
                "scheme": scheme,
                "factor": factor,
                "wavelet": wavelet,
                "images": len({r.image for r in recs}),
                "runs": len(recs),
                "infinite": len(recs) - len(finite),
                "psnr_mean": psnr_mean,
                "psnr_std": psnr_std,
                "ssim_mean": ssim_mean,
                "ssim_std": ssim_std,
                "seconds_mean": sec_mean,
                "seconds_std": sec_std,
            }
        )
    return rows


def summary_path(path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}_summary.csv")


def write_report(records: Sequence[BenchRecord], path) -> Path:
    """Write the detail CSV at ``path`` and the summary CSV next to it."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DETAIL_HEADER)
        for rec in records:
            writer.writerow(rec.row())
    with summary_path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SUMMARY_HEADER)
        for row in summarize(records):
            writer.writerow(
                [repr(v) if isinstance(v, float) else v for v in (row[k] for k in SUMMARY_HEADER)]
            )
    return path


def read_report(path) -> list[BenchRecord]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != DETAIL_HEADER:
            raise ValueError(f"unexpected report header {reader.fieldnames}")
        return [
            BenchRecord(
                image=row["image"],
                scheme=row["scheme"],
                factor=int(row["factor"]),
                wavelet=row["wavelet"],
                repeat=int(row["repeat"]),
                psnr_db=float(row["psnr_db"]),
                ssim=float(row["ssim"]),
                seconds=float(row["seconds"]),
            )
            for row in reader
        ]
