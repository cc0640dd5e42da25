"""Global-best particle swarm maximiser on a box.

The loop evaluates every particle, refreshes personal and global bests on
strict improvement, tests the termination rules, and only then moves the
swarm. All random draws happen in the sequential update phase, so fitness
evaluations can be farmed out to threads without changing the result.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = ["PsoConfig", "Swarm", "PsoResult", "seed_particles", "optimize"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoConfig:
    population: int = 15
    dims: int = 6
    max_iters: int = 15
    min_iters_before_early_stop: int = 7
    c1: float = 2.0
    c2: float = 2.0
    w: float = 1.0
    pos_bounds: tuple[float, float] = (0.0, 1.0)
    vel_init_bounds: tuple[float, float] = (-0.1, 0.1)
    vel_clamp: tuple[float, float] = (-0.2, 0.2)
    stall_tolerance: float = 1e-6
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.population < 2:
            raise ValueError("population must be at least 2")
        if self.dims < 1:
            raise ValueError("dims must be positive")
        if not self.max_iters >= self.min_iters_before_early_stop >= 1:
            raise ValueError(
                "need max_iters >= min_iters_before_early_stop >= 1, got "
                f"{self.max_iters} and {self.min_iters_before_early_stop}"
            )
        for name in ("pos_bounds", "vel_init_bounds", "vel_clamp"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name} must satisfy lower < upper, got {(lo, hi)}")
        if self.stall_tolerance < 0:
            raise ValueError("stall_tolerance must be non-negative")


@dataclass
class Swarm:
    positions: np.ndarray
    velocities: np.ndarray
    pbest: np.ndarray
    pbest_fitness: np.ndarray
    gbest: np.ndarray
    gbest_fitness: float
    rng: np.random.Generator
    iteration: int = 0


@dataclass
class PsoResult:
    position: np.ndarray
    fitness: float
    iterations: int
    history: list[float] = field(default_factory=list)

    def __iter__(self):
        # unpacks as (best_position, best_fitness, iterations_run)
        return iter((self.position, self.fitness, self.iterations))


def seed_particles(config: PsoConfig, anchors: Sequence[Sequence[float]] = ()) -> Swarm:
    """Initial swarm with ``anchors`` as the first particles, the rest uniform."""
    anchors = np.asarray(anchors, dtype=float).reshape(-1, config.dims)
    if len(anchors) > config.population:
        raise ValueError(
            f"{len(anchors)} anchors exceed the population of {config.population}"
        )
    lo, hi = config.pos_bounds
    if np.any(anchors < lo) or np.any(anchors > hi):
        raise ValueError(f"anchor outside position bounds {config.pos_bounds}")

    rng = np.random.default_rng(config.seed)
    shape = (config.population, config.dims)
    positions = rng.uniform(lo, hi, size=shape)
    positions[: len(anchors)] = anchors
    velocities = rng.uniform(*config.vel_init_bounds, size=shape)
    return Swarm(
        positions=positions,
        velocities=velocities,
        pbest=positions.copy(),
        pbest_fitness=np.full(config.population, -np.inf),
        gbest=positions[0].copy(),
        gbest_fitness=-math.inf,
        rng=rng,
    )


def _evaluate(fitness, positions: np.ndarray, workers: int) -> np.ndarray:
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(fitness, positions))
    else:
        values = [fitness(x) for x in positions]
    values = np.asarray(values, dtype=float)
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise FloatingPointError(
            f"fitness returned {values[i]} at position {positions[i].tolist()}"
        )
    return values


def optimize(
    fitness: Callable[[np.ndarray], float],
    config: PsoConfig = PsoConfig(),
    anchors: Sequence[Sequence[float]] = (),
) -> PsoResult:
    """Maximise ``fitness`` over the box ``config.pos_bounds ** dims``.

    Stops after ``max_iters`` iterations, or earlier once the iteration
    count exceeds ``min_iters_before_early_stop`` and the global best moved
    by no more than ``stall_tolerance`` since the previous iteration (so a
    zero tolerance means "no change at all").

    Returns
    -------
    PsoResult
        Unpacks as ``(best_position, best_fitness, iterations_run)``;
        ``history`` holds the global-best fitness after every iteration.
    """
    swarm = seed_particles(config, anchors)
    lo, hi = config.pos_bounds
    vlo, vhi = config.vel_clamp
    history: list[float] = []

    while True:
        swarm.iteration += 1
        values = _evaluate(fitness, swarm.positions, config.workers)
        improved = values > swarm.pbest_fitness
        swarm.pbest[improved] = swarm.positions[improved]
        swarm.pbest_fitness[improved] = values[improved]
        for i, v in enumerate(values):
            if v > swarm.gbest_fitness:
                swarm.gbest_fitness = float(v)
                swarm.gbest = swarm.positions[i].copy()
        history.append(swarm.gbest_fitness)

        if swarm.iteration >= config.max_iters:
            break
        if (
            swarm.iteration > config.min_iters_before_early_stop
            and abs(history[-1] - history[-2]) <= config.stall_tolerance
        ):
            log.debug("early stop at iteration %d", swarm.iteration)
            break

        shape = swarm.positions.shape
        r1 = swarm.rng.random(shape)
        r2 = swarm.rng.random(shape)
        v = (
            config.w * swarm.velocities
            + config.c1 * r1 * (swarm.pbest - swarm.positions)
            + config.c2 * r2 * (swarm.gbest - swarm.positions)
        )
        swarm.velocities = np.clip(v, vlo, vhi)
        swarm.positions = np.clip(swarm.positions + swarm.velocities, lo, hi)

    return PsoResult(swarm.gbest.copy(), swarm.gbest_fitness, swarm.iteration, history)
