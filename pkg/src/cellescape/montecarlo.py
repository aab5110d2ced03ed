"""Stochastic estimators for escape and transition probabilities.

One step of the Markov process is simulated for N particles started
uniformly in the source cell; the estimate is the fraction of particles
that end up outside (escape) or inside the target (transition).  The value
is a multiple of 1/N -- quantized, but unbiased.

Particles are processed in fixed-size chunks, each driven by its own
counter-based Philox stream keyed by ``(seed, chunk index)``.  Chunk
results are exact integer counts, so the estimate is a deterministic
function of the configuration and independent of how many workers process
the chunks.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SamplerUnavailable, TooFewRuns
from .geometry import MeshElement, _reference_contains, _sample_reference, build_affine_map
from .quadrature import ProbabilityEstimate

__all__ = [
    "McConfig",
    "escape_probability_mc",
    "transition_probability_mc",
    "repeat_escape_probability_mc",
    "theoretical_stat_error",
    "empirical_stat_error",
]

_UINT64_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo run configuration.

    ``chunk`` is the number of particles per independent random stream;
    it is part of the reproducibility contract (changing it changes the
    streams and therefore the estimate).
    """

    particles: int = 10**6
    seed: int = 0
    runs: int = 10
    chunk: int = 2**16

    def __post_init__(self):
        if self.particles < 1:
            raise ValueError("particles must be at least 1")
        if self.runs < 1:
            raise ValueError("runs must be at least 1")
        if self.chunk < 1:
            raise ValueError("chunk must be at least 1")


def _chunk_stream(seed: int, index: int) -> np.random.Generator:
    key = np.array([seed & _UINT64_MASK, index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _run_chunks(count_fn, config: McConfig, workers: int) -> int:
    """Sum integer chunk counts; the reduction is order-independent."""
    sizes = []
    remaining = config.particles
    while remaining > 0:
        sizes.append(min(config.chunk, remaining))
        remaining -= config.chunk
    if workers <= 1:
        return sum(count_fn(i, m) for i, m in enumerate(sizes))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        counts = pool.map(count_fn, range(len(sizes)), sizes)
        return sum(counts)


def escape_probability_mc(
    element: MeshElement, dist, config: McConfig | None = None, workers: int = 1
) -> ProbabilityEstimate:
    """Estimate the escape probability with N independent particles.

    Each particle starts uniformly inside the element, takes one sampled
    step, and counts as escaped when its new position is not inside
    (boundary-inclusive containment).  The reported error estimate is the
    binomial standard deviation at the estimated value.
    """
    config = config or McConfig()
    if not dist.has_sampler:
        raise SamplerUnavailable(
            f"{type(dist).__name__} offers no sampler; use the deterministic solver"
        )
    if dist.dim != element.dim:
        raise DimensionMismatch(
            f"distribution dimension {dist.dim} != element dimension {element.dim}"
        )
    start = time.perf_counter()
    amap = build_affine_map(element)
    cell = element.reference_cell

    def count_escaped(index: int, m: int) -> int:
        rng = _chunk_stream(config.seed, index)
        positions = amap.to_global(_sample_reference(cell, rng, m))
        moved = positions + dist.sample(rng, m)
        inside = _reference_contains(cell, amap.to_local(moved))
        return int(m - inside.sum())

    escaped = _run_chunks(count_escaped, config, workers)
    return _finalize(escaped, config, start)


def transition_probability_mc(
    source: MeshElement, target: MeshElement, dist, config: McConfig | None = None, workers: int = 1
) -> ProbabilityEstimate:
    """Estimate the probability of moving from ``source`` into ``target``."""
    config = config or McConfig()
    if not dist.has_sampler:
        raise SamplerUnavailable(
            f"{type(dist).__name__} offers no sampler; use the deterministic solver"
        )
    if source.dim != target.dim:
        raise DimensionMismatch(
            f"source dimension {source.dim} != target dimension {target.dim}"
        )
    if dist.dim != source.dim:
        raise DimensionMismatch(
            f"distribution dimension {dist.dim} != element dimension {source.dim}"
        )
    start = time.perf_counter()
    src_map = build_affine_map(source)
    tgt_map = build_affine_map(target)
    src_cell = source.reference_cell
    tgt_cell = target.reference_cell

    def count_entered(index: int, m: int) -> int:
        rng = _chunk_stream(config.seed, index)
        positions = src_map.to_global(_sample_reference(src_cell, rng, m))
        moved = positions + dist.sample(rng, m)
        return int(_reference_contains(tgt_cell, tgt_map.to_local(moved)).sum())

    entered = _run_chunks(count_entered, config, workers)
    return _finalize(entered, config, start)


def _finalize(successes: int, config: McConfig, start: float) -> ProbabilityEstimate:
    value = successes / config.particles
    bound = None
    if successes == 0 or successes == config.particles:
        # Binomial sigma degenerates at the extremes; report the one-sided
        # 95% Clopper-Pearson distance instead.
        bound = 1.0 - 0.05 ** (1.0 / config.particles)
    return ProbabilityEstimate(
        value=value,
        error_estimate=theoretical_stat_error(value, config.particles),
        method="monte_carlo",
        cost=config.particles,
        wall_time=time.perf_counter() - start,
        error_bound_95=bound,
    )


def repeat_escape_probability_mc(
    element: MeshElement, dist, config: McConfig | None = None, workers: int = 1
) -> list[ProbabilityEstimate]:
    """Run the escape estimator ``config.runs`` times with distinct seeds.

    Run ``r`` uses seed ``config.seed + r``, so the first entry reproduces
    a single :func:`escape_probability_mc` call with the same config.
    """
    config = config or McConfig()
    out = []
    for r in range(config.runs):
        cfg = McConfig(
            particles=config.particles, seed=config.seed + r, runs=1, chunk=config.chunk
        )
        out.append(escape_probability_mc(element, dist, cfg, workers=workers))
    return out


def theoretical_stat_error(p: float, n: int) -> float:
    """Binomial standard deviation ``sqrt(p (1 - p) / n)``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return math.sqrt(p * (1.0 - p) / n)


def empirical_stat_error(estimates) -> float:
    """Sample standard deviation (divisor N - 1) of repeated run values."""
    values = np.asarray(estimates, dtype=float)
    if values.size < 2:
        raise TooFewRuns("need at least 2 run values for an empirical error")
    return float(np.std(values, ddof=1))
