"""Probe vectors and the plain Hutchinson trace estimator.

Probe ``i`` of a run is drawn from its own generator seeded by the pair
``(seed, i)``, so a probe never depends on which worker produced it or on how
many probes were drawn before it.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .linop import LinearOperator, MatrixLike, SpectralInterval, as_operator

__all__ = [
    "RADEMACHER",
    "GAUSSIAN",
    "ProbeConfig",
    "EstimateResult",
    "make_probe",
    "probe_rng",
    "plain_trace_estimate",
    "required_samples_psd",
]

RADEMACHER = "rademacher"
GAUSSIAN = "gaussian"
_DISTRIBUTIONS = (RADEMACHER, GAUSSIAN)
_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class ProbeConfig:
    """Distribution, number ``m`` and seed of the probe vectors."""

    m: int = 50
    seed: int = 0
    distribution: str = RADEMACHER

    def __post_init__(self):
        if int(self.m) < 1:
            raise ValueError(f"need at least one probe, got m={self.m}")
        dist = str(self.distribution).lower()
        if dist not in _DISTRIBUTIONS:
            raise ValueError(f"unknown probe distribution {self.distribution!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "seed", int(self.seed))
        object.__setattr__(self, "distribution", dist)


@dataclass
class EstimateResult:
    """Outcome of a stochastic trace estimate.

    ``per_probe`` holds one unbiased sample per probe vector; ``estimate`` is
    their mean.
    """

    estimate: float
    per_probe: np.ndarray
    sample_std: float
    m: int
    n: Optional[int]
    interval: Optional[SpectralInterval]
    seed: int
    wall_time: float
    distribution: str = RADEMACHER
    extras: dict = field(default_factory=dict)

    @property
    def stderr(self) -> float:
        return self.sample_std / math.sqrt(self.m)

    @classmethod
    def from_samples(cls, samples, *, n, interval, cfg: ProbeConfig, wall_time: float,
                     **extras) -> "EstimateResult":
        samples = np.asarray(samples, dtype=np.float64)
        std = float(np.std(samples, ddof=1)) if samples.size > 1 else 0.0
        return cls(
            estimate=float(np.mean(samples)),
            per_probe=samples,
            sample_std=std,
            m=samples.size,
            n=n,
            interval=interval,
            seed=cfg.seed,
            wall_time=wall_time,
            distribution=cfg.distribution,
            extras=dict(extras),
        )

    def shifted(self, offset: float = 0.0, scale: float = 1.0) -> "EstimateResult":
        """Apply ``x -> scale * x + offset`` to the estimate and every sample."""
        samples = scale * self.per_probe + offset
        std = abs(scale) * self.sample_std
        return EstimateResult(scale * self.estimate + offset, samples, std, self.m, self.n,
                              self.interval, self.seed, self.wall_time, self.distribution,
                              dict(self.extras))


def probe_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _U64, int(index)]))


def make_probe(d: int, cfg: ProbeConfig, index: int) -> np.ndarray:
    """Probe vector number ``index`` of length ``d`` (zero mean, unit covariance)."""
    if not 0 <= index:
        raise ValueError("probe index must be non-negative")
    rng = probe_rng(cfg.seed, index)
    if cfg.distribution == RADEMACHER:
        bits = rng.integers(0, 2, size=d, dtype=np.int8)
        return 1.0 - 2.0 * bits
    return rng.standard_normal(d)


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        return os.cpu_count() or 1
    return max(1, int(threads))


def map_probes(fn: Callable[[int], float], m: int, threads: Optional[int] = 1) -> np.ndarray:
    """Evaluate ``fn(i)`` for ``i < m``; results are stored by index."""
    workers = min(_resolve_threads(threads), m)
    if workers == 1:
        return np.array([fn(i) for i in range(m)], dtype=np.float64)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.fromiter(pool.map(fn, range(m)), dtype=np.float64, count=m)


def plain_trace_estimate(op: MatrixLike, cfg: ProbeConfig,
                         threads: Optional[int] = 1) -> EstimateResult:
    """Hutchinson estimate ``(1/m) sum_i v_i^T B v_i`` of ``tr(B)``."""
    op: LinearOperator = as_operator(op)
    d = op.dim
    t0 = time.perf_counter()

    def quad_form(i):
        v = make_probe(d, cfg, i)
        return float(v @ op.apply(v))

    samples = map_probes(quad_form, cfg.m, threads)
    return EstimateResult.from_samples(samples, n=None, interval=None, cfg=cfg,
                                       wall_time=time.perf_counter() - t0)


def required_samples_psd(eps: float, zeta: float) -> int:
    """Probes sufficient for an ``eps``-relative estimate with probability ``1 - zeta``
    when ``B`` is semi-definite: ``ceil(6 eps^-2 log(2/zeta))``."""
    if not (0 < eps < 1 and 0 < zeta < 1):
        raise ValueError("eps and zeta must lie in (0, 1)")
    return math.ceil(6.0 / eps**2 * math.log(2.0 / zeta))
