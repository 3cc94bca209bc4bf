"""Stochastic Chebyshev estimator of ``tr(f(A))``.

For each probe ``v`` the vectors ``w_j = T_j(A~) v`` of the shifted and scaled
operator ``A~ = 2A/(b-a) - (b+a)/(b-a) I`` are produced by the three-term
recurrence and accumulated into ``u = sum_j c_j w_j``; the probe contributes
``v^T u``. ``p(A)`` is never formed and a run costs exactly ``m * n``
applications of ``A``.
"""

from __future__ import annotations

import time
from typing import Callable, Optional

import numpy as np

from .chebyshev import ChebyshevInterpolant, interpolate
from .errors import PreconditionError
from .hutchinson import EstimateResult, ProbeConfig, make_probe, map_probes
from .linop import MatrixLike, SpectralInterval, _as_interval, as_operator

__all__ = ["EstimateResult", "estimate_spectral_sum", "spectral_sum"]


def estimate_spectral_sum(op: MatrixLike, interval, p: ChebyshevInterpolant,
                          cfg: ProbeConfig, threads: Optional[int] = 1) -> EstimateResult:
    """Hutchinson estimate of ``tr(p(A))`` for a Chebyshev interpolant ``p``.

    Parameters
    ----------
    op : operator or matrix
        Symmetric ``A`` with spectrum inside ``interval``.
    interval : SpectralInterval or (a, b)
        Must equal ``p.interval`` and satisfy ``a < b``.
    p : ChebyshevInterpolant
    cfg : ProbeConfig
    threads : int, optional
        Worker threads for the probe loop; ``None`` uses every core. The
        result does not depend on this value.
    """
    op = as_operator(op)
    interval = _as_interval(interval)
    if interval != p.interval:
        raise PreconditionError(f"interval {interval} does not match interpolant {p.interval}")
    a, b = interval
    if not a < b:
        raise PreconditionError("degenerate interval a == b; use spectral_sum")

    d = op.dim
    c = p.coefficients
    n = p.degree
    scale = 2.0 / (b - a)
    shift = (b + a) / (b - a)

    # fresh, writeable result: the recurrence updates it in place
    def apply(x, *live):
        y = op.apply(x)
        if not (isinstance(y, np.ndarray) and y.flags.owndata and y.flags.writeable) or any(
                np.may_share_memory(y, z) for z in live):
            y = np.array(y, dtype=np.float64)
        return y

    def probe_value(i: int) -> float:
        v = make_probe(d, cfg, i)
        w0 = v
        u = c[0] * w0
        if n >= 1:
            w1 = apply(w0, w0, u)
            w1 *= scale
            w1 -= shift * w0
            u += c[1] * w1
            for j in range(2, n + 1):
                w2 = apply(w1, w0, w1, u)
                w2 *= 2.0 * scale
                w2 -= (2.0 * shift) * w1
                w2 -= w0
                u += c[j] * w2
                w0, w1 = w1, w2
        return float(v @ u)

    t0 = time.perf_counter()
    samples = map_probes(probe_value, cfg.m, threads)
    return EstimateResult.from_samples(samples, n=n, interval=interval, cfg=cfg,
                                       wall_time=time.perf_counter() - t0)


def spectral_sum(op: MatrixLike, f: Callable, interval, m: int = 50, n: int = 25,
                 seed: int = 0, distribution: str = "rademacher",
                 threads: Optional[int] = 1) -> EstimateResult:
    """Estimate ``sum_i f(lambda_i)`` for symmetric ``op`` with spectrum in ``interval``.

    When ``a == b`` every eigenvalue equals ``a`` and ``d f(a)`` is returned
    without sampling.
    """
    op = as_operator(op)
    interval: SpectralInterval = _as_interval(interval)
    cfg = ProbeConfig(m=m, seed=seed, distribution=distribution)
    if interval.is_degenerate:
        with np.errstate(all="ignore"):
            value = op.dim * float(f(interval.a))
        if not np.isfinite(value):
            raise PreconditionError(f"f is not finite at {interval.a}")
        return EstimateResult.from_samples(np.full(cfg.m, value), n=0, interval=interval,
                                           cfg=cfg, wall_time=0.0)
    p = interpolate(f, n, interval)
    return estimate_spectral_sum(op, interval, p, cfg, threads=threads)
