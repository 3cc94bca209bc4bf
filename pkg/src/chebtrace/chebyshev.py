"""Chebyshev interpolation of scalar functions on an interval ``[a, b]``.

The interpolant of degree ``n`` samples ``f`` at the ``n + 1`` roots of
``T_{n+1}`` mapped affinely onto ``[a, b]`` and is stored by its coefficients
in the Chebyshev basis of the mapped variable

    t = 2 x / (b - a) - (b + a) / (b - a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import PreconditionError
from .linop import SpectralInterval, _as_interval

__all__ = [
    "ChebyshevInterpolant",
    "EllipseBound",
    "nodes",
    "interpolate",
    "evaluate",
    "evaluate_recurrence",
    "uniform_error_bound",
    "nonnegativity_check",
]

# max entries of one cosine block in the O(n^2) coefficient sum
_BLOCK_ENTRIES = 1 << 22


def nodes(n: int) -> np.ndarray:
    """Chebyshev nodes ``cos(pi (k + 1/2) / (n + 1))``, ``k = 0..n`` (decreasing)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    k = np.arange(n + 1)
    return np.cos(np.pi * (k + 0.5) / (n + 1))


@dataclass(frozen=True)
class ChebyshevInterpolant:
    """Degree-``n`` polynomial ``sum_j c_j T_j(t(x))`` on ``interval``."""

    coefficients: np.ndarray
    interval: SpectralInterval

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=np.float64)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("need a non-empty 1-d coefficient vector")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "interval", _as_interval(self.interval))

    @property
    def degree(self) -> int:
        return self.coefficients.size - 1

    def __call__(self, x):
        return evaluate(self, x)


@dataclass(frozen=True)
class EllipseBound:
    """Bernstein-ellipse data for a function on ``[a, b]``.

    Attributes
    ----------
    rho : float
        Sum of the semi-axes of the ellipse (foci at -1, +1), ``rho > 1``.
    U : float
        Upper bound of ``|f(g(z))|`` on and inside the ellipse.
    L : float, optional
        Lower bound of ``|f|`` on ``[a, b]``.
    """

    rho: float
    U: float
    L: Optional[float] = None

    def __post_init__(self):
        if not self.rho > 1:
            raise PreconditionError(f"rho must exceed 1, got {self.rho}")
        if not self.U > 0:
            raise PreconditionError(f"U must be positive, got {self.U}")
        if self.L is not None and self.L < 0:
            raise PreconditionError(f"L must be non-negative, got {self.L}")


def _sample(f: Callable, points: np.ndarray) -> np.ndarray:
    values = None
    try:
        with np.errstate(all="ignore"):
            out = f(points)
        out = np.asarray(out, dtype=np.float64)
        if out.shape == points.shape:
            values = out
    except (TypeError, ValueError):
        pass
    if values is None:
        values = np.array([float(f(float(x))) for x in points])
    bad = ~np.isfinite(values)
    if bad.any():
        x = points[np.argmax(bad)]
        raise PreconditionError(f"function is not finite at node x={x!r}")
    return values


def interpolate(f: Callable, n: int, interval) -> ChebyshevInterpolant:
    """Chebyshev interpolant of ``f`` of degree ``n`` on ``interval``.

    The coefficients are the discrete cosine sums

        c_0 = 1/(n+1) sum_k f(g(x_k)),
        c_j = 2/(n+1) sum_k f(g(x_k)) T_j(x_k),   j >= 1,

    with ``T_j(x_k) = cos(j (2k+1) pi / (2(n+1)))`` evaluated after exact
    integer reduction of the angle.
    """
    interval = _as_interval(interval)
    if n < 0:
        raise ValueError("degree must be non-negative")
    a, b = interval
    if not a < b:
        raise PreconditionError(f"interpolation needs a < b, got [{a}, {b}]")

    x = nodes(n)
    values = _sample(f, 0.5 * (b - a) * x + 0.5 * (b + a))

    N = n + 1
    period = 4 * N
    odd = 2 * np.arange(N, dtype=np.int64) + 1
    coeffs = np.empty(N)
    block = max(1, _BLOCK_ENTRIES // N)
    for j0 in range(0, N, block):
        j = np.arange(j0, min(N, j0 + block), dtype=np.int64)
        r = np.outer(j, odd) % period
        coeffs[j0:j0 + j.size] = np.cos((np.pi / (2 * N)) * r) @ values
    coeffs *= 2.0 / N
    coeffs[0] *= 0.5
    return ChebyshevInterpolant(coeffs, interval)


def _to_unit(p: ChebyshevInterpolant, x) -> np.ndarray:
    a, b = p.interval
    x = np.asarray(x, dtype=np.float64)
    return (2.0 * x - (b + a)) / (b - a)


def evaluate(p: ChebyshevInterpolant, x):
    """Evaluate ``p`` by Clenshaw summation. Accepts scalars or arrays;
    points outside the interval are allowed."""
    t = _to_unit(p, x)
    c = p.coefficients
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    two_t = 2.0 * t
    for ck in c[:0:-1]:
        b1, b2 = ck + two_t * b1 - b2, b1
    out = c[0] + t * b1 - b2
    return float(out) if out.ndim == 0 else out


def evaluate_recurrence(p: ChebyshevInterpolant, x):
    """Evaluate ``p`` by summing ``c_j T_j`` with the forward three-term recurrence."""
    t = _to_unit(p, x)
    c = p.coefficients
    t_prev = np.ones_like(t)
    out = c[0] * t_prev
    if c.size > 1:
        t_cur = t.copy()
        out = out + c[1] * t_cur
        for cj in c[2:]:
            t_prev, t_cur = t_cur, 2.0 * t * t_cur - t_prev
            out = out + cj * t_cur
    return float(out) if np.ndim(out) == 0 else out


def uniform_error_bound(bound: EllipseBound, n: int) -> float:
    """``4 U / ((rho - 1) rho^n)``: sup-norm error bound of the degree-``n`` interpolant."""
    if not bound.rho > 1:
        raise PreconditionError("rho must exceed 1")
    if n < 0:
        raise ValueError("degree must be non-negative")
    try:
        rho_n = bound.rho ** n
    except OverflowError:
        return 0.0
    return 4.0 * bound.U / ((bound.rho - 1.0) * rho_n)


def nonnegativity_check(bound: EllipseBound, n: int) -> bool:
    """True when the interpolation error bound does not exceed ``L``.

    If ``|f| >= L`` on ``[a, b]`` this certifies that the interpolant keeps the
    sign of ``f`` there.
    """
    if bound.L is None:
        raise PreconditionError("nonnegativity_check needs the lower bound L")
    return uniform_error_bound(bound, n) <= bound.L
