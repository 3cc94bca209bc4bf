"""Spectral-sum applications and their parameter planners.

=============================  ===================  ==========================
quantity                       f(x)                 engine interval
=============================  ===================  ==========================
log det A                      log x                [a, b] / (a + b)
tr(A^-1)                       1 / x                [a, b]
Estrada index of a graph       exp(x)               [a, b] (default +-max deg)
Schatten p-norm of M           x^(p/2) on M^T M     [s_min^2, s_max^2]
positive-definiteness test     (1 + tanh(-a x))/2   [-1, 1]
=============================  ===================  ==========================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .chebyshev import EllipseBound
from .engine import spectral_sum
from .errors import DegenerateInputError, PreconditionError
from .hutchinson import EstimateResult
from .linop import (
    LinearOperator,
    MatrixLike,
    SparseMatrix,
    SpectralInterval,
    _as_interval,
    as_operator,
    gram_operator,
    infinity_norm,
    power_iteration_count,
    power_iteration_top,
    shifted_scaled,
)

__all__ = [
    "LOGDET",
    "TRACE_INVERSE",
    "ESTRADA",
    "SCHATTEN",
    "PD_TEST",
    "SpectralFunctionKind",
    "PlanParameters",
    "PdVerdict",
    "ellipse_bound",
    "plan_parameters",
    "logdet_pd",
    "logdet_general",
    "trace_inverse",
    "estrada",
    "schatten_power_sum",
    "schatten_norm",
    "normalize_for_pd",
    "pd_step_function",
    "test_pd",
]

LOGDET = "logdet"
TRACE_INVERSE = "trace_inverse"
ESTRADA = "estrada"
SCHATTEN = "schatten"
PD_TEST = "pd_test"

PD_THRESHOLD = 0.25


@dataclass(frozen=True)
class SpectralFunctionKind:
    """Which spectral sum to plan for, with its parameter (``p`` or ``eps``)."""

    tag: str
    p: Optional[float] = None
    eps: Optional[float] = None

    def __post_init__(self):
        if self.tag not in (LOGDET, TRACE_INVERSE, ESTRADA, SCHATTEN, PD_TEST):
            raise ValueError(f"unknown function kind {self.tag!r}")
        if self.tag == SCHATTEN and (self.p is None or not self.p >= 1):
            raise ValueError(f"Schatten norm needs p >= 1, got {self.p}")
        if self.tag == PD_TEST and self.eps is not None and not 0 < self.eps < 1:
            raise ValueError(f"PD test needs eps in (0, 1), got {self.eps}")

    @classmethod
    def logdet(cls):
        return cls(LOGDET)

    @classmethod
    def trace_inverse(cls):
        return cls(TRACE_INVERSE)

    @classmethod
    def estrada(cls):
        return cls(ESTRADA)

    @classmethod
    def schatten(cls, p: float):
        return cls(SCHATTEN, p=float(p))

    @classmethod
    def pd_test(cls, eps: Optional[float] = None):
        return cls(PD_TEST, eps=eps)


def _kind(kind) -> SpectralFunctionKind:
    return kind if isinstance(kind, SpectralFunctionKind) else SpectralFunctionKind(kind)


@dataclass(frozen=True)
class PlanParameters:
    """Probe count ``m`` and degree ``n`` with the ellipse data they came from.

    ``interval`` is the interval the engine runs on, which differs from the
    caller's interval for the log-determinant (normalised) and the Schatten
    norm (squared singular values).
    """

    m: int
    n: int
    rho: float
    U: float
    L: float
    interval: SpectralInterval
    extras: dict = field(default_factory=dict, compare=False)

    @property
    def bound(self) -> EllipseBound:
        return EllipseBound(self.rho, self.U, self.L)


def _check_open_unit(name, value):
    if not 0 < value < 1:
        raise PreconditionError(f"{name} must lie in (0, 1), got {value}")


def _pd_alpha(d: int, eps: float) -> float:
    return math.log(16 * d) / eps


def ellipse_bound(kind, interval, d: Optional[int] = None,
                  eps: Optional[float] = None) -> tuple[EllipseBound, SpectralInterval]:
    """Bernstein-ellipse constants ``(rho, U, L)`` for ``kind`` and the engine interval.

    For the Schatten norm ``interval`` holds singular-value bounds
    ``[s_min, s_max]``; for the PD test it must be ``[-1, 1]`` and ``d``, ``eps``
    are required.
    """
    kind = _kind(kind)
    interval = _as_interval(interval)
    a, b = interval
    if kind.tag != PD_TEST and not a < b:
        raise PreconditionError(f"planner needs a < b, got [{a}, {b}]")

    if kind.tag == LOGDET:
        if a <= 0:
            raise PreconditionError("log-determinant needs a > 0")
        delta = a / (a + b)
        s2, s1 = math.sqrt(2 - delta), math.sqrt(delta)
        rho = (s2 + s1) / (s2 - s1)
        U = 5 * math.log(2 / delta)
        L = -math.log1p(-delta)
        return EllipseBound(rho, U, L), SpectralInterval(delta, 1 - delta)

    if kind.tag == TRACE_INVERSE:
        if a <= 0:
            raise PreconditionError("trace of the inverse needs a > 0")
        rho = 2 / (math.sqrt(2 * b / a - 1) - 1) + 1
        return EllipseBound(rho, 2 / a, 1 / b), interval

    if kind.tag == ESTRADA:
        w = b - a
        rho = 4 * math.pi / w + 1
        U = math.exp((math.sqrt(16 * math.pi**2 + w**2) + (b + a)) / 2)
        return EllipseBound(rho, U, math.exp(a)), interval

    if kind.tag == SCHATTEN:
        if a <= 0:
            raise PreconditionError("Schatten norm needs sigma_min > 0")
        kappa = b / a
        rho = (kappa + 1) / (kappa - 1)
        U = (a * a + b * b) ** (kind.p / 2)
        return EllipseBound(rho, U, a**kind.p), SpectralInterval(a * a, b * b)

    # PD test
    if (a, b) != (-1.0, 1.0):
        raise PreconditionError("PD test runs on the normalised interval [-1, 1]")
    eps = kind.eps if eps is None else eps
    if d is None or eps is None:
        raise PreconditionError("PD test planning needs the dimension d and eps")
    _check_open_unit("eps", eps)
    alpha = _pd_alpha(d, eps)
    rho = (math.pi + math.sqrt(math.pi**2 + 16 * alpha**2)) / (4 * alpha)
    # no lower bound on |f| enters the PD analysis; L is its per-eigenvalue
    # accuracy target 1/(8d)
    return EllipseBound(rho, 1.0, 1.0 / (8 * d)), interval


def plan_parameters(kind, interval, eps: float, zeta: float,
                    d: Optional[int] = None) -> PlanParameters:
    """Probe count and degree guaranteeing an ``eps``-relative error w.p. ``1 - zeta``.

    For the four sign-definite sums this instantiates

        m >= 54 eps^-2 log(2/zeta),
        n >= log(8 U / (eps (rho - 1) L)) / log(rho)

    with the application's ``(rho, U, L)``; the guarantee is on the spectral
    sum evaluated by the engine (for the log-determinant, that of
    ``A / (a + b)``). For the PD test ``m >= 24 log(2/zeta)`` and ``n`` follows
    the degree bound of the tester.
    """
    kind = _kind(kind)
    _check_open_unit("zeta", zeta)
    if kind.tag == PD_TEST:
        eps = kind.eps if kind.eps is not None else eps
    _check_open_unit("eps", eps)
    bound, engine_interval = ellipse_bound(kind, interval, d=d, eps=eps)

    if kind.tag == PD_TEST:
        lg = math.log(16 * d)
        m = math.ceil(24 * math.log(2 / zeta))
        n_real = ((math.log(32 * math.sqrt(2) * lg) + math.log(1 / eps)
                   - math.log(math.pi / (8 * d)))
                  / math.log1p(math.pi * eps / (4 * lg)))
    else:
        m = math.ceil(54 / eps**2 * math.log(2 / zeta))
        log_ratio = math.log(8 / (eps * (bound.rho - 1))) + math.log(bound.U) - math.log(bound.L)
        n_real = log_ratio / math.log(bound.rho)
    n = max(1, math.ceil(n_real))
    return PlanParameters(m, n, bound.rho, bound.U, bound.L, engine_interval,
                          extras={"n_bound": n_real})


# --------------------------------------------------------------------------- #
#                                estimators                                   #
# --------------------------------------------------------------------------- #

def logdet_pd(A: MatrixLike, interval, m: int = 50, n: int = 25, seed: int = 0,
              distribution: str = "rademacher", threads: Optional[int] = 1) -> EstimateResult:
    """Estimate ``log det A`` for symmetric positive definite ``A`` with spectrum in
    ``[a, b]``, ``a > 0``.

    The engine runs on ``A / (a + b)`` whose spectrum lies in
    ``[a/(a+b), b/(a+b)]`` and ``d log(a + b)`` is added back.
    """
    interval = _as_interval(interval)
    a, b = interval
    if a <= 0:
        raise PreconditionError(f"log-determinant needs a positive lower bound, got a={a}")
    op = as_operator(A)
    s = a + b
    scaled = shifted_scaled(op, 1.0 / s)
    res = spectral_sum(scaled, np.log, (a / s, b / s), m=m, n=n, seed=seed,
                       distribution=distribution, threads=threads)
    return res.shifted(offset=op.dim * math.log(s))


def logdet_general(C: SparseMatrix, sigma_min: float, sigma_max: float, m: int = 50,
                   n: int = 25, seed: int = 0, distribution: str = "rademacher",
                   threads: Optional[int] = 1) -> EstimateResult:
    """Estimate ``log |det C|`` for square non-singular ``C`` with singular values in
    ``[sigma_min, sigma_max]`` as half the log-determinant of ``C^T C``."""
    if not isinstance(C, SparseMatrix):
        C = SparseMatrix(C)
    if C.dim_rows != C.dim_cols:
        raise PreconditionError(f"log|det C| needs a square matrix, got {C.shape}")
    if sigma_min <= 0:
        raise PreconditionError(f"sigma_min must be positive, got {sigma_min}")
    res = logdet_pd(gram_operator(C), (sigma_min**2, sigma_max**2), m=m, n=n, seed=seed,
                    distribution=distribution, threads=threads)
    return res.shifted(scale=0.5)


def _reciprocal(x):
    return 1.0 / x


def trace_inverse(A: MatrixLike, interval, m: int = 50, n: int = 25, seed: int = 0,
                  distribution: str = "rademacher", threads: Optional[int] = 1) -> EstimateResult:
    """Estimate ``tr(A^-1)`` for symmetric positive definite ``A`` with spectrum in ``[a, b]``."""
    interval = _as_interval(interval)
    if interval.a <= 0:
        raise PreconditionError(f"trace of the inverse needs a > 0, got a={interval.a}")
    return spectral_sum(A, _reciprocal, interval, m=m, n=n, seed=seed,
                        distribution=distribution, threads=threads)


def estrada(A_G: MatrixLike, interval=None, m: int = 50, n: int = 25, seed: int = 0,
            distribution: str = "rademacher", threads: Optional[int] = 1) -> EstimateResult:
    """Estimate the Estrada index ``sum_i exp(lambda_i)`` of an adjacency matrix.

    Without ``interval`` the bound ``[-D, D]`` is used, ``D`` the maximum
    absolute row sum (the maximum degree for a 0/1 adjacency matrix).
    """
    if interval is None:
        if isinstance(A_G, LinearOperator):
            raise PreconditionError("an interval is required for a matrix-free operator")
        delta = infinity_norm(A_G if isinstance(A_G, SparseMatrix) else SparseMatrix(A_G))
        interval = (-delta, delta)
    return spectral_sum(A_G, np.exp, interval, m=m, n=n, seed=seed,
                        distribution=distribution, threads=threads)


def schatten_power_sum(M: SparseMatrix, p: float, sigma_min: float, sigma_max: float,
                       m: int = 50, n: int = 25, seed: int = 0,
                       distribution: str = "rademacher",
                       threads: Optional[int] = 1) -> EstimateResult:
    """Estimate ``||M||_p^p = sum_i sigma_i^p``.

    The Gram operator is taken on the smaller side of ``M``.
    """
    if not p >= 1:
        raise PreconditionError(f"Schatten norm needs p >= 1, got {p}")
    if sigma_min <= 0:
        raise PreconditionError(f"sigma_min must be positive, got {sigma_min}")
    if not isinstance(M, SparseMatrix):
        M = SparseMatrix(M)
    gram = gram_operator(M.transpose() if M.dim_rows < M.dim_cols else M)
    half_p = p / 2.0

    def power(x):
        return np.power(x, half_p)

    return spectral_sum(gram, power, (sigma_min**2, sigma_max**2), m=m, n=n, seed=seed,
                        distribution=distribution, threads=threads)


def schatten_norm(M: SparseMatrix, p: float, sigma_min: float, sigma_max: float,
                  m: int = 50, n: int = 25, seed: int = 0, distribution: str = "rademacher",
                  threads: Optional[int] = 1) -> float:
    """Estimate the Schatten ``p``-norm ``(sum_i sigma_i^p)^(1/p)``."""
    res = schatten_power_sum(M, p, sigma_min, sigma_max, m=m, n=n, seed=seed,
                             distribution=distribution, threads=threads)
    if res.estimate < 0:
        raise ArithmeticError(f"negative estimate {res.estimate} of ||M||_p^p; "
                              "check the singular-value bounds or raise n")
    return res.estimate ** (1.0 / p)


# --------------------------------------------------------------------------- #
#                        positive-definiteness testing                        #
# --------------------------------------------------------------------------- #

class PdNormalization(NamedTuple):
    operator: LinearOperator
    eps: float
    zeta: float


@dataclass
class PdVerdict:
    verdict: str
    gamma: float
    threshold: float = PD_THRESHOLD
    eps: float = float("nan")
    result: Optional[EstimateResult] = None

    @property
    def is_pd(self) -> bool:
        return self.verdict == "PD"


def normalize_for_pd(A: MatrixLike, eps: float, zeta: float,
                     rng: np.random.Generator) -> PdNormalization:
    """Map ``A`` to ``B = (A - (lam eps/2) I) / ((1 + eps/2) lam)`` with ``||B||_2 <= 1``.

    ``lam = lam' / (1 - eps/2)`` where ``lam'`` is the power-iteration estimate of
    ``||A||_2``. Testing ``B`` with ``eps/(1 + eps/2)`` and ``zeta/2`` answers the
    question for ``A`` with ``eps`` and ``zeta``.
    """
    _check_open_unit("eps", eps)
    _check_open_unit("zeta", zeta)
    op = as_operator(A)
    iters = power_iteration_count(op.dim, eps, zeta)
    lam_est = power_iteration_top(op, iters, rng)
    if not lam_est > 0:
        raise DegenerateInputError("power iteration returned a zero norm; the operator is zero")
    lam = lam_est / (1 - eps / 2)
    scale = 1.0 / ((1 + eps / 2) * lam)
    B = shifted_scaled(op, scale, -(eps / 2) / (1 + eps / 2))
    return PdNormalization(B, eps / (1 + eps / 2), zeta / 2)


def pd_step_function(d: int, eps: float):
    """Smoothed reverse step ``(1 + tanh(-alpha x)) / 2`` with ``alpha = log(16 d)/eps``."""
    alpha = _pd_alpha(d, eps)

    def f(x):
        return 0.5 * (1.0 + np.tanh(-alpha * np.asarray(x, dtype=np.float64)))

    return f


def _zeta_from_m(m: int) -> float:
    # inverts m = 24 log(2/zeta)
    return min(2.0 * math.exp(-m / 24.0), 0.999)


def test_pd(A: MatrixLike, eps: float, m: int = 50, n: int = 25, seed: int = 0,
            assume_normalized: bool = False, distribution: str = "rademacher",
            threads: Optional[int] = 1) -> PdVerdict:
    """Property test of positive definiteness.

    Answers PD when ``lambda_min >= eps/2`` and NOT_PD when
    ``lambda_min <= -eps/2`` (normalised scale), each with high probability;
    either answer may come back in between.
    """
    _check_open_unit("eps", eps)
    op = as_operator(A)
    if not assume_normalized:
        zeta = _zeta_from_m(m)
        rng = np.random.default_rng(np.random.SeedSequence(int(seed) & ((1 << 64) - 1),
                                                           spawn_key=(1,)))
        op, eps, _ = normalize_for_pd(op, eps, zeta, rng)
    f = pd_step_function(op.dim, eps)
    res = spectral_sum(op, f, (-1.0, 1.0), m=m, n=n, seed=seed,
                       distribution=distribution, threads=threads)
    verdict = "PD" if res.estimate < PD_THRESHOLD else "NOT_PD"
    return PdVerdict(verdict, res.estimate, PD_THRESHOLD, eps, res)


test_pd.__test__ = False  # not a pytest test despite its name
