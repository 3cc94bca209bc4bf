"""Stochastic Chebyshev estimation of spectral sums ``tr(f(A))``."""

from .chebyshev import (
    ChebyshevInterpolant,
    EllipseBound,
    evaluate,
    interpolate,
    nonnegativity_check,
    uniform_error_bound,
)
from .engine import EstimateResult, estimate_spectral_sum, spectral_sum
from .errors import (
    DegenerateInputError,
    MatrixMarketError,
    PreconditionError,
    UnsupportedFormatError,
)
from .funcs import (
    PdVerdict,
    PlanParameters,
    SpectralFunctionKind,
    estrada,
    logdet_general,
    logdet_pd,
    normalize_for_pd,
    plan_parameters,
    schatten_norm,
    test_pd,
    trace_inverse,
)
from .hutchinson import ProbeConfig, make_probe, plain_trace_estimate
from .linop import (
    LinearOperator,
    SparseMatrix,
    SpectralInterval,
    as_operator,
    gershgorin_interval,
    gram_operator,
    infinity_norm,
    load_matrix_market,
    one_norm,
    save_matrix_market,
)

__version__ = "0.1.0"
