"""Dense reference computations for desk-scale checks (``d`` up to a few thousand)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .errors import PreconditionError
from .linop import LinearOperator, SparseMatrix

__all__ = [
    "DenseSpectrum",
    "to_dense",
    "dense_spectrum",
    "dense_spectral_sum",
    "dense_singular_values",
    "dense_matrix_function",
]


@dataclass(frozen=True)
class DenseSpectrum:
    eigenvalues: np.ndarray
    d: int

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=np.float64)
        if ev.shape != (self.d,):
            raise ValueError("spectrum length does not match dimension")
        if np.any(np.diff(ev) < 0):
            raise ValueError("eigenvalues must be sorted ascending")


def to_dense(A) -> np.ndarray:
    if isinstance(A, SparseMatrix):
        return A.toarray()
    if sp.issparse(A):
        return A.toarray()
    if isinstance(A, LinearOperator):
        return np.column_stack([A.apply(e) for e in np.eye(A.dim)])
    return np.asarray(A, dtype=np.float64)


def _symmetric_dense(A) -> np.ndarray:
    M = to_dense(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {M.shape}")
    return M


def dense_spectrum(A) -> DenseSpectrum:
    M = _symmetric_dense(A)
    return DenseSpectrum(np.linalg.eigvalsh(M), M.shape[0])


def dense_spectral_sum(A, f: Callable) -> float:
    """``sum_i f(lambda_i)`` from a full symmetric eigendecomposition."""
    ev = dense_spectrum(A).eigenvalues
    with np.errstate(all="ignore"):
        vals = np.asarray(f(ev), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        bad = ev[~np.isfinite(vals)][0]
        raise PreconditionError(f"f is not finite at eigenvalue {bad!r}")
    return float(np.sum(vals))


def dense_matrix_function(A, f: Callable) -> np.ndarray:
    """``Q f(Lambda) Q^T`` for symmetric ``A``."""
    M = _symmetric_dense(A)
    ev, Q = np.linalg.eigh(M)
    return (Q * f(ev)) @ Q.T


def dense_singular_values(M) -> np.ndarray:
    """Singular values, descending, as square roots of the Gram eigenvalues
    (computed on the smaller side); tiny negative eigenvalues are clamped."""
    X = to_dense(M)
    G = X @ X.T if X.shape[0] <= X.shape[1] else X.T @ X
    ev = np.linalg.eigvalsh(G)
    ev[ev < 0] = 0.0
    return np.sqrt(ev)[::-1]
