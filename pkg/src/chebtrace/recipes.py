"""Synthetic test matrices.

``spd_recipe``
    Sparse symmetric matrix with standard normal off-diagonals and diagonal
    set to the absolute row sum plus a margin, hence positive definite with
    ``lambda_min >= margin`` (Gershgorin).
``nonsymmetric_recipe``
    Sparse square matrix with ``row_nnz`` standard normal entries per row.
``random_regular_graph``
    Adjacency matrix of a random ``degree``-regular graph.
``pd_test_matrix``
    Symmetric matrix with spectrum in ``[lambda_min, lambda_max]`` and known
    eigenvalues, for the positive-definiteness tester.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from .linop import SparseMatrix

__all__ = [
    "spd_recipe",
    "nonsymmetric_recipe",
    "random_regular_graph",
    "PdTestMatrix",
    "pd_test_matrix",
]


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _offdiag_pairs(d: int, count: int, rng: np.random.Generator):
    i = rng.integers(0, d, size=count)
    # j uniform over the other d - 1 indices
    j = rng.integers(0, d - 1, size=count)
    j += j >= i
    return i, j


def spd_recipe(d: int, row_nnz: int = 10, margin: float = 0.1, seed=0) -> SparseMatrix:
    """Diagonally dominant sparse SPD matrix with about ``row_nnz`` entries per row.

    ``d (row_nnz - 1) / 2`` off-diagonal positions are drawn uniformly with
    standard normal values and mirrored, so each row holds ``row_nnz - 1``
    off-diagonals on average; the diagonal is ``sum_j |A_ij| + margin``.
    """
    if d < 1:
        raise ValueError("dimension must be positive")
    if row_nnz < 1:
        raise ValueError("row_nnz must be positive")
    if not margin > 0:
        raise ValueError("margin must be positive")
    rng = _rng(seed)
    count = (d * (row_nnz - 1)) // 2 if d > 1 else 0
    i, j = _offdiag_pairs(d, count, rng) if count else (np.empty(0, int), np.empty(0, int))
    vals = rng.standard_normal(count)
    # accumulate in the upper triangle, then mirror: exactly symmetric
    lo, hi = np.minimum(i, j), np.maximum(i, j)
    upper = sp.csr_array(sp.coo_array((vals, (lo, hi)), shape=(d, d)))
    upper.sum_duplicates()
    off = upper + upper.T
    diag = np.asarray(abs(off).sum(axis=1)).ravel() + margin
    return SparseMatrix(off + sp.diags_array(diag, format="csr"), symmetric=True)


def nonsymmetric_recipe(d: int, row_nnz: int = 10, seed=0) -> SparseMatrix:
    """Square sparse matrix with ``row_nnz`` distinct random positions per row,
    standard normal values."""
    if d < 1:
        raise ValueError("dimension must be positive")
    k = min(int(row_nnz), d)
    rng = _rng(seed)
    # distinct columns per row: redraw the rows that hit a repeat
    cols = rng.integers(0, d, size=(d, k))
    while True:
        srt = np.sort(cols, axis=1)
        bad = np.flatnonzero((srt[:, 1:] == srt[:, :-1]).any(axis=1))
        if bad.size == 0:
            break
        cols[bad] = rng.integers(0, d, size=(bad.size, k))
    rows = np.repeat(np.arange(d), k)
    vals = rng.standard_normal(d * k)
    A = sp.csr_array(sp.coo_array((vals, (rows, cols.ravel())), shape=(d, d)))
    return SparseMatrix(A)


def random_regular_graph(d: int, degree: int = 10, seed=0) -> SparseMatrix:
    """0/1 adjacency matrix of a uniformly random ``degree``-regular graph."""
    import networkx as nx

    if isinstance(seed, np.random.Generator):
        seed = int(seed.integers(0, 2**31))
    G = nx.random_regular_graph(degree, d, seed=seed)
    A = nx.to_scipy_sparse_array(G, nodelist=range(d), dtype=np.float64, format="csr")
    return SparseMatrix(A, symmetric=True)


class PdTestMatrix(NamedTuple):
    matrix: SparseMatrix
    eigenvalues: np.ndarray  # ascending


def pd_test_matrix(d: int, lambda_min: float, lambda_max: float = 0.99, block: int = 10,
                   seed=0, permute: bool = True) -> PdTestMatrix:
    """Random sparse symmetric matrix with extreme eigenvalues exactly
    ``lambda_min`` and ``lambda_max``.

    The matrix is block diagonal with ``block x block`` GOE blocks (so about
    ``block`` nonzeros per row), its spectrum mapped affinely onto
    ``[lambda_min, lambda_max]``, then symmetrically permuted.
    """
    if not lambda_min < lambda_max:
        raise ValueError("need lambda_min < lambda_max")
    if d < 2:
        raise ValueError("dimension must be at least 2")
    rng = _rng(seed)
    sizes = [block] * (d // block) + ([d % block] if d % block else [])
    blocks = []
    for s in sizes:
        G = rng.standard_normal((s, s))
        blocks.append(np.linalg.eigh((G + G.T) / 2.0))
    ev_all = np.concatenate([w for w, _ in blocks])
    lo, hi = ev_all.min(), ev_all.max()
    slope = (lambda_max - lambda_min) / (hi - lo)

    mats, eigs = [], []
    for w, Q in blocks:
        w = lambda_min + slope * (w - lo)
        mats.append((Q * w) @ Q.T)
        eigs.append(w)
    A = sp.block_diag(mats, format="csr")
    eigs = np.sort(np.concatenate(eigs))
    # pin the extremes exactly (the affine map is exact up to rounding)
    eigs[0], eigs[-1] = lambda_min, lambda_max
    if permute:
        perm = rng.permutation(d)
        A = A[perm][:, perm]
    A = sp.csr_array(A)
    A = (A + A.T) * 0.5
    return PdTestMatrix(SparseMatrix(A, symmetric=True), eigs)
