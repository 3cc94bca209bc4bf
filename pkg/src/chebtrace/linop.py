"""Sparse storage, Matrix Market I/O, linear operators and eigenvalue bounds.

Everything downstream only needs ``dim`` and ``apply(x)``; the concrete
sparse matrix is one way (the usual one) to provide that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator, Union

import numpy as np
import scipy.sparse as sp

from .errors import MatrixMarketError, PreconditionError, UnsupportedFormatError

__all__ = [
    "SparseMatrix",
    "LinearOperator",
    "SpectralInterval",
    "as_operator",
    "shifted_scaled",
    "load_matrix_market",
    "save_matrix_market",
    "matvec",
    "gram_operator",
    "gershgorin_interval",
    "infinity_norm",
    "one_norm",
    "power_iteration_count",
    "power_iteration_top",
]


@dataclass(frozen=True)
class SpectralInterval:
    """Closed interval ``[a, b]`` assumed to contain every eigenvalue."""

    a: float
    b: float

    def __post_init__(self):
        a, b = float(self.a), float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise PreconditionError(f"interval bounds must be finite, got [{a}, {b}]")
        if a > b:
            raise PreconditionError(f"empty interval: a={a} > b={b}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __iter__(self) -> Iterator[float]:
        yield self.a
        yield self.b

    @property
    def width(self) -> float:
        return self.b - self.a

    @property
    def is_degenerate(self) -> bool:
        return self.a == self.b

    def contains(self, x, tol: float = 0.0) -> bool:
        x = np.asarray(x)
        return bool(np.all((x >= self.a - tol) & (x <= self.b + tol)))


def _as_interval(interval) -> SpectralInterval:
    if isinstance(interval, SpectralInterval):
        return interval
    a, b = interval
    return SpectralInterval(a, b)


class SparseMatrix:
    """Immutable compressed-row real matrix.

    Parameters
    ----------
    data : scipy sparse matrix/array or dense array
        Converted to CSR with summed duplicates and sorted column indices.
    symmetric : bool
        Marks storage that was declared symmetric and has been expanded to
        both triangles.
    """

    __slots__ = ("_csr", "_csr_t", "symmetric")

    def __init__(self, data, symmetric: bool = False):
        csr = sp.csr_array(data, dtype=np.float64)
        csr.sum_duplicates()
        csr.sort_indices()
        for arr in (csr.data, csr.indices, csr.indptr):
            arr.flags.writeable = False
        self._csr = csr
        self._csr_t = None
        self.symmetric = bool(symmetric)

    @property
    def csr(self) -> sp.csr_array:
        return self._csr

    @property
    def shape(self) -> tuple[int, int]:
        return self._csr.shape

    @property
    def dim_rows(self) -> int:
        return self._csr.shape[0]

    @property
    def dim_cols(self) -> int:
        return self._csr.shape[1]

    @property
    def dim(self) -> int:
        if self.dim_rows != self.dim_cols:
            raise PreconditionError(f"matrix is not square: shape {self.shape}")
        return self.dim_rows

    @property
    def nnz(self) -> int:
        return int(self._csr.nnz)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim_cols,):
            raise ValueError(f"dimension mismatch: matrix {self.shape}, vector {x.shape}")
        return self._csr @ x

    def rmatvec(self, x: np.ndarray) -> np.ndarray:
        """Compute ``A.T @ x``."""
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (self.dim_rows,):
            raise ValueError(f"dimension mismatch: matrix {self.shape}, vector {x.shape}")
        if self._csr_t is None:
            self._csr_t = self._csr.T.tocsr()
        return self._csr_t @ x

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self._csr.T, symmetric=self.symmetric)

    @property
    def T(self) -> "SparseMatrix":
        return self.transpose()

    def diagonal(self) -> np.ndarray:
        return self._csr.diagonal()

    def toarray(self) -> np.ndarray:
        return self._csr.toarray()

    def is_symmetric(self, tol: float = 0.0) -> bool:
        if self.dim_rows != self.dim_cols:
            return False
        diff = (self._csr - self._csr.T).tocsr()
        if diff.nnz == 0:
            return True
        return bool(np.abs(diff.data).max() <= tol)

    def __repr__(self):
        return f"SparseMatrix(shape={self.shape}, nnz={self.nnz}, symmetric={self.symmetric})"


@dataclass(frozen=True)
class LinearOperator:
    """Square operator given only by its action on vectors."""

    dim: int
    apply: Callable[[np.ndarray], np.ndarray]

    def __matmul__(self, x):
        return self.apply(x)


MatrixLike = Union[LinearOperator, SparseMatrix, np.ndarray, sp.sparray, sp.spmatrix]


def as_operator(obj: MatrixLike) -> LinearOperator:
    """Wrap a square matrix (sparse, dense or ``SparseMatrix``) as an operator."""
    if isinstance(obj, LinearOperator):
        return obj
    if isinstance(obj, SparseMatrix):
        return LinearOperator(obj.dim, obj.matvec)
    if sp.issparse(obj):
        return as_operator(SparseMatrix(obj))
    if isinstance(obj, np.ndarray):
        return _dense_operator(obj)
    raise TypeError(f"cannot interpret {type(obj).__name__} as a linear operator")


def _dense_operator(arr: np.ndarray) -> LinearOperator:
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {arr.shape}")
    d = arr.shape[0]

    def apply(x):
        x = np.asarray(x, dtype=np.float64)
        if x.shape != (d,):
            raise ValueError(f"dimension mismatch: operator dim {d}, vector {x.shape}")
        return arr @ x

    return LinearOperator(d, apply)


def shifted_scaled(op: MatrixLike, scale: float, shift: float = 0.0) -> LinearOperator:
    """Operator ``x -> scale * (op x) + shift * x`` without materialising it."""
    op = as_operator(op)
    scale, shift = float(scale), float(shift)

    if shift == 0.0:
        def apply(x):
            return scale * op.apply(x)
    else:
        def apply(x):
            y = op.apply(x)
            y *= scale
            y += shift * x
            return y

    return LinearOperator(op.dim, apply)


def matvec(A: SparseMatrix, x: np.ndarray) -> np.ndarray:
    return A.matvec(x)


def gram_operator(C: SparseMatrix) -> LinearOperator:
    """The PSD operator ``x -> C.T @ (C @ x)`` of dimension ``dim_cols(C)``."""
    if not isinstance(C, SparseMatrix):
        C = SparseMatrix(C)

    def apply(x):
        return C.rmatvec(C.matvec(x))

    return LinearOperator(C.dim_cols, apply)


def _abs_row_sums(A: SparseMatrix) -> np.ndarray:
    return np.asarray(abs(A.csr).sum(axis=1)).ravel()


def gershgorin_interval(A: SparseMatrix) -> SpectralInterval:
    """Union of Gershgorin discs projected on the real line."""
    if not isinstance(A, SparseMatrix):
        A = SparseMatrix(A)
    if A.dim_rows != A.dim_cols:
        raise PreconditionError(f"Gershgorin bound needs a square matrix, got {A.shape}")
    if A.dim_rows == 0:
        raise PreconditionError("empty matrix")
    diag = A.diagonal()
    radii = _abs_row_sums(A) - np.abs(diag)
    # row sums of |A| include |A_ii| exactly once; clip rounding below zero
    radii = np.maximum(radii, 0.0)
    return SpectralInterval(float(np.min(diag - radii)), float(np.max(diag + radii)))


def infinity_norm(A: SparseMatrix) -> float:
    """Maximum absolute row sum."""
    if not isinstance(A, SparseMatrix):
        A = SparseMatrix(A)
    if A.nnz == 0:
        return 0.0
    return float(_abs_row_sums(A).max())


def one_norm(A: SparseMatrix) -> float:
    """Maximum absolute column sum."""
    if not isinstance(A, SparseMatrix):
        A = SparseMatrix(A)
    if A.nnz == 0:
        return 0.0
    return float(np.asarray(abs(A.csr).sum(axis=0)).ravel().max())


def power_iteration_count(d: int, eps: float, zeta: float) -> int:
    """Iterations needed for ``|lam' - ||A||_2| <= (eps/2) ||A||_2`` w.p. ``1 - zeta/2``
    from a Gaussian start (Klein-Lu bound)."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if not (0 < eps < 1 and 0 < zeta < 1):
        raise ValueError("eps and zeta must lie in (0, 1)")
    return math.ceil((2.0 / eps) * (math.log(2 * d) ** 2 + math.log(8.0 / (eps * zeta**2))))


def power_iteration_top(op: MatrixLike, iters: int, rng: np.random.Generator) -> float:
    """Estimate ``||A||_2`` of a symmetric operator by power iteration.

    Returns ``|x^T A x|`` for the normalised final iterate ``x``. The absolute
    value makes the estimate a norm even when the dominant eigenvalue is
    negative.
    """
    op = as_operator(op)
    if iters < 1:
        raise ValueError("iters must be >= 1")
    x = rng.standard_normal(op.dim)
    nrm = np.linalg.norm(x)
    while nrm < 1e-300:
        x = rng.standard_normal(op.dim)
        nrm = np.linalg.norm(x)
    x /= nrm
    for _ in range(iters):
        y = op.apply(x)
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            return 0.0
        x = y / nrm
    return abs(float(x @ op.apply(x)))


# --------------------------------------------------------------------------- #
#                               Matrix Market                                 #
# --------------------------------------------------------------------------- #

_SUPPORTED_SYMMETRY = ("general", "symmetric")


def _parse_header(line: str) -> str:
    tokens = line.strip().split()
    if len(tokens) != 5 or tokens[0].lower() != "%%matrixmarket":
        raise MatrixMarketError(f"bad Matrix Market header: {line.strip()!r}")
    obj, fmt, field, symmetry = (t.lower() for t in tokens[1:])
    if obj != "matrix":
        raise UnsupportedFormatError(f"unsupported object {obj!r}")
    if fmt == "array":
        raise UnsupportedFormatError("array format is not supported; use coordinate")
    if fmt != "coordinate":
        raise MatrixMarketError(f"unknown format {fmt!r}")
    if field != "real":
        raise UnsupportedFormatError(f"unsupported field {field!r}; only 'real' is read")
    if symmetry not in _SUPPORTED_SYMMETRY:
        raise UnsupportedFormatError(f"unsupported symmetry {symmetry!r}")
    return symmetry


def load_matrix_market(path) -> SparseMatrix:
    """Read a ``matrix coordinate real {general|symmetric}`` file.

    Symmetric storage is mirrored into both triangles and duplicate
    coordinates are summed.
    """
    path = Path(path)
    with path.open("r") as fh:
        header = fh.readline()
        if not header:
            raise MatrixMarketError(f"{path}: empty file")
        symmetry = _parse_header(header)

        line = fh.readline()
        while line and (line.startswith("%") or not line.strip()):
            line = fh.readline()
        try:
            rows, cols, nnz = (int(t) for t in line.split())
        except ValueError:
            raise MatrixMarketError(f"{path}: bad size line {line.strip()!r}") from None
        if rows < 1 or cols < 1 or nnz < 0:
            raise MatrixMarketError(f"{path}: bad dimensions {rows} x {cols}, nnz={nnz}")
        if symmetry == "symmetric" and rows != cols:
            raise MatrixMarketError(f"{path}: symmetric matrix must be square")

        try:
            body = np.loadtxt(fh, comments="%", ndmin=2, dtype=np.float64)
        except ValueError as exc:
            raise MatrixMarketError(f"{path}: bad entry line ({exc})") from None

    if body.size == 0:
        body = body.reshape(0, 3)
    if body.shape[1] != 3:
        raise MatrixMarketError(f"{path}: expected 3 columns per entry, got {body.shape[1]}")
    if body.shape[0] != nnz:
        raise MatrixMarketError(f"{path}: header declares {nnz} entries, found {body.shape[0]}")

    ii, jj, vals = body[:, 0], body[:, 1], body[:, 2]
    if not (np.all(ii == np.round(ii)) and np.all(jj == np.round(jj))):
        raise MatrixMarketError(f"{path}: non-integer index")
    ii = ii.astype(np.int64) - 1
    jj = jj.astype(np.int64) - 1
    if nnz and (ii.min() < 0 or ii.max() >= rows or jj.min() < 0 or jj.max() >= cols):
        raise MatrixMarketError(f"{path}: index out of declared bounds {rows} x {cols}")

    if symmetry == "symmetric":
        off = ii != jj
        ii, jj, vals = (
            np.concatenate([ii, jj[off]]),
            np.concatenate([jj, ii[off]]),
            np.concatenate([vals, vals[off]]),
        )
    coo = sp.coo_array((vals, (ii, jj)), shape=(rows, cols))
    return SparseMatrix(coo, symmetric=symmetry == "symmetric")


def save_matrix_market(path, A: SparseMatrix, symmetric: bool | None = None,
                       comment: str | None = None) -> None:
    """Write ``A`` in coordinate real format.

    With ``symmetric`` (default: ``A.symmetric``) only the lower triangle is
    written.
    """
    if not isinstance(A, SparseMatrix):
        A = SparseMatrix(A)
    if symmetric is None:
        symmetric = A.symmetric
    coo = A.csr.tocoo()
    r, c, v = coo.row, coo.col, coo.data
    if symmetric:
        if not A.is_symmetric():
            raise ValueError("matrix is not symmetric")
        keep = r >= c
        r, c, v = r[keep], c[keep], v[keep]
    order = np.lexsort((r, c))
    r, c, v = r[order], c[order], v[order]
    with Path(path).open("w") as fh:
        kind = "symmetric" if symmetric else "general"
        fh.write(f"%%MatrixMarket matrix coordinate real {kind}\n")
        if comment:
            for line in comment.splitlines():
                fh.write(f"% {line}\n")
        fh.write(f"{A.dim_rows} {A.dim_cols} {len(v)}\n")
        if len(v):
            np.savetxt(fh, np.column_stack([r + 1, c + 1, v]), fmt=["%d", "%d", "%.17g"])
