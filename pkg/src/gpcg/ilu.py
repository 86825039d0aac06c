"""Incomplete LU factorization with level-of-fill control.

The symbolic phase grows the input pattern by fill entries whose level
(min over pivots of lev(i,p) + lev(p,j) + 1, originals at level 0) stays
within the requested bound.  The numeric phase runs row-wise Gaussian
elimination restricted to that pattern, with no pivoting.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import ZeroPivot
from .linalg import SparseMatrixCSR


class ILUFactorization:
    """Combined LU factor in CSR; the unit diagonal of L is implicit and the
    stored diagonal entries belong to U."""

    __slots__ = ("n", "indptr", "indices", "data", "diag", "fill_level")

    def __init__(self, n, indptr, indices, data, diag, fill_level):
        self.n = n
        self.indptr = indptr
        self.indices = indices
        self.data = data
        self.diag = diag
        self.fill_level = fill_level

    @property
    def nnz(self) -> int:
        return self.indices.size

    def solve(self, r: np.ndarray) -> np.ndarray:
        """Forward/back substitution: returns (LU)^-1 r."""
        if r.shape[0] != self.n:
            raise ValueError(f"vector has length {r.shape[0]}, expected {self.n}")
        return _kernels.lu_solve(self.indptr, self.indices, self.data,
                                 self.diag, r)


def ilu_k(M: SparseMatrixCSR, k: int) -> ILUFactorization:
    """Factor square M with fill level k (k=0 keeps the input pattern)."""
    if M.nrows != M.ncols:
        raise ValueError("matrix must be square")
    if k < 0:
        raise ValueError("fill level must be nonnegative")
    diag = M.diagonal()
    if (diag == 0.0).any():
        raise ZeroPivot(int(np.flatnonzero(diag == 0.0)[0]))
    lu_indptr, lu_indices, _levels, lu_diag = _kernels.ilu_symbolic(
        M.nrows, M.indptr, M.indices, k)
    lu_data, fail_row = _kernels.ilu_numeric(
        M.nrows, M.indptr, M.indices, M.data, lu_indptr, lu_indices, lu_diag)
    if fail_row >= 0:
        raise ZeroPivot(int(fail_row))
    return ILUFactorization(M.nrows, lu_indptr, lu_indices, lu_data,
                            lu_diag, k)
