"""Bound-constrained quadratic program and its optimality machinery.

The objective is q(x) = 0.5 x'Ax + b'x + c with A symmetric positive
definite, minimized over the box l <= x <= u.  Bounds may be infinite;
equal bounds (fixed variables) are allowed and count as permanently active
with a zero projected-gradient component.
"""

from __future__ import annotations

import numpy as np

from .linalg import (IndexSet, SparseMatrixCSR, as_vector, dot, mat_vec,
                     norm2, pointwise_median)


class BoundQP:
    """Problem data (A, b, c, l, u); immutable after construction."""

    __slots__ = ("A", "b", "c", "l", "u")

    def __init__(self, A: SparseMatrixCSR, b, c: float, l, u, validate: bool = True):
        self.A = A
        self.b = as_vector(b)
        self.c = float(c)
        self.l = as_vector(l)
        self.u = as_vector(u)
        if validate:
            self._validate()

    def _validate(self):
        n = self.A.nrows
        if self.A.ncols != n:
            raise ValueError("matrix must be square")
        if not self.A.symmetric:
            raise ValueError("matrix must be flagged symmetric")
        for name, v in (("b", self.b), ("l", self.l), ("u", self.u)):
            if v.shape[0] != n:
                raise ValueError(f"{name} has length {v.shape[0]}, expected {n}")
        if not np.isfinite(self.b).all():
            raise ValueError("linear term must be finite")
        if (self.l > self.u).any():
            raise ValueError("lower bound exceeds upper bound")
        if (self.l == np.inf).any() or (self.u == -np.inf).any():
            raise ValueError("bounds leave an empty feasible interval")

    @property
    def n(self) -> int:
        return self.A.nrows

    def __repr__(self) -> str:
        return f"BoundQP(n={self.n}, nnz={self.A.nnz})"


def _check_dim(qp: BoundQP, x: np.ndarray):
    if x.shape[0] != qp.n:
        raise ValueError(f"vector has length {x.shape[0]}, expected {qp.n}")


def _check_feasible(qp: BoundQP, x: np.ndarray):
    _check_dim(qp, x)
    if ((x < qp.l) | (x > qp.u)).any():
        raise ValueError("point is infeasible")


def objective(qp: BoundQP, x: np.ndarray) -> float:
    _check_dim(qp, x)
    return 0.5 * dot(x, mat_vec(qp.A, x)) + dot(qp.b, x) + qp.c


def gradient(qp: BoundQP, x: np.ndarray) -> np.ndarray:
    _check_dim(qp, x)
    return mat_vec(qp.A, x) + qp.b


def project(qp: BoundQP, x: np.ndarray) -> np.ndarray:
    _check_dim(qp, x)
    return pointwise_median(qp.l, qp.u, x)


def projected_gradient(qp: BoundQP, x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Gradient with components clipped at active bounds; zero exactly at
    optimal points."""
    _check_feasible(qp, x)
    at_l = x == qp.l
    at_u = x == qp.u
    pg = g.copy()
    only_l = at_l & ~at_u
    only_u = at_u & ~at_l
    pg[only_l] = np.minimum(g[only_l], 0.0)
    pg[only_u] = np.maximum(g[only_u], 0.0)
    pg[at_l & at_u] = 0.0
    return pg


def _active_mask(qp: BoundQP, x: np.ndarray) -> np.ndarray:
    return (x == qp.l) | (x == qp.u)


def active_set(qp: BoundQP, x: np.ndarray) -> IndexSet:
    """Indices sitting exactly on a bound (floating-point equality)."""
    _check_feasible(qp, x)
    return IndexSet.from_mask(_active_mask(qp, x))


def free_set(qp: BoundQP, x: np.ndarray) -> IndexSet:
    """Complement of the active set."""
    _check_feasible(qp, x)
    return IndexSet.from_mask(~_active_mask(qp, x))


def _binding_mask(qp: BoundQP, x: np.ndarray, g: np.ndarray) -> np.ndarray:
    return ((x == qp.l) & (g >= 0.0)) | ((x == qp.u) & (g <= 0.0))


def binding_set(qp: BoundQP, x: np.ndarray, g: np.ndarray) -> IndexSet:
    """Active indices whose gradient sign certifies staying on the bound."""
    _check_feasible(qp, x)
    return IndexSet.from_mask(_binding_mask(qp, x, g))


def converged(qp: BoundQP, x: np.ndarray, g: np.ndarray, tau: float) -> bool:
    """True when the Euclidean norm of the projected gradient is <= tau."""
    if tau <= 0.0:
        raise ValueError("tolerance must be positive")
    return norm2(projected_gradient(qp, x, g)) <= tau
