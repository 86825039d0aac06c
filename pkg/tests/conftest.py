"""Shared builders and independent reference implementations for the tests.

The reference helpers here deliberately avoid the package's own kernels
(dense numpy or scipy.sparse arithmetic, freshly coded logic) so they can
serve as oracles.
"""

import time

import numpy as np
import pytest
import scipy.sparse

from gpcg import (BearingSpec, BoundQP, SolverConfig, SparseMatrixCSR,
                  generate, solve)


# ---------------------------------------------------------------------------
# instance builders
# ---------------------------------------------------------------------------

def dense_spd(rng, n, shift=None):
    """Well-conditioned dense SPD matrix."""
    B = rng.standard_normal((n, n))
    return B @ B.T + (n if shift is None else shift) * np.eye(n)


def random_sparse_spd(rng, n, extra_per_row=2):
    """Sparse symmetric strictly diagonally dominant matrix (hence SPD)."""
    rows = [np.arange(n)]
    cols = [np.arange(n)]
    vals = [np.zeros(n)]
    count = max(1, extra_per_row * n // 2)
    i = rng.integers(0, n, size=count)
    j = rng.integers(0, n, size=count)
    keep = i != j
    i, j = i[keep], j[keep]
    v = rng.uniform(-1.0, 1.0, size=i.size)
    rows.append(np.concatenate([i, j]))
    cols.append(np.concatenate([j, i]))
    vals.append(np.concatenate([v, v]))
    M = np.zeros((n, n))
    np.add.at(M, (np.concatenate(rows), np.concatenate(cols)),
              np.concatenate(vals))
    M[np.arange(n), np.arange(n)] = np.abs(M).sum(axis=1) + rng.uniform(
        0.5, 1.5, size=n)
    return SparseMatrixCSR.from_dense(M, symmetric=True), M


def random_bound_qp(rng, n, inf_prob=0.25):
    """Random SPD problem with a mix of finite and infinite bounds."""
    A = dense_spd(rng, n)
    b = rng.uniform(-2.0 * n, 2.0 * n, size=n)
    l = rng.uniform(-1.5, 0.5, size=n)
    u = l + rng.uniform(0.1, 2.0, size=n)
    l[rng.random(n) < inf_prob] = -np.inf
    u[rng.random(n) < inf_prob] = np.inf
    return BoundQP(SparseMatrixCSR.from_dense(A, symmetric=True), b,
                   float(rng.uniform(-1, 1)), l, u)


def unconstrained_qp(rng, n):
    A = dense_spd(rng, n)
    b = rng.uniform(-n, n, size=n)
    return BoundQP(SparseMatrixCSR.from_dense(A, symmetric=True), b, 0.0,
                   np.full(n, -np.inf), np.full(n, np.inf))


def hand_qp():
    """Two variables, q(x) = 0.5|x|^2 + (-3, 1).x over [0, 2]^2; the
    minimizer (2, 0) is checkable by hand from the gradient signs."""
    A = SparseMatrixCSR.from_dense(np.eye(2), symmetric=True)
    return BoundQP(A, np.array([-3.0, 1.0]), 0.0, np.zeros(2),
                   np.full(2, 2.0))


# ---------------------------------------------------------------------------
# independent reference computations
# ---------------------------------------------------------------------------

def scipy_csr(M: SparseMatrixCSR):
    return scipy.sparse.csr_matrix((M.data, M.indices, M.indptr),
                                   shape=(M.nrows, M.ncols))


def reference_pg_norm(qp: BoundQP, x: np.ndarray) -> float:
    """Projected-gradient norm recomputed with scipy arithmetic."""
    g = scipy_csr(qp.A) @ x + qp.b
    pg = np.array(g)
    for i in range(qp.n):
        if qp.l[i] == qp.u[i]:
            pg[i] = 0.0
        elif x[i] == qp.l[i]:
            pg[i] = min(g[i], 0.0)
        elif x[i] == qp.u[i]:
            pg[i] = max(g[i], 0.0)
    return float(np.sqrt(np.sum(pg * pg)))


def reference_objective(qp: BoundQP, x: np.ndarray) -> float:
    A = qp.A.to_dense()
    return float(0.5 * x @ A @ x + qp.b @ x + qp.c)


# ---------------------------------------------------------------------------
# cached benchmark runs shared across acceptance tests
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def bearing_runs():
    cache = {}

    def get(nx, eps, precond, blocks=1):
        key = (nx, eps, precond, blocks)
        if key not in cache:
            qp = generate(BearingSpec(nx, nx, eps))
            cfg = SolverConfig(precond=precond, blocks=blocks)
            t0 = time.perf_counter()
            outcome = solve(qp, qp.l, cfg)
            elapsed = time.perf_counter() - t0
            cache[key] = (qp, outcome, elapsed)
        return cache[key]

    return get
