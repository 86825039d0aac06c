"""Gradient-projection phase: exact first step size along the projected
gradient, projected backtracking search, and a loop that stops once the
active set settles or the per-iterate decrease stalls.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import AlreadyStationary, NotConvexError, SearchFailed
from .linalg import dot, mat_vec, norm2
from .model import (BoundQP, _active_mask, gradient, objective, project,
                    projected_gradient)


class GPStop(enum.Enum):
    ACTIVE_SET_SETTLED = "active_set_settled"
    INSUFFICIENT_PROGRESS = "insufficient_progress"
    CONVERGED = "converged"
    ITERATION_CAP = "iteration_cap"


@dataclass
class GPIterate:
    """One accepted iterate of the phase (for traces and audits)."""
    index: int
    q: float
    step: float
    halvings: int
    n_active: int
    pg_norm: float


@dataclass
class GPResult:
    x_out: np.ndarray
    iterates_taken: int
    termination: GPStop
    decreases: np.ndarray
    records: list[GPIterate] = field(default_factory=list)


def cauchy_step_size(qp: BoundQP, y: np.ndarray, d: np.ndarray) -> float:
    """Exact minimizer of the quadratic along -d from y:
    <grad q(y), d> / <d, Ad>."""
    if not d.any():
        raise AlreadyStationary("direction is zero")
    g = gradient(qp, y)
    curvature = dot(d, mat_vec(qp.A, d))
    if curvature <= 0.0:
        raise NotConvexError(f"curvature along the step is {curvature}")
    return dot(g, d) / curvature


def projected_search_gp(qp: BoundQP, y: np.ndarray, g: np.ndarray,
                        alpha0: float, mu: float,
                        max_halvings: int = 50) -> tuple[np.ndarray, float, int]:
    """Backtrack over alpha0 * (1/2)^j until the projected full-gradient step
    satisfies the sufficient decrease test."""
    if not 0.0 < mu < 0.5:
        raise ValueError("sufficient decrease constant must lie in (0, 1/2)")
    if alpha0 <= 0.0:
        raise ValueError("initial step size must be positive")
    q_y = objective(qp, y)
    alpha = alpha0
    for halvings in range(max_halvings + 1):
        y_trial = project(qp, y - alpha * g)
        if objective(qp, y_trial) <= q_y + mu * dot(g, y_trial - y):
            return y_trial, alpha, halvings
        alpha *= 0.5
    raise SearchFailed(f"no acceptable step within {max_halvings} halvings")


def gp_phase(qp: BoundQP, x: np.ndarray, eta1: float, mu: float, tau: float,
             cap: int, max_halvings: int = 50) -> GPResult:
    """Run projected-gradient iterates from x until the active set repeats,
    the decrease falls below eta1 times the best decrease so far, the
    convergence test fires, or the iterate cap is hit."""
    if not 0.0 < eta1 < 1.0:
        raise ValueError("progress tolerance must lie in (0, 1)")
    y = x
    q_y = objective(qp, y)
    g = gradient(qp, y)
    pg_norm = norm2(projected_gradient(qp, y, g))
    decreases: list[float] = []
    records: list[GPIterate] = []
    if pg_norm <= tau:
        return GPResult(y, 0, GPStop.CONVERGED, np.zeros(0), records)
    prev_active = _active_mask(qp, y)
    termination = GPStop.ITERATION_CAP
    for j in range(1, cap + 1):
        pg = projected_gradient(qp, y, g)
        alpha0 = cauchy_step_size(qp, y, pg)
        y_next, alpha, halvings = projected_search_gp(qp, y, g, alpha0, mu,
                                                      max_halvings)
        q_next = objective(qp, y_next)
        decreases.append(q_y - q_next)
        y, q_y = y_next, q_next
        g = gradient(qp, y)
        pg_norm = norm2(projected_gradient(qp, y, g))
        cur_active = _active_mask(qp, y)
        records.append(GPIterate(j, q_y, alpha, halvings,
                                 int(cur_active.sum()), pg_norm))
        if pg_norm <= tau:
            termination = GPStop.CONVERGED
            break
        if np.array_equal(cur_active, prev_active):
            termination = GPStop.ACTIVE_SET_SETTLED
            break
        if j >= 2 and decreases[-1] <= eta1 * max(decreases[:-1]):
            termination = GPStop.INSUFFICIENT_PROGRESS
            break
        prev_active = cur_active
    return GPResult(y, len(decreases), termination,
                    np.asarray(decreases), records)
