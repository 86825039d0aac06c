"""Exception types shared across the solver components."""


class GPCGError(Exception):
    """Base class for solver-specific failures."""


class AlreadyStationary(GPCGError):
    """Requested a step size along a zero direction."""


class NotConvexError(GPCGError):
    """A curvature product came out nonpositive; the matrix is not SPD."""


class SearchFailed(GPCGError):
    """A projected backtracking search exhausted its halving budget."""


class NoFreeVariables(GPCGError):
    """Reduced system requested while every variable sits on a bound."""


class ZeroPivot(GPCGError):
    """Incomplete factorization hit an exactly zero pivot (no pivoting is done)."""

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"zero pivot in row {row}")
