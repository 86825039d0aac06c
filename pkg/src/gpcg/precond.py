"""Preconditioners for the reduced CG solve: identity, inverse diagonal, and
block Jacobi with an incomplete LU solve per diagonal block.

Selection strings: ``none``, ``jacobi``, ``bjacobi-ilu<k>`` (for example
``bjacobi-ilu0`` or ``bjacobi-ilu2``), each optionally suffixed with
``:blocks=<p>``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .ilu import ILUFactorization, ilu_k
from .linalg import IndexSet, SparseMatrixCSR, extract_submatrix


class PrecondKind(enum.Enum):
    NONE = "none"
    POINT_JACOBI = "jacobi"
    BLOCK_JACOBI_ILU = "bjacobi-ilu"


@dataclass(frozen=True)
class PrecondSpec:
    kind: PrecondKind
    fill_level: int = 0
    blocks: int | None = None  # None defers to the solver config

    def label(self) -> str:
        if self.kind is PrecondKind.BLOCK_JACOBI_ILU:
            return f"bjacobi-ilu{self.fill_level}"
        return self.kind.value


def parse_precond(text: str) -> PrecondSpec:
    """Parse a selection string into a PrecondSpec."""
    body, _, suffix = text.strip().partition(":")
    blocks = None
    if suffix:
        key, _, val = suffix.partition("=")
        if key != "blocks" or not val:
            raise ValueError(f"unrecognized preconditioner option {suffix!r}")
        blocks = int(val)
        if blocks < 1:
            raise ValueError("block count must be at least 1")
    if body == "none":
        return PrecondSpec(PrecondKind.NONE, blocks=blocks)
    if body == "jacobi":
        return PrecondSpec(PrecondKind.POINT_JACOBI, blocks=blocks)
    if body.startswith("bjacobi-ilu"):
        try:
            fill = int(body[len("bjacobi-ilu"):])
        except ValueError:
            raise ValueError(f"unrecognized preconditioner {text!r}") from None
        if fill < 0:
            raise ValueError("fill level must be nonnegative")
        return PrecondSpec(PrecondKind.BLOCK_JACOBI_ILU, fill, blocks)
    raise ValueError(f"unrecognized preconditioner {text!r}")


def block_ranges(m: int, blocks: int) -> list[tuple[int, int]]:
    """Contiguous ranges covering [0, m) with sizes differing by at most 1.
    The block count is clamped to m so no block is empty."""
    p = max(1, min(blocks, m))
    base, extra = divmod(m, p)
    ranges = []
    start = 0
    for i in range(p):
        size = base + (1 if i < extra else 0)
        ranges.append((start, start + size))
        start += size
    return ranges


class Preconditioner:
    """Base preconditioner: identity."""

    kind = PrecondKind.NONE

    def apply(self, r: np.ndarray) -> np.ndarray:
        return r.copy()


class PointJacobi(Preconditioner):
    kind = PrecondKind.POINT_JACOBI

    def __init__(self, M: SparseMatrixCSR):
        diag = M.diagonal()
        if (diag <= 0.0).any():
            raise ValueError("point Jacobi requires a strictly positive diagonal")
        self.inv_diag = 1.0 / diag

    def apply(self, r: np.ndarray) -> np.ndarray:
        if r.shape[0] != self.inv_diag.shape[0]:
            raise ValueError("dimension mismatch")
        return r * self.inv_diag


class BlockJacobiILU(Preconditioner):
    kind = PrecondKind.BLOCK_JACOBI_ILU

    def __init__(self, M: SparseMatrixCSR, fill_level: int, blocks: int):
        self.m = M.nrows
        self.ranges = block_ranges(M.nrows, blocks)
        self.fill_level = fill_level
        self.factors: list[ILUFactorization] = []
        for lo, hi in self.ranges:
            span = IndexSet(np.arange(lo, hi, dtype=np.int64), validate=False)
            self.factors.append(ilu_k(extract_submatrix(M, span, span),
                                      fill_level))

    def apply(self, r: np.ndarray) -> np.ndarray:
        if r.shape[0] != self.m:
            raise ValueError("dimension mismatch")
        z = np.empty_like(r)
        for (lo, hi), factor in zip(self.ranges, self.factors):
            z[lo:hi] = factor.solve(r[lo:hi])
        return z


def make_preconditioner(M: SparseMatrixCSR, spec: PrecondSpec | str,
                        default_blocks: int = 1) -> Preconditioner:
    """Build the selected preconditioner for M."""
    if isinstance(spec, str):
        spec = parse_precond(spec)
    if spec.kind is PrecondKind.NONE:
        return Preconditioner()
    if spec.kind is PrecondKind.POINT_JACOBI:
        return PointJacobi(M)
    blocks = spec.blocks if spec.blocks is not None else default_blocks
    return BlockJacobiILU(M, spec.fill_level, blocks)


def apply_precond(P: Preconditioner, r: np.ndarray) -> np.ndarray:
    """Apply the preconditioner to a residual vector."""
    return P.apply(r)
