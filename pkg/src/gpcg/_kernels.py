"""Low-level CSR and incomplete-factorization kernels.

Two backends are provided for every hot loop: a compiled one (numba, the
default whenever numba imports cleanly) and a pure-numpy interpretation.
Set the environment variable ``GPCG_NO_NUMBA=1`` before import to force the
numpy backend.  Both backends are deterministic for fixed inputs; they may
differ from each other by rounding because vectorized reductions do not sum
in the same order as the loops.
"""

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(func):
            return func

        return wrap


_flag = os.environ.get("GPCG_NO_NUMBA", "").strip()
JIT_ENABLED = NUMBA_AVAILABLE and _flag in ("", "0")


# ---------------------------------------------------------------------------
# matrix-vector product
# ---------------------------------------------------------------------------

def _csr_matvec_py(indptr, indices, data, x, out):
    n = indptr.shape[0] - 1
    for i in range(n):
        s = 0.0
        for t in range(indptr[i], indptr[i + 1]):
            s += data[t] * x[indices[t]]
        out[i] = s
    return out


def _csr_matvec_np(indptr, indices, data, x, out):
    out[:] = 0.0
    if data.shape[0] == 0:
        return out
    prod = data * x[indices]
    counts = indptr[1:] - indptr[:-1]
    nonempty = counts > 0
    out[nonempty] = np.add.reduceat(prod, indptr[:-1][nonempty])
    return out


# ---------------------------------------------------------------------------
# principal/rectangular submatrix extraction
# ---------------------------------------------------------------------------

def _csr_extract_py(indptr, indices, data, rows, colmap):
    m = rows.shape[0]
    out_indptr = np.zeros(m + 1, dtype=np.int64)
    for p in range(m):
        i = rows[p]
        cnt = 0
        for t in range(indptr[i], indptr[i + 1]):
            if colmap[indices[t]] >= 0 and data[t] != 0.0:
                cnt += 1
        out_indptr[p + 1] = out_indptr[p] + cnt
    nnz = out_indptr[m]
    out_indices = np.empty(nnz, dtype=np.int64)
    out_data = np.empty(nnz, dtype=np.float64)
    pos = 0
    for p in range(m):
        i = rows[p]
        for t in range(indptr[i], indptr[i + 1]):
            q = colmap[indices[t]]
            if q >= 0 and data[t] != 0.0:
                out_indices[pos] = q
                out_data[pos] = data[t]
                pos += 1
    return out_indptr, out_indices, out_data


def _csr_extract_np(indptr, indices, data, rows, colmap):
    m = rows.shape[0]
    counts = indptr[rows + 1] - indptr[rows] if m else np.zeros(0, dtype=np.int64)
    total = int(counts.sum())
    if total == 0:
        return (np.zeros(m + 1, dtype=np.int64),
                np.empty(0, dtype=np.int64),
                np.empty(0, dtype=np.float64))
    shift = np.repeat(np.cumsum(counts) - counts, counts)
    pos = np.repeat(indptr[rows], counts) + (np.arange(total) - shift)
    cols = colmap[indices[pos]]
    vals = data[pos]
    keep = (cols >= 0) & (vals != 0.0)
    out_counts = np.bincount(np.repeat(np.arange(m), counts)[keep], minlength=m)
    out_indptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(out_counts, out=out_indptr[1:])
    return out_indptr, cols[keep].astype(np.int64), vals[keep]


# ---------------------------------------------------------------------------
# ILU(k): level-of-fill symbolic phase, pattern-restricted numeric phase
# ---------------------------------------------------------------------------

def _ilu_symbolic_py(n, a_indptr, a_indices, fill_level):
    cap = int(max(16, 2 * (a_indptr[n] + n)))
    lu_indices = np.empty(cap, dtype=np.int64)
    lu_levels = np.empty(cap, dtype=np.int64)
    lu_indptr = np.zeros(n + 1, dtype=np.int64)
    lu_diag = np.full(n, -1, dtype=np.int64)
    nxt = np.empty(n, dtype=np.int64)
    lev = np.empty(n, dtype=np.int64)
    nnz = 0
    for i in range(n):
        # seed the working row (a sorted linked list over columns) from the input
        head = -1
        last = -1
        for t in range(a_indptr[i], a_indptr[i + 1]):
            c = a_indices[t]
            lev[c] = 0
            if last == -1:
                head = c
            else:
                nxt[last] = c
            last = c
        if last != -1:
            nxt[last] = -1
        # merge fill candidates from each pivot row's upper part
        p = head
        while p != -1 and p < i:
            lev_p = lev[p]
            scan = p
            for t in range(lu_diag[p] + 1, lu_indptr[p + 1]):
                q = lu_indices[t]
                new_lev = lev_p + lu_levels[t] + 1
                if new_lev > fill_level:
                    continue
                while nxt[scan] != -1 and nxt[scan] < q:
                    scan = nxt[scan]
                if nxt[scan] == q:
                    if new_lev < lev[q]:
                        lev[q] = new_lev
                else:
                    nxt[q] = nxt[scan]
                    nxt[scan] = q
                    lev[q] = new_lev
            p = nxt[p]
        cnt = 0
        c = head
        while c != -1:
            cnt += 1
            c = nxt[c]
        while nnz + cnt > cap:
            cap *= 2
            grown_idx = np.empty(cap, dtype=np.int64)
            grown_lev = np.empty(cap, dtype=np.int64)
            grown_idx[:nnz] = lu_indices[:nnz]
            grown_lev[:nnz] = lu_levels[:nnz]
            lu_indices = grown_idx
            lu_levels = grown_lev
        c = head
        while c != -1:
            lu_indices[nnz] = c
            lu_levels[nnz] = lev[c]
            if c == i:
                lu_diag[i] = nnz
            nnz += 1
            c = nxt[c]
        lu_indptr[i + 1] = nnz
    return lu_indptr, lu_indices[:nnz].copy(), lu_levels[:nnz].copy(), lu_diag


def _ilu_numeric_py(n, a_indptr, a_indices, a_data, lu_indptr, lu_indices, lu_diag):
    nnz = lu_indptr[n]
    lu_data = np.zeros(nnz, dtype=np.float64)
    pos = np.full(n, -1, dtype=np.int64)
    # scatter input values onto the (sorted) factor pattern
    for i in range(n):
        ta = a_indptr[i]
        ea = a_indptr[i + 1]
        for t in range(lu_indptr[i], lu_indptr[i + 1]):
            c = lu_indices[t]
            while ta < ea and a_indices[ta] < c:
                ta += 1
            if ta < ea and a_indices[ta] == c:
                lu_data[t] = a_data[ta]
                ta += 1
    for i in range(n):
        rs = lu_indptr[i]
        re = lu_indptr[i + 1]
        for t in range(rs, re):
            pos[lu_indices[t]] = t
        t = rs
        while t < re and lu_indices[t] < i:
            p = lu_indices[t]
            mult = lu_data[t] / lu_data[lu_diag[p]]
            lu_data[t] = mult
            for s in range(lu_diag[p] + 1, lu_indptr[p + 1]):
                tq = pos[lu_indices[s]]
                if tq != -1:
                    lu_data[tq] -= mult * lu_data[s]
            t += 1
        for t in range(rs, re):
            pos[lu_indices[t]] = -1
        if lu_data[lu_diag[i]] == 0.0:
            return lu_data, i
    return lu_data, -1


def _lu_solve_py(lu_indptr, lu_indices, lu_data, lu_diag, r, z):
    n = r.shape[0]
    for i in range(n):
        s = r[i]
        for t in range(lu_indptr[i], lu_diag[i]):
            s -= lu_data[t] * z[lu_indices[t]]
        z[i] = s
    for i in range(n - 1, -1, -1):
        s = z[i]
        for t in range(lu_diag[i] + 1, lu_indptr[i + 1]):
            s -= lu_data[t] * z[lu_indices[t]]
        z[i] = s / lu_data[lu_diag[i]]
    return z


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:
    _csr_matvec_jit = njit(cache=True)(_csr_matvec_py)
    _csr_extract_jit = njit(cache=True)(_csr_extract_py)
    _ilu_symbolic_jit = njit(cache=True)(_ilu_symbolic_py)
    _ilu_numeric_jit = njit(cache=True)(_ilu_numeric_py)
    _lu_solve_jit = njit(cache=True)(_lu_solve_py)
else:
    _csr_matvec_jit = None
    _csr_extract_jit = None
    _ilu_symbolic_jit = None
    _ilu_numeric_jit = None
    _lu_solve_jit = None

if JIT_ENABLED:
    _matvec_impl = _csr_matvec_jit
    _extract_impl = _csr_extract_jit
    _ilu_symbolic_impl = _ilu_symbolic_jit
    _ilu_numeric_impl = _ilu_numeric_jit
    _lu_solve_impl = _lu_solve_jit
else:
    _matvec_impl = _csr_matvec_np
    _extract_impl = _csr_extract_np
    _ilu_symbolic_impl = _ilu_symbolic_py
    _ilu_numeric_impl = _ilu_numeric_py
    _lu_solve_impl = _lu_solve_py


def csr_matvec(indptr, indices, data, x):
    out = np.empty(indptr.shape[0] - 1, dtype=np.float64)
    return _matvec_impl(indptr, indices, data, x, out)


def csr_extract(indptr, indices, data, rows, colmap):
    return _extract_impl(indptr, indices, data, rows, colmap)


def ilu_symbolic(n, a_indptr, a_indices, fill_level):
    return _ilu_symbolic_impl(n, a_indptr, a_indices, fill_level)


def ilu_numeric(n, a_indptr, a_indices, a_data, lu_indptr, lu_indices, lu_diag):
    return _ilu_numeric_impl(n, a_indptr, a_indices, a_data,
                             lu_indptr, lu_indices, lu_diag)


def lu_solve(lu_indptr, lu_indices, lu_data, lu_diag, r):
    z = np.empty(r.shape[0], dtype=np.float64)
    return _lu_solve_impl(lu_indptr, lu_indices, lu_data, lu_diag, r, z)
