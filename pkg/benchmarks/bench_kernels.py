"""Benchmark the compiled kernel backend against the fallback backend.

Each hot loop in gpcg._kernels ships in two forms: a numba-compiled one and
a numpy/python one.  This script times both forms on a journal-bearing
matrix, checks that they agree, and reports the speedups.  It ends with an
end-to-end solve comparison run in subprocesses (the backend is frozen at
import time, so a fresh interpreter is needed per backend).

Usage: python3 benchmarks/bench_kernels.py [--nx 100] [--reps 20] [--no-e2e]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from gpcg import _kernels as K
from gpcg.bearing import BearingSpec, generate
from gpcg.ilu import ilu_k


def best_of(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def report(name, t_jit, t_fallback, agree):
    tag = "ok" if agree else "MISMATCH"
    print(f"{name:<14} jit {t_jit * 1e3:8.3f} ms   fallback "
          f"{t_fallback * 1e3:8.3f} ms   speedup {t_fallback / t_jit:6.1f}x"
          f"   [{tag}]")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nx", type=int, default=100,
                    help="bearing grid points per side (default 100)")
    ap.add_argument("--reps", type=int, default=20,
                    help="timing repetitions, best is kept (default 20)")
    ap.add_argument("--no-e2e", action="store_true",
                    help="skip the end-to-end solve comparison")
    args = ap.parse_args()

    if not K.NUMBA_AVAILABLE:
        print("numba is not importable; nothing to compare against.")
        return 0
    if not K.JIT_ENABLED:
        print("GPCG_NO_NUMBA is set; unset it to benchmark the jit backend.")
        return 0

    qp = generate(BearingSpec(args.nx, args.nx, 0.1))
    A = qp.A
    n = A.nrows
    rng = np.random.default_rng(7)
    x = rng.standard_normal(n)
    out = np.empty(n)
    print(f"bearing matrix: n={n}, nnz={A.nnz}\n")

    # matvec: compiled loop vs numpy reduceat
    K._csr_matvec_jit(A.indptr, A.indices, A.data, x, out)  # compile
    y_jit = K._csr_matvec_jit(A.indptr, A.indices, A.data, x,
                              np.empty(n)).copy()
    y_np = K._csr_matvec_np(A.indptr, A.indices, A.data, x, np.empty(n))
    t1 = best_of(lambda: K._csr_matvec_jit(A.indptr, A.indices, A.data, x,
                                           out), args.reps)
    t2 = best_of(lambda: K._csr_matvec_np(A.indptr, A.indices, A.data, x,
                                          out), args.reps)
    report("csr_matvec", t1, t2, np.allclose(y_jit, y_np, rtol=1e-12))

    # submatrix extraction on a random 60% face
    rows = np.flatnonzero(rng.random(n) < 0.6).astype(np.int64)
    colmap = np.full(n, -1, dtype=np.int64)
    colmap[rows] = np.arange(rows.size)
    K._csr_extract_jit(A.indptr, A.indices, A.data, rows, colmap)  # compile
    e_jit = K._csr_extract_jit(A.indptr, A.indices, A.data, rows, colmap)
    e_np = K._csr_extract_np(A.indptr, A.indices, A.data, rows, colmap)
    agree = all(np.array_equal(a, b) for a, b in zip(e_jit, e_np))
    t1 = best_of(lambda: K._csr_extract_jit(A.indptr, A.indices, A.data,
                                            rows, colmap), args.reps)
    t2 = best_of(lambda: K._csr_extract_np(A.indptr, A.indices, A.data,
                                           rows, colmap), args.reps)
    report("csr_extract", t1, t2, agree)

    # ILU(2) symbolic + numeric phases, compiled loop vs interpreted loop
    K._ilu_symbolic_jit(n, A.indptr, A.indices, 2)  # compile
    s_jit = K._ilu_symbolic_jit(n, A.indptr, A.indices, 2)
    s_py = K._ilu_symbolic_py(n, A.indptr, A.indices, 2)
    agree = all(np.array_equal(a, b) for a, b in zip(s_jit, s_py))
    t1 = best_of(lambda: K._ilu_symbolic_jit(n, A.indptr, A.indices, 2),
                 args.reps)
    t2 = best_of(lambda: K._ilu_symbolic_py(n, A.indptr, A.indices, 2),
                 max(1, args.reps // 10))
    report("ilu_symbolic", t1, t2, agree)

    lu_indptr, lu_indices, _, lu_diag = s_jit
    K._ilu_numeric_jit(n, A.indptr, A.indices, A.data, lu_indptr,
                       lu_indices, lu_diag)  # compile
    d_jit, p1 = K._ilu_numeric_jit(n, A.indptr, A.indices, A.data,
                                   lu_indptr, lu_indices, lu_diag)
    d_py, p2 = K._ilu_numeric_py(n, A.indptr, A.indices, A.data,
                                 lu_indptr, lu_indices, lu_diag)
    agree = p1 == p2 and np.allclose(d_jit, d_py, rtol=1e-12)
    t1 = best_of(lambda: K._ilu_numeric_jit(n, A.indptr, A.indices, A.data,
                                            lu_indptr, lu_indices, lu_diag),
                 args.reps)
    t2 = best_of(lambda: K._ilu_numeric_py(n, A.indptr, A.indices, A.data,
                                           lu_indptr, lu_indices, lu_diag),
                 max(1, args.reps // 10))
    report("ilu_numeric", t1, t2, agree)

    # triangular solves with the factorization
    fac = ilu_k(A, 2)
    r = rng.standard_normal(n)
    z = np.empty(n)
    K._lu_solve_jit(fac.indptr, fac.indices, fac.data, fac.diag, r,
                    z)  # compile
    z_jit = K._lu_solve_jit(fac.indptr, fac.indices, fac.data, fac.diag, r,
                            np.empty(n)).copy()
    z_py = K._lu_solve_py(fac.indptr, fac.indices, fac.data, fac.diag, r,
                          np.empty(n))
    t1 = best_of(lambda: K._lu_solve_jit(fac.indptr, fac.indices, fac.data,
                                         fac.diag, r, z), args.reps)
    t2 = best_of(lambda: K._lu_solve_py(fac.indptr, fac.indices, fac.data,
                                        fac.diag, r, z),
                 max(1, args.reps // 10))
    report("lu_solve", t1, t2, np.allclose(z_jit, z_py, rtol=1e-12))

    if args.no_e2e:
        return 0

    # end-to-end: full bearing solve under each backend in fresh interpreters
    print("\nend-to-end solve (bearing nx=%d, eps=0.1, bjacobi-ilu2):"
          % args.nx)
    script = (
        "import time\n"
        "from gpcg.bearing import BearingSpec, generate\n"
        "from gpcg import SolverConfig, solve\n"
        "qp = generate(BearingSpec(%d, %d, 0.1))\n"
        "cfg = SolverConfig(precond='bjacobi-ilu2')\n"
        "solve(qp, qp.l.copy(), cfg)\n"
        "t0 = time.perf_counter()\n"
        "out = solve(qp, qp.l.copy(), cfg)\n"
        "print('%%.3fs q=%%.12e' %% (time.perf_counter() - t0,\n"
        "      out.stats.objective_final))\n" % (args.nx, args.nx))
    for label, env_flag in (("jit", "0"), ("fallback", "1")):
        env = dict(os.environ, GPCG_NO_NUMBA=env_flag)
        env["PYTHONPATH"] = os.pathsep.join(
            [os.path.join(os.path.dirname(__file__), "..", "src"),
             env.get("PYTHONPATH", "")])
        res = subprocess.run([sys.executable, "-c", script], env=env,
                             capture_output=True, text=True)
        body = res.stdout.strip() or res.stderr.strip().splitlines()[-1]
        print(f"  {label:<9} {body}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
