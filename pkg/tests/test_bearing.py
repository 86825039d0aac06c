import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from gpcg import BearingSpec, generate, wl, wq


def dense_bearing(nx, ny, eps, b_dom):
    """Independent dense assembly of the same discretization, scalar loops."""
    hx = 2.0 * np.pi / (nx + 1)
    hy = 2.0 * b_dom / (ny + 1)
    n = nx * ny

    def lam(t):
        return (1.0 + eps * np.cos(t)) ** 3

    A = np.zeros((n, n))
    rhs = np.zeros(n)
    for j in range(1, ny + 1):
        for i in range(1, nx + 1):
            k = (j - 1) * nx + (i - 1)
            lw = lam((i - 0.5) * hx)
            le = lam((i + 0.5) * hx)
            A[k, k] = (hy / hx + hx / hy) * (lw + le)
            if i > 1:
                A[k, k - 1] = -(hy / hx) * lw
            if i < nx:
                A[k, k + 1] = -(hy / hx) * le
            if j > 1:
                A[k, k - nx] = -(hx / hy) * 0.5 * (lw + le)
            if j < ny:
                A[k, k + nx] = -(hx / hy) * 0.5 * (lw + le)
            rhs[k] = -hx * hy * eps * np.sin(i * hx)
    return A, rhs


class TestSpec:
    def test_dimensions(self):
        assert BearingSpec(7, 5, 0.1).n == 35

    @pytest.mark.parametrize("kwargs", [
        {"nx": 0, "ny": 3, "eccentricity": 0.1},
        {"nx": 3, "ny": 0, "eccentricity": 0.1},
        {"nx": 3, "ny": 3, "eccentricity": 1.0},
        {"nx": 3, "ny": 3, "eccentricity": -0.1},
        {"nx": 3, "ny": 3, "eccentricity": 0.1, "b_dom": 0.0},
    ])
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(ValueError):
            BearingSpec(**kwargs)

    def test_zero_eccentricity_allowed(self):
        assert BearingSpec(3, 3, 0.0).eccentricity == 0.0


class TestCoefficients:
    def test_quadratic_weight_by_hand(self):
        assert wq(0.0, 0.1) == pytest.approx(1.1 ** 3, rel=0, abs=1e-15)
        assert wq(np.pi, 0.5) == pytest.approx(0.125, rel=0, abs=1e-15)

    def test_linear_weight_by_hand(self):
        assert wl(np.pi / 2.0, 0.5) == pytest.approx(0.5, rel=0, abs=1e-15)
        assert wl(0.0, 0.9) == 0.0


class TestGenerate:
    @pytest.mark.parametrize("nx,ny,eps,b_dom", [
        (3, 3, 0.5, 8.0), (4, 2, 0.0, 10.0), (2, 5, 0.9, 3.0),
        (6, 4, 0.25, 10.0),
    ])
    def test_matches_independent_dense_assembly(self, nx, ny, eps, b_dom):
        qp = generate(BearingSpec(nx, ny, eps, b_dom))
        D, rhs = dense_bearing(nx, ny, eps, b_dom)
        assert np.abs(qp.A.to_dense() - D).max() <= 1e-14 * np.abs(D).max()
        assert_allclose(qp.b, rhs, rtol=0, atol=1e-15)

    def test_bounds_and_constant(self):
        qp = generate(BearingSpec(5, 4, 0.3))
        assert_array_equal(qp.l, 0.0)
        assert (qp.u == np.inf).all()
        assert qp.c == 0.0

    def test_matrix_is_validated_symmetric(self):
        qp = generate(BearingSpec(7, 6, 0.6))
        assert qp.A.symmetric
        qp.A._validate()  # full structural check including symmetry

    def test_nonzero_count_formula(self):
        for nx, ny in ((3, 3), (5, 2), (10, 7)):
            qp = generate(BearingSpec(nx, ny, 0.4))
            n = nx * ny
            assert qp.A.nnz == 5 * n - 2 * nx - 2 * ny

    def test_average_entries_per_row_at_benchmark_size(self):
        qp = generate(BearingSpec(100, 100, 0.1))
        assert qp.A.nnz / qp.n == pytest.approx(4.96, rel=0, abs=1e-12)

    def test_off_diagonals_nonpositive_and_rows_dominant(self):
        qp = generate(BearingSpec(8, 8, 0.7))
        D = qp.A.to_dense()
        off = D - np.diag(np.diag(D))
        assert (off <= 0.0).all()
        assert (np.diag(D) > 0.0).all()
        # weak diagonal dominance, strict on boundary rows
        row_off = np.abs(off).sum(axis=1)
        assert (np.diag(D) >= row_off - 1e-12).all()
        assert (np.diag(D) - row_off > 1e-12).any()

    def test_matrix_is_positive_definite(self):
        qp = generate(BearingSpec(6, 6, 0.8))
        assert np.linalg.eigvalsh(qp.A.to_dense()).min() > 0.0

    def test_index_ordering_sweeps_first_coordinate_fastest(self):
        nx, ny = 4, 3
        qp = generate(BearingSpec(nx, ny, 0.2))
        D = qp.A.to_dense()
        # neighbor in the first coordinate is one index away
        assert D[0, 1] != 0.0
        assert D[nx - 1, nx] == 0.0  # row wraps are not coupled
        # neighbor in the second coordinate is nx away
        assert D[0, nx] != 0.0

    def test_linear_term_sign_pattern(self):
        # forcing is -hx*hy*eps*sin(i*hx): negative on the first half of the
        # period, positive on the second
        nx = 9
        qp = generate(BearingSpec(nx, 1, 0.5))
        i = np.arange(1, nx + 1)
        expected_sign = -np.sign(np.sin(i * 2.0 * np.pi / (nx + 1)))
        assert_array_equal(np.sign(qp.b), expected_sign)
