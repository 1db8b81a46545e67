import numpy as np
import pytest
import scipy.linalg as sla

from catenoid.tridiag import (count_below, eigenvalue_by_index,
                              gershgorin_bounds, inverse_iteration,
                              smallest_eigenvalues)


def random_tridiag(n, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n), rng.standard_normal(n - 1)


class TestSturmCount:
    @pytest.mark.parametrize("n,seed", [(50, 0), (200, 1), (997, 2)])
    def test_count_matches_scipy(self, n, seed):
        d, e = random_tridiag(n, seed)
        evals = sla.eigh_tridiagonal(d, e, eigvals_only=True)
        for sigma in (-2.0, -0.5, 0.0, 0.3, 1.7):
            assert count_below(d, e, sigma) == int(np.sum(evals < sigma))

    def test_gershgorin_contains_spectrum(self):
        d, e = random_tridiag(300, 3)
        lo, hi = gershgorin_bounds(d, e)
        evals = sla.eigh_tridiagonal(d, e, eigvals_only=True)
        assert lo <= evals[0] and evals[-1] <= hi


class TestBisection:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_scipy(self, seed):
        d, e = random_tridiag(400, seed)
        evals = sla.eigh_tridiagonal(d, e, eigvals_only=True)
        got = smallest_eigenvalues(d, e, 6)
        scale = max(np.abs(evals))
        np.testing.assert_allclose(got, evals[:6], atol=1e-12 * scale)

    def test_single_index(self):
        d, e = random_tridiag(100, 5)
        evals = sla.eigh_tridiagonal(d, e, eigvals_only=True)
        assert eigenvalue_by_index(d, e, 3) == pytest.approx(evals[2],
                                                             abs=1e-12)

    def test_index_bounds(self):
        d, e = random_tridiag(10, 6)
        with pytest.raises(ValueError):
            eigenvalue_by_index(d, e, 0)
        with pytest.raises(ValueError):
            smallest_eigenvalues(d, e, 11)


class TestInverseIteration:
    def test_eigenvector_residual(self):
        d, e = random_tridiag(500, 7)
        lam = smallest_eigenvalues(d, e, 2)
        scale = float(np.max(np.abs(d)) + 2 * np.max(np.abs(e)))
        for j, shift in enumerate(lam, start=1):
            x = inverse_iteration(d, e, shift, mode_hint=j)
            tx = d * x
            tx[:-1] += e * x[1:]
            tx[1:] += e * x[:-1]
            rho = float(x @ tx) / float(x @ x)
            assert np.max(np.abs(tx - rho * x)) <= 1e-10 * scale

    def test_matches_scipy_eigenvector(self):
        # discrete Dirichlet Laplacian: eigenvectors are sine modes
        n = 64
        d = np.full(n, 2.0)
        e = np.full(n - 1, -1.0)
        lam = smallest_eigenvalues(d, e, 1)[0]
        x = inverse_iteration(d, e, lam)
        expected = np.sin(np.arange(1, n + 1) * np.pi / (n + 1))
        expected /= np.max(np.abs(expected))
        np.testing.assert_allclose(x, expected, atol=1e-8)
