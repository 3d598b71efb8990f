"""The test suite for solver.py"""
import sys
sys.path.insert(1, ".")
from anisopy import *

import unittest

import numpy as np
import scipy.sparse as sp


def laplacian_1d(n: int) -> sp.csr_matrix:
    return sp.diags([-np.ones(n - 1), 2.0 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1]).tocsr()


def fem_system(m: int, diffusion: str, eps: float):
    """Returns the stiffness matrix and sine load of a builtin problem on the
    uniform m x m mesh"""
    mesh = build_tensor_mesh([build_uniform_grid(m)] * 2, 1)
    M = assemble_stiffness_eps(mesh, build_diffusion(diffusion, 2, 1), eps)
    return M, assemble_load(mesh, build_source("sine-product", 2, 1))


def check_matches_dense(test: unittest.TestCase, M, b, tol: float = 1e-12, agree: float = 1e-8):
    """Asserts that CG and the dense solve agree to the relative tolerance
    agree

    Parameters
    ----------
    test : unittest.TestCase
        the test case to run the test on
    M : scipy.sparse.spmatrix
        the SPD system matrix
    b : np.ndarray
        the right-hand side
    tol : float
        the CG tolerance
    agree : float
        the relative tolerance on the difference of the two solutions
    """
    x, stats = cg_solve(M, b, tol)
    y = dense_solve(M, b)
    test.assertTrue(stats.converged)
    test.assertLessEqual(stats.residual, tol)
    test.assertLessEqual(np.linalg.norm(x - y), agree * np.linalg.norm(y))


class TestCG(unittest.TestCase):
    """Test suite for cg_solve"""

    def test_1d_laplacian(self):
        check_matches_dense(self, laplacian_1d(50), np.linspace(1.0, 2.0, 50))

    def test_2d_laplacian(self):
        L = laplacian_1d(10)
        M = (sp.kron(L, sp.identity(10)) + sp.kron(sp.identity(10), L)).tocsr()
        check_matches_dense(self, M, np.arange(100.0))

    def test_zero_rhs(self):
        x, stats = cg_solve(laplacian_1d(10), np.zeros(10))
        np.testing.assert_array_equal(x, np.zeros(10))
        self.assertEqual(stats.iterations, 0)
        self.assertTrue(stats.converged)

    def test_nonpositive_diagonal(self):
        M = sp.diags([1.0, 0.0, 1.0]).tocsr()
        with self.assertRaises(NotSPDError):
            cg_solve(M, np.ones(3))

    def test_budget_exhausted(self):
        with self.assertRaises(NonConvergenceError) as ctx:
            cg_solve(laplacian_1d(200), np.ones(200), 1e-12, maxit=2)
        self.assertFalse(ctx.exception.stats.converged)
        self.assertLessEqual(ctx.exception.stats.iterations, 2)

    def test_invalid_tolerance(self):
        with self.assertRaises(ValueError):
            cg_solve(laplacian_1d(4), np.ones(4), 0.0)

    def test_callback(self):
        iterates = []
        _, stats = cg_solve(laplacian_1d(20), np.ones(20), callback=iterates.append)
        self.assertEqual(len(iterates), stats.iterations)
        self.assertGreater(stats.iterations, 0)

    def test_default_maxit(self):
        self.assertEqual(default_maxit(100), 1200)

    def test_identity_one_iteration(self):
        x, stats = cg_solve(sp.identity(3, format="csr"), np.array([1.0, 2.0, 3.0]))
        np.testing.assert_allclose(x, [1.0, 2.0, 3.0])
        self.assertEqual(stats.iterations, 1)

    def test_diagonal_one_iteration(self):
        x, stats = cg_solve(sp.diags([2.0, 4.0]).tocsr(), np.array([2.0, 4.0]))
        np.testing.assert_allclose(x, [1.0, 1.0])
        self.assertEqual(stats.iterations, 1)

    def test_small_spd(self):
        M = sp.csr_matrix(np.array([[2.0, 1.0], [1.0, 2.0]]))
        x, stats = cg_solve(M, np.array([1.0, 0.0]))
        np.testing.assert_allclose(x, [2.0 / 3.0, -1.0 / 3.0], atol=1e-12)
        self.assertLessEqual(stats.iterations, 2)

    def test_linear_in_rhs(self):
        M = fem_system(8, "variable-offdiag", 0.1)[0]
        b = np.random.default_rng(5).uniform(-1.0, 1.0, M.shape[0])
        x, _ = cg_solve(M, b)
        y, _ = cg_solve(M, -3.5 * b)
        np.testing.assert_allclose(y, -3.5 * x, rtol=1e-8, atol=1e-12)

    def test_energy_error_decreases(self):
        M, b = fem_system(8, "variable-offdiag", 0.1)
        exact = dense_solve(M, b)
        energies = []

        def record(xk: np.ndarray) -> None:
            e = xk - exact
            energies.append(float(e @ (M @ e)))

        cg_solve(M, b, callback=record)
        self.assertGreater(len(energies), 1)
        start = float(exact @ (M @ exact))
        for before, after in zip([start] + energies, energies):
            self.assertLessEqual(after, before * (1.0 + 1e-10) + 1e-24)


class TestBuiltinSystems(unittest.TestCase):
    """Test suite for cg_solve on the assembled systems of the builtin
    diffusion matrices"""

    def test_matches_dense(self):
        for name in DIFFUSIONS:
            for m in (2, 4, 8):
                for eps in (1.0, 1e-1, 1e-2):
                    with self.subTest(name=name, m=m, eps=eps):
                        M, b = fem_system(m, name, eps)
                        check_matches_dense(self, M, b, agree=10.0 * DEFAULT_TOL)

    def test_positive_definite(self):
        for name in DIFFUSIONS:
            for eps in (1.0, 1e-2, 1e-4):
                with self.subTest(name=name, eps=eps):
                    M, b = fem_system(8, name, eps)
                    x, stats = cg_solve(M, b)
                    self.assertTrue(stats.converged)
                    self.assertGreater(float(x @ (M @ x)), 0.0)
                    self.assertGreater(float(np.min(np.linalg.eigvalsh(M.toarray()))), 0.0)


class TestDense(unittest.TestCase):
    """Test suite for dense_solve and is_symmetric"""

    def test_dense_nonsymmetric(self):
        M = np.array([[2.0, 1.0], [0.0, 3.0]])
        np.testing.assert_allclose(dense_solve(M, [3.0, 3.0]), [1.0, 1.0])

    def test_singular(self):
        with self.assertRaises(SingularMatrixError):
            dense_solve(np.array([[1.0, 1.0], [1.0, 1.0]]), [1.0, 2.0])

    def test_too_large(self):
        with self.assertRaises(ValueError):
            dense_solve(sp.identity(DENSE_LIMIT + 1, format="csr"), np.ones(DENSE_LIMIT + 1))

    def test_is_symmetric(self):
        self.assertTrue(is_symmetric(laplacian_1d(5)))
        self.assertFalse(is_symmetric(np.array([[1.0, 0.5], [0.0, 1.0]])))
        self.assertTrue(is_symmetric(np.array([[1.0, 0.5], [0.5 + 1e-13, 1.0]])))


if __name__ == "__main__":
    unittest.main()
