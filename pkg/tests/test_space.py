"""The test suite for space.py"""
import sys
sys.path.insert(1, ".")
from anisopy import *

import unittest

import numpy as np


def bilinear(x):
    return 1.0 + 2.0 * x[0] - x[1] + 3.0 * x[0] * x[1]


def square_mesh(m: int, q: int = 1, dim: int = 2) -> TensorMesh:
    return build_tensor_mesh([build_uniform_grid(m)] * dim, q)


class TestNodalField(unittest.TestCase):
    """Test suite for NodalField and DofMap"""

    def test_wrong_length(self):
        with self.assertRaises(ValueError):
            NodalField(square_mesh(2), np.zeros(4))

    def test_from_dofs_in_vh(self):
        mesh = square_mesh(4)
        field = NodalField.from_dofs(mesh, np.arange(1, 10))
        self.assertTrue(field.in_vh())
        np.testing.assert_allclose(field.interior_values(), np.arange(1, 10))

    def test_interpolant_not_in_vh(self):
        self.assertFalse(interpolate(bilinear, square_mesh(2)).in_vh())

    def test_dofmap(self):
        mesh = square_mesh(3)
        dofs = DofMap(mesh)
        self.assertEqual(dofs.num_dofs, 4)
        self.assertEqual(dofs.node_to_dof[mesh.interior_nodes].tolist(), [0, 1, 2, 3])
        self.assertEqual(int(np.sum(dofs.node_to_dof == -1)), 12)
        values = dofs.extend(np.ones(4))
        np.testing.assert_allclose(dofs.restrict(values), np.ones(4))

    def test_arithmetic(self):
        mesh = square_mesh(2)
        a = interpolate(bilinear, mesh)
        b = NodalField(mesh, np.ones(9))
        np.testing.assert_allclose((a - b).values, a.values - 1.0)
        np.testing.assert_allclose((2 * a + b).values, 2.0 * a.values + 1.0)
        np.testing.assert_allclose((-a).values, -a.values)

    def test_arithmetic_different_meshes(self):
        with self.assertRaises(ValueError):
            NodalField.zeros(square_mesh(2)) + NodalField.zeros(square_mesh(4))

    def test_values_read_only(self):
        field = NodalField.zeros(square_mesh(2))
        with self.assertRaises(ValueError):
            field.values[0] = 1.0


class TestEvaluation(unittest.TestCase):
    """Test suite for interpolation and evaluation"""

    def test_interpolate_nodal_values(self):
        mesh = square_mesh(4)
        field = interpolate(bilinear, mesh)
        np.testing.assert_allclose(field.values, bilinear(mesh.node_coordinates))

    def test_interpolate_constant(self):
        field = interpolate(lambda x: 2.5, square_mesh(2))
        np.testing.assert_allclose(field.values, 2.5)

    def test_interpolate_not_finite(self):
        with self.assertRaises(InvalidSourceError):
            interpolate(lambda x: 1.0 / x[0], square_mesh(2))

    def test_bilinear_reproduced(self):
        mesh = build_tensor_mesh([Grid1D([0, 0.2, 0.7, 1]), build_uniform_grid(3)], 1)
        field = interpolate(bilinear, mesh)
        points = np.array([[0.1, 0.45, 0.9, 1.0, 0.7], [0.05, 0.5, 0.99, 1.0, 1 / 3]])
        np.testing.assert_allclose(evaluate(field, points), bilinear(points), rtol=1e-13)

    def test_evaluate_single_point(self):
        field = interpolate(bilinear, square_mesh(2))
        self.assertAlmostEqual(evaluate(field, [0.25, 0.75]), bilinear(np.array([0.25, 0.75])))

    def test_evaluate_trilinear(self):
        mesh = square_mesh(2, 2, 3)
        field = interpolate(lambda x: x[0] * x[1] * x[2], mesh)
        self.assertAlmostEqual(evaluate(field, [0.3, 0.6, 0.9]), 0.3 * 0.6 * 0.9)

    def test_out_of_domain(self):
        field = NodalField.zeros(square_mesh(2))
        with self.assertRaises(OutOfDomainError):
            evaluate(field, [1.2, 0.5])
        with self.assertRaises(OutOfDomainError):
            evaluate_gradient(field, [-0.1, 0.3])

    def test_gradient_inside_cell(self):
        field = interpolate(bilinear, square_mesh(4))
        grad = evaluate_gradient(field, [0.1, 0.3])
        np.testing.assert_allclose(grad, [2.0 + 3.0 * 0.3, -1.0 + 3.0 * 0.1])

    def test_gradient_on_face_needs_cell(self):
        field = interpolate(bilinear, square_mesh(2))
        with self.assertRaises(AmbiguousGradientError):
            evaluate_gradient(field, [0.5, 0.3])

    def test_gradient_on_face_with_cell(self):
        mesh = square_mesh(2)
        field = interpolate(lambda x: np.abs(x[0] - 0.5), mesh)
        np.testing.assert_allclose(evaluate_gradient(field, [0.5, 0.3], cell=[0, 0]), [-1.0, 0.0])
        np.testing.assert_allclose(evaluate_gradient(field, [0.5, 0.3], cell=[1, 0]), [1.0, 0.0])

    def test_gradient_on_boundary(self):
        field = interpolate(bilinear, square_mesh(2))
        np.testing.assert_allclose(evaluate_gradient(field, [0.0, 0.25]), [2.0 + 0.75, -1.0])


class TestProlongate(unittest.TestCase):
    """Test suite for prolongate"""

    def test_same_function(self):
        coarse_mesh = build_tensor_mesh([Grid1D([0, 0.3, 1]), build_uniform_grid(2)], 1)
        fine_mesh = refine_halve(refine_halve(coarse_mesh))
        rng = np.random.default_rng(1)
        coarse = NodalField(coarse_mesh, rng.standard_normal(coarse_mesh.num_nodes))
        fine = prolongate(coarse, fine_mesh)
        points = rng.uniform(0.0, 1.0, size=(2, 50))
        np.testing.assert_allclose(evaluate(fine, points), evaluate(coarse, points), rtol=1e-12, atol=1e-12)

    def test_keeps_vh(self):
        mesh = square_mesh(2, 1, 3)
        coarse = NodalField.from_dofs(mesh, [1.0])
        fine = prolongate(coarse, refine_halve(mesh))
        self.assertTrue(fine.in_vh())
        self.assertAlmostEqual(evaluate(fine, [0.5, 0.5, 0.5]), 1.0)

    def test_identity(self):
        field = interpolate(bilinear, square_mesh(4))
        np.testing.assert_allclose(prolongate(field, field.mesh).values, field.values)

    def test_non_nested(self):
        field = NodalField.zeros(square_mesh(2))
        with self.assertRaises(NonNestedError):
            prolongate(field, square_mesh(3))


if __name__ == "__main__":
    unittest.main()
