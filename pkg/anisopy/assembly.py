"""Sparse assembly of the Q1 stiffness, mass and load operators.

Every operator is computed cell by cell with tensorized Gauss-Legendre
quadrature, vectorized over all cells at once, and summed into a
scipy.sparse matrix. Stiffness matrices and loads are returned on the
interior degrees of freedom; the mass matrix is returned on all nodes.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .mesh import TensorMesh
from .problems import (
    AssumptionViolatedError,
    DiffusionSpec,
    SourceSpec,
    limit_blocks,
    scale_blocks,
)
from .space import DofMap, InvalidSourceError, PointFunction, evaluate_pointwise

__all__ = [
    "LOAD_MODES",
    "QuadratureRule",
    "quadrature_points",
    "ElementData",
    "element_data",
    "assemble_stiffness",
    "assemble_stiffness_eps",
    "assemble_limit_stiffness",
    "assemble_mass",
    "assemble_load",
]

LOAD_MODES = ("interpolated", "quadrature")
"""How the right-hand side integral is computed"""


@dataclass(frozen=True)
class QuadratureRule:
    """Tensorized Gauss-Legendre quadrature with g points per axis

    Fields
    ------
    points_per_axis : int
        the number g of Gauss points per axis, 2 or 3
    """

    points_per_axis: int = 2

    def __post_init__(self) -> None:
        if self.points_per_axis not in (2, 3):
            raise ValueError(f"quadrature uses 2 or 3 points per axis, got {self.points_per_axis}")

    def reference(self, dim: int):
        """Returns the points (Q, N) and weights (Q,) on the unit cell"""
        x, w = np.polynomial.legendre.leggauss(self.points_per_axis)
        x = 0.5 * (x + 1.0)
        w = 0.5 * w
        grids = np.meshgrid(*([x] * dim), indexing="ij")
        wgrids = np.meshgrid(*([w] * dim), indexing="ij")
        points = np.stack([g.reshape(-1) for g in grids], axis=1)
        weights = np.prod(np.stack([g.reshape(-1) for g in wgrids]), axis=0)
        return points, weights


def quadrature_points(mesh: TensorMesh, quad: QuadratureRule):
    """Returns the quadrature points (C, Q, N) and weights (C, Q) of every
    cell, the weights including the cell volume"""
    ref_points, ref_weights = quad.reference(mesh.dim)
    sizes = mesh.cell_sizes
    points = mesh.cell_origins[:, None, :] + sizes[:, None, :] * ref_points[None, :, :]
    weights = np.prod(sizes, axis=1)[:, None] * ref_weights[None, :]
    return points, weights


class ElementData:
    """Quadrature points, weights, shape functions and shape gradients of
    every cell of a mesh

    Fields
    ------
    points : np.ndarray
        physical quadrature points, shape (C, Q, N)
    weights : np.ndarray
        quadrature weights including the cell volume, shape (C, Q)
    phi : np.ndarray
        shape function values, shape (Q, K) with K = 2^N corners
    grads : np.ndarray
        shape function gradients, shape (C, Q, K, N)
    """

    def __init__(self, mesh: TensorMesh, quad: QuadratureRule) -> None:
        ref_points, _ = quad.reference(mesh.dim)
        bits = mesh.corner_bits
        # factors[q, k, a]: 1D hat of corner k along axis a at point q
        factors = np.where(bits[None, :, :] == 1, ref_points[:, None, :], 1.0 - ref_points[:, None, :])
        slopes = np.where(bits == 1, 1.0, -1.0)
        ref_grads = np.empty(factors.shape)
        for a in range(mesh.dim):
            ref_grads[:, :, a] = slopes[None, :, a] * np.prod(np.delete(factors, a, axis=2), axis=2)
        sizes = mesh.cell_sizes
        self.mesh = mesh
        self.points, self.weights = quadrature_points(mesh, quad)
        self.phi = np.prod(factors, axis=2)
        self.grads = ref_grads[None, :, :, :] / sizes[:, None, None, :]

    def flat_points(self) -> np.ndarray:
        """Returns the quadrature points as coordinates of shape (N, C * Q)"""
        return self.points.reshape(-1, self.mesh.dim).T

    def values_at_points(self, fn: PointFunction) -> np.ndarray:
        """Returns fn at every quadrature point, shape (C, Q)"""
        return evaluate_pointwise(fn, self.flat_points()).reshape(self.weights.shape)

    def matrix_at_points(self, fn: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """Returns a matrix function at every quadrature point, shape (N, N, C, Q)"""
        n = self.mesh.dim
        return np.asarray(fn(self.flat_points())).reshape(n, n, *self.weights.shape)


@lru_cache(maxsize=8)
def element_data(mesh: TensorMesh, quad: QuadratureRule) -> ElementData:
    """Returns the (cached) element data of a mesh for a quadrature rule"""
    return ElementData(mesh, quad)


def _scatter(mesh: TensorMesh, local: np.ndarray) -> sp.csr_matrix:
    """Sums local matrices of shape (C, K, K) into a global node matrix"""
    nodes = mesh.cell_nodes
    k = nodes.shape[1]
    rows = np.broadcast_to(nodes[:, :, None], (nodes.shape[0], k, k))
    cols = np.broadcast_to(nodes[:, None, :], (nodes.shape[0], k, k))
    n = mesh.num_nodes
    return sp.coo_matrix(
        (local.ravel(), (rows.ravel(), cols.ravel())), shape=(n, n)
    ).tocsr()


def _interior(mesh: TensorMesh, full: sp.csr_matrix) -> sp.csr_matrix:
    interior = mesh.interior_nodes
    return full[interior][:, interior].tocsr()


def assemble_stiffness(
    mesh: TensorMesh,
    matrix: Callable[[np.ndarray], np.ndarray],
    quad: Optional[QuadratureRule] = None,
) -> sp.csr_matrix:
    """Assembles the form int (B grad u) . grad v over interior dofs

    Parameters
    ----------
    mesh : TensorMesh
        the mesh
    matrix : Callable[[np.ndarray], np.ndarray]
        pointwise matrix function B, mapping (N, P) points to (N, N, P)
    quad : Optional[QuadratureRule]
        the quadrature rule, 2 points per axis by default

    Returns
    -------
    sp.csr_matrix
        the interior stiffness matrix
    """
    data = element_data(mesh, quad or QuadratureRule())
    values = data.matrix_at_points(matrix)
    local = np.einsum(
        "cq,ijcq,cqbj,cqai->cab", data.weights, values, data.grads, data.grads, optimize=True
    )
    return _interior(mesh, _scatter(mesh, local))


def _check_spec(mesh: TensorMesh, A: DiffusionSpec) -> None:
    if A.dim != mesh.dim or A.q != mesh.q:
        raise ValueError(f"{A} does not match {mesh}")


def assemble_stiffness_eps(
    mesh: TensorMesh, A: DiffusionSpec, eps: float, quad: Optional[QuadratureRule] = None
) -> sp.csr_matrix:
    """Assembles the perturbed stiffness matrix of A_eps on the interior dofs

    Parameters
    ----------
    mesh : TensorMesh
        the mesh
    A : DiffusionSpec
        the diffusion spec
    eps : float
        the perturbation parameter
        Precondition: 0 < eps <= 1
    quad : Optional[QuadratureRule]
        the quadrature rule

    Returns
    -------
    sp.csr_matrix
        the stiffness matrix

    Raises
    ------
    InvalidEpsilonError if eps is outside (0,1]
    """
    _check_spec(mesh, A)
    return assemble_stiffness(mesh, scale_blocks(A, eps), quad)


def assemble_limit_stiffness(
    mesh: TensorMesh, A: DiffusionSpec, quad: Optional[QuadratureRule] = None
) -> sp.csr_matrix:
    """Assembles the limit stiffness matrix int A22 grad_X2 u . grad_X2 v

    Raises
    ------
    AssumptionViolatedError if A22 is not declared to depend on X2 only
    """
    _check_spec(mesh, A)
    if not A.a22_x2_only:
        raise AssumptionViolatedError(f"{A} does not declare A22 independent of X1")
    return assemble_stiffness(mesh, limit_blocks(A), quad)


def assemble_mass(mesh: TensorMesh, quad: Optional[QuadratureRule] = None) -> sp.csr_matrix:
    """Assembles the mass matrix int N_i N_j over all nodes

    Parameters
    ----------
    mesh : TensorMesh
        the mesh
    quad : Optional[QuadratureRule]
        the quadrature rule, 2 points per axis is exact

    Returns
    -------
    sp.csr_matrix
        the mass matrix of size num_nodes, boundary rows included
    """
    data = element_data(mesh, quad or QuadratureRule())
    local = np.einsum("cq,qa,qb->cab", data.weights, data.phi, data.phi, optimize=True)
    return _scatter(mesh, local)


def assemble_load(
    mesh: TensorMesh,
    f: SourceSpec,
    mode: str = "interpolated",
    quad: Optional[QuadratureRule] = None,
    mass: Optional[sp.csr_matrix] = None,
) -> np.ndarray:
    """Assembles the load vector on the interior dofs

    Parameters
    ----------
    mesh : TensorMesh
        the mesh
    f : SourceSpec
        the source
    mode : str
        "interpolated" for int I_h(f) v computed through the mass matrix,
        "quadrature" for int f v by Gauss quadrature
    quad : Optional[QuadratureRule]
        the quadrature rule
    mass : Optional[sp.csr_matrix]
        a precomputed mass matrix for the interpolated mode

    Returns
    -------
    np.ndarray
        the load vector

    Raises
    ------
    InvalidSourceError if f takes non-finite values
    ValueError if mode is unknown
    """
    if mode == "interpolated":
        nodal = evaluate_pointwise(f, mesh.node_coordinates)
        if not np.all(np.isfinite(nodal)):
            raise InvalidSourceError(f"{f} is not finite at every node")
        if mass is None:
            mass = assemble_mass(mesh, quad)
        return DofMap(mesh).restrict(mass @ nodal)
    if mode == "quadrature":
        data = element_data(mesh, quad or QuadratureRule())
        values = data.values_at_points(f)
        if not np.all(np.isfinite(values)):
            raise InvalidSourceError(f"{f} is not finite at every quadrature point")
        local = np.einsum("cq,cq,qa->ca", data.weights, values, data.phi)
        full = np.bincount(mesh.cell_nodes.ravel(), weights=local.ravel(), minlength=mesh.num_nodes)
        return DofMap(mesh).restrict(full)
    raise ValueError(f"unknown load mode '{mode}', expected one of {LOAD_MODES}")
