"""Continuous piecewise-Q1 functions on a TensorMesh.

A NodalField stores one value per mesh node, boundary nodes included, so the
same object represents elements of W_h and of V_h; membership in V_h is the
predicate NodalField.in_vh. Scalar functions are passed around as callables
taking coordinates of shape (N, P) and returning P values (or a constant).
"""
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .mesh import TensorMesh

__all__ = [
    "InvalidSourceError",
    "OutOfDomainError",
    "AmbiguousGradientError",
    "NonNestedError",
    "PointFunction",
    "DofMap",
    "NodalField",
    "evaluate_pointwise",
    "interpolate",
    "evaluate",
    "evaluate_gradient",
    "prolongate",
]

PointFunction = Callable[[np.ndarray], Union[float, np.ndarray]]
"""A scalar function of coordinates of shape (N, P)"""


class InvalidSourceError(Exception):
    """An exception thrown when a function takes non-finite values"""

    pass


class OutOfDomainError(Exception):
    """An exception thrown when a point lies outside the closed unit cube"""

    pass


class AmbiguousGradientError(Exception):
    """An exception thrown when a gradient is requested on a cell face"""

    pass


class NonNestedError(Exception):
    """An exception thrown when two meshes are not nested"""

    pass


class DofMap:
    """The numbering of interior nodes as consecutive degrees of freedom

    Fields
    ------
    interior_nodes : np.ndarray
        node id of each dof, ascending
    node_to_dof : np.ndarray
        dof id of each node, -1 on boundary nodes
    """

    def __init__(self, mesh: TensorMesh) -> None:
        self.interior_nodes = mesh.interior_nodes
        node_to_dof = np.full(mesh.num_nodes, -1, dtype=int)
        node_to_dof[self.interior_nodes] = np.arange(self.interior_nodes.size)
        node_to_dof.flags.writeable = False
        self.node_to_dof = node_to_dof
        self.num_nodes = mesh.num_nodes

    @property
    def num_dofs(self) -> int:
        """The number of interior degrees of freedom"""
        return int(self.interior_nodes.size)

    def restrict(self, values: np.ndarray) -> np.ndarray:
        """Returns the interior entries of a nodal vector"""
        return np.asarray(values)[self.interior_nodes]

    def extend(self, dofs: np.ndarray) -> np.ndarray:
        """Returns the nodal vector with the given interior entries and zero
        boundary entries"""
        values = np.zeros(self.num_nodes)
        values[self.interior_nodes] = dofs
        return values


class NodalField:
    """Values of a piecewise-Q1 function at every node of a mesh

    Fields
    ------
    mesh : TensorMesh
        the mesh the field lives on
    values : np.ndarray
        one value per node in lexicographic order, read only
    """

    mesh: TensorMesh
    """The mesh the field lives on"""
    values: np.ndarray
    """One value per node in lexicographic order"""

    def __init__(self, mesh: TensorMesh, values: Sequence[float]) -> None:
        """Creates a NodalField object

        Parameters
        ----------
        mesh : TensorMesh
            the mesh of the field
        values : Sequence[float]
            the nodal values
            Precondition: one value per node

        Raises
        ------
        ValueError if the number of values does not match the node count
        """
        vals = np.array(values, dtype=float).reshape(-1)
        if vals.size != mesh.num_nodes:
            raise ValueError(
                f"expected {mesh.num_nodes} nodal values, got {vals.size}"
            )
        vals.flags.writeable = False
        self.mesh = mesh
        self.values = vals

    @classmethod
    def zeros(cls, mesh: TensorMesh) -> "NodalField":
        """Returns the zero field on the mesh"""
        return cls(mesh, np.zeros(mesh.num_nodes))

    @classmethod
    def from_dofs(cls, mesh: TensorMesh, dofs: np.ndarray) -> "NodalField":
        """Returns the V_h field with the given interior values"""
        return cls(mesh, DofMap(mesh).extend(dofs))

    def in_vh(self, tol: float = 0.0) -> bool:
        """Returns True if the field vanishes on the boundary up to tol"""
        return bool(np.all(np.abs(self.values[self.mesh.boundary_mask]) <= tol))

    def interior_values(self) -> np.ndarray:
        """Returns the values at interior nodes in dof order"""
        return DofMap(self.mesh).restrict(self.values)

    def as_grid(self) -> np.ndarray:
        """Returns the values reshaped to the node grid (M_1+1, ..., M_N+1)"""
        return self.values.reshape(self.mesh.shape)

    def _check_mesh(self, other: "NodalField") -> None:
        if other.mesh is not self.mesh and other.mesh != self.mesh:
            raise ValueError("fields live on different meshes")

    def __add__(self, other: "NodalField") -> "NodalField":
        self._check_mesh(other)
        return NodalField(self.mesh, self.values + other.values)

    def __sub__(self, other: "NodalField") -> "NodalField":
        self._check_mesh(other)
        return NodalField(self.mesh, self.values - other.values)

    def __mul__(self, scale: float) -> "NodalField":
        return NodalField(self.mesh, self.values * float(scale))

    __rmul__ = __mul__

    def __neg__(self) -> "NodalField":
        return NodalField(self.mesh, -self.values)

    def __str__(self) -> str:
        return f"NodalField on {self.mesh}, max |v| = {np.max(np.abs(self.values)):.6g}"


def evaluate_pointwise(fn: PointFunction, x: np.ndarray) -> np.ndarray:
    """Evaluates a scalar function at P points

    Parameters
    ----------
    fn : PointFunction
        the function, which may return a constant
    x : np.ndarray
        coordinates of shape (N, P)

    Returns
    -------
    np.ndarray
        the P values
    """
    x = np.asarray(x, dtype=float)
    result = np.asarray(fn(x), dtype=float)
    return np.broadcast_to(result, (x.shape[1],)).copy()


def interpolate(f: PointFunction, mesh: TensorMesh) -> NodalField:
    """Returns the nodal interpolant I_h(f) of f on the mesh

    Parameters
    ----------
    f : PointFunction
        the function to interpolate
    mesh : TensorMesh
        the target mesh

    Returns
    -------
    NodalField
        the field whose nodal values are f at the nodes

    Raises
    ------
    InvalidSourceError if f is not finite at some node
    """
    values = evaluate_pointwise(f, mesh.node_coordinates)
    if not np.all(np.isfinite(values)):
        bad = np.flatnonzero(~np.isfinite(values))[0]
        raise InvalidSourceError(
            f"non-finite value at node {mesh.node_coordinates[:, bad].tolist()}"
        )
    return NodalField(mesh, values)


def _as_points(mesh: TensorMesh, x: Sequence[float]):
    """Returns x as an (N, P) array and whether a single point was given"""
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[:, None]
    if pts.shape[0] != mesh.dim:
        raise ValueError(f"expected {mesh.dim} coordinates, got {pts.shape[0]}")
    if not np.all((pts >= 0.0) & (pts <= 1.0)):
        raise OutOfDomainError(f"points outside [0,1]^{mesh.dim}")
    return pts, single


def _locate(mesh: TensorMesh, pts: np.ndarray) -> np.ndarray:
    """Returns the per-axis cell index of every point, lower cell on faces"""
    cells = np.empty(pts.shape, dtype=int)
    for a, grid in enumerate(mesh.grids):
        k = np.searchsorted(grid.points, pts[a], side="left")
        cells[a] = np.clip(k - 1, 0, grid.num_cells - 1)
    return cells


def _local(mesh: TensorMesh, pts: np.ndarray, cells: np.ndarray):
    """Returns local coordinates in [0,1], steps, and corner node ids"""
    t = np.empty(pts.shape)
    h = np.empty(pts.shape)
    for a, grid in enumerate(mesh.grids):
        h[a] = grid.steps[cells[a]]
        t[a] = (pts[a] - grid.points[cells[a]]) / h[a]
    bits = mesh.corner_bits
    corners = cells[None, :, :] + bits[:, :, None]
    nodes = np.ravel_multi_index(tuple(corners[:, a, :] for a in range(mesh.dim)), mesh.shape)
    return t, h, nodes


def evaluate(field: NodalField, x: Sequence[float]) -> Union[float, np.ndarray]:
    """Evaluates the Q1 function of the field at one or more points

    Parameters
    ----------
    field : NodalField
        the field to evaluate
    x : Sequence[float]
        one point of shape (N,) or points of shape (N, P)

    Returns
    -------
    Union[float, np.ndarray]
        the value, or P values

    Raises
    ------
    OutOfDomainError if a point lies outside the closed cube
    """
    mesh = field.mesh
    pts, single = _as_points(mesh, x)
    t, _, nodes = _local(mesh, pts, _locate(mesh, pts))
    bits = mesh.corner_bits
    weights = np.prod(np.where(bits[:, :, None] == 1, t[None], 1.0 - t[None]), axis=1)
    result = np.sum(weights * field.values[nodes], axis=0)
    return float(result[0]) if single else result


def evaluate_gradient(
    field: NodalField, x: Sequence[float], cell: Optional[Sequence[int]] = None
) -> np.ndarray:
    """Evaluates the gradient of the Q1 function of the field

    Parameters
    ----------
    field : NodalField
        the field to differentiate
    x : Sequence[float]
        one point of shape (N,) or points of shape (N, P)
    cell : Optional[Sequence[int]]
        per-axis cell indices of the cell whose polynomial is differentiated,
        required when a point lies on an interior cell face

    Returns
    -------
    np.ndarray
        the gradient of shape (N,), or (N, P) for several points

    Raises
    ------
    OutOfDomainError if a point lies outside the closed cube
    AmbiguousGradientError if a point lies on an interior face and no cell
    is given
    """
    mesh = field.mesh
    pts, single = _as_points(mesh, x)
    if cell is None:
        for a, grid in enumerate(mesh.grids):
            if np.any(np.isin(pts[a], grid.points[1:-1])):
                raise AmbiguousGradientError(
                    f"point on a cell face of axis {a + 1}, give the cell explicitly"
                )
        cells = _locate(mesh, pts)
    else:
        cells = np.asarray(cell, dtype=int).reshape(mesh.dim, -1)
        cells = np.broadcast_to(cells, pts.shape)
    t, h, nodes = _local(mesh, pts, cells)
    bits = mesh.corner_bits
    factors = np.where(bits[:, :, None] == 1, t[None], 1.0 - t[None])
    slopes = np.where(bits[:, :, None] == 1, 1.0, -1.0) / h[None]
    v = field.values[nodes]
    grad = np.empty(pts.shape)
    for a in range(mesh.dim):
        others = np.prod(np.delete(factors, a, axis=1), axis=1)
        grad[a] = np.sum(others * slopes[:, a, :] * v, axis=0)
    return grad[:, 0] if single else grad


def _hat_matrix(fine: np.ndarray, coarse: np.ndarray) -> np.ndarray:
    """Returns the values of the coarse 1D hats at the fine points"""
    eye = np.eye(coarse.size)
    return np.stack([np.interp(fine, coarse, eye[j]) for j in range(coarse.size)], axis=1)


def prolongate(coarse: NodalField, fine_mesh: TensorMesh) -> NodalField:
    """Represents a coarse field exactly on a nested finer mesh

    Parameters
    ----------
    coarse : NodalField
        the field on the coarse mesh
    fine_mesh : TensorMesh
        a mesh whose nodes include every coarse node

    Returns
    -------
    NodalField
        the same Q1 function as a field on fine_mesh

    Raises
    ------
    NonNestedError if fine_mesh is not a refinement of the coarse mesh
    """
    if not fine_mesh.is_refinement_of(coarse.mesh):
        raise NonNestedError(f"{fine_mesh} is not a refinement of {coarse.mesh}")
    grid = coarse.as_grid()
    for a, (f, c) in enumerate(zip(fine_mesh.grids, coarse.mesh.grids)):
        grid = np.moveaxis(np.tensordot(_hat_matrix(f.points, c.points), grid, axes=(1, a)), 0, a)
    return NodalField(fine_mesh, grid.reshape(-1))
