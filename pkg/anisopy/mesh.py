"""Tensor-product rectangular meshes of the unit square and the unit cube.
A TensorMesh is built from one Grid1D per axis together with the split
index q that separates the coordinates into X1 = (x1..xq) and
X2 = (xq+1..xN). Nodes are numbered lexicographically by (k1, ..., kN) with
the first axis varying slowest, and interior nodes keep that order.

Meshes are immutable after construction and may be shared freely.
"""
from functools import cached_property
from itertools import product
from typing import List, Sequence, Tuple

import numpy as np

__all__ = [
    "InvalidMeshError",
    "InvalidSplitError",
    "Grid1D",
    "TensorMesh",
    "build_uniform_grid",
    "build_tensor_mesh",
    "refine_halve",
]

_SUM_TOL = 1e-12


class InvalidMeshError(Exception):
    """An exception thrown when grid points do not describe a mesh of [0,1]"""

    pass


class InvalidSplitError(Exception):
    """An exception thrown when the split index q is out of range"""

    pass


class Grid1D:
    """A partition of [0,1] into cells

    Fields
    ------
    points : np.ndarray
        the ascending grid points, first 0 and last 1
        Invariant: at least 3 points (2 cells)
    steps : np.ndarray
        the cell lengths points[k] - points[k-1]
    """

    points: np.ndarray
    """The ascending grid points, first 0 and last 1"""
    steps: np.ndarray
    """The cell lengths points[k] - points[k-1]"""

    def __init__(self, points: Sequence[float]) -> None:
        """Creates a Grid1D object

        Parameters
        ----------
        points : Sequence[float]
            the grid points
            Precondition: strictly increasing from 0 to 1, at least 3 points

        Raises
        ------
        InvalidMeshError if the points do not satisfy the precondition
        """
        pts = np.array(points, dtype=float)
        if pts.ndim != 1 or pts.size < 3:
            raise InvalidMeshError("a grid needs at least 3 points (2 cells)")
        if not np.all(np.isfinite(pts)):
            raise InvalidMeshError("grid points must be finite")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise InvalidMeshError("grid points must start at 0 and end at 1")
        steps = np.diff(pts)
        if np.any(steps <= 0.0):
            raise InvalidMeshError("grid points must be strictly increasing")
        if abs(steps.sum() - 1.0) > _SUM_TOL:
            raise InvalidMeshError("grid steps must sum to 1")
        pts.flags.writeable = False
        steps.flags.writeable = False
        self.points = pts
        self.steps = steps

    @property
    def num_cells(self) -> int:
        """The number of cells M of the grid"""
        return self.points.size - 1

    def is_uniform(self, tol: float = 1e-12) -> bool:
        """Returns True if all the steps are equal up to tol"""
        return bool(np.max(self.steps) - np.min(self.steps) <= tol)

    def refine(self) -> "Grid1D":
        """Returns the grid obtained by inserting every cell midpoint

        Returns
        -------
        Grid1D
            the refined grid, which keeps every point of this grid exactly
        """
        fine = np.empty(2 * self.points.size - 1)
        fine[0::2] = self.points
        fine[1::2] = 0.5 * (self.points[:-1] + self.points[1:])
        return Grid1D(fine)

    def contains_points_of(self, other: "Grid1D") -> bool:
        """Returns True if every point of other is a point of this grid"""
        return bool(np.all(np.isin(other.points, self.points)))

    def __str__(self) -> str:
        return f"Grid1D({self.num_cells} cells, h={np.max(self.steps):.6g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Grid1D):
            return False
        return np.array_equal(self.points, other.points)


class TensorMesh:
    """A rectangular tensor-product mesh of (0,1)^N with the coordinate split

    Fields
    ------
    dim : int
        the dimension N, 2 or 3
    grids : Tuple[Grid1D, ...]
        one grid per axis
    q : int
        the split index, the first q axes form X1
        Invariant: 1 <= q < dim
    h_max : float
        the largest step over all axes
    """

    dim: int
    """The dimension N, 2 or 3"""
    grids: Tuple[Grid1D, ...]
    """One grid per axis"""
    q: int
    """The split index, the first q axes form X1"""
    h_max: float
    """The largest step over all axes"""

    def __init__(self, grids: Sequence[Grid1D], q: int) -> None:
        """Creates a TensorMesh object

        Parameters
        ----------
        grids : Sequence[Grid1D]
            one grid per axis
            Precondition: 2 or 3 grids
        q : int
            the split index
            Precondition: 1 <= q < len(grids)

        Raises
        ------
        InvalidMeshError if the number of grids is not 2 or 3
        InvalidSplitError if q is out of range
        """
        if len(grids) not in (2, 3):
            raise InvalidMeshError(f"meshes are 2D or 3D, got {len(grids)} grids")
        if not 1 <= q < len(grids):
            raise InvalidSplitError(f"split index q={q} must satisfy 1 <= q < {len(grids)}")
        self.dim = len(grids)
        self.grids = tuple(grids)
        self.q = int(q)
        self.h_max = float(max(np.max(g.steps) for g in self.grids))

    @property
    def shape(self) -> Tuple[int, ...]:
        """The number of nodes per axis"""
        return tuple(g.points.size for g in self.grids)

    @property
    def cells_shape(self) -> Tuple[int, ...]:
        """The number of cells per axis"""
        return tuple(g.num_cells for g in self.grids)

    @property
    def num_nodes(self) -> int:
        """The number of nodes, the product of (M_i + 1)"""
        return int(np.prod(self.shape))

    @property
    def num_cells(self) -> int:
        """The number of cells, the product of M_i"""
        return int(np.prod(self.cells_shape))

    @property
    def x1_axes(self) -> Tuple[int, ...]:
        """The axes of the X1 block"""
        return tuple(range(self.q))

    @property
    def x2_axes(self) -> Tuple[int, ...]:
        """The axes of the X2 block"""
        return tuple(range(self.q, self.dim))

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        """Boolean mask over nodes, True where some coordinate is 0 or 1"""
        mask = np.zeros(self.shape, dtype=bool)
        for axis in range(self.dim):
            index = [slice(None)] * self.dim
            index[axis] = 0
            mask[tuple(index)] = True
            index[axis] = -1
            mask[tuple(index)] = True
        mask = mask.reshape(-1)
        mask.flags.writeable = False
        return mask

    @cached_property
    def interior_nodes(self) -> np.ndarray:
        """The ids of the interior nodes in lexicographic order"""
        nodes = np.flatnonzero(~self.boundary_mask)
        nodes.flags.writeable = False
        return nodes

    @cached_property
    def node_coordinates(self) -> np.ndarray:
        """The node coordinates as an array of shape (N, num_nodes)"""
        axes = np.meshgrid(*[g.points for g in self.grids], indexing="ij")
        coords = np.stack([a.reshape(-1) for a in axes])
        coords.flags.writeable = False
        return coords

    @cached_property
    def corner_bits(self) -> np.ndarray:
        """The 2^N local corners of a cell as 0/1 offsets, shape (2^N, N)"""
        bits = np.array(list(product((0, 1), repeat=self.dim)), dtype=int)
        bits.flags.writeable = False
        return bits

    @cached_property
    def cell_indices(self) -> np.ndarray:
        """The multi-index of every cell, shape (num_cells, N)"""
        idx = np.indices(self.cells_shape).reshape(self.dim, -1).T
        idx.flags.writeable = False
        return idx

    @cached_property
    def cell_nodes(self) -> np.ndarray:
        """The node ids of every cell corner, shape (num_cells, 2^N)"""
        corners = self.cell_indices[:, None, :] + self.corner_bits[None, :, :]
        nodes = np.ravel_multi_index(
            tuple(corners[:, :, a] for a in range(self.dim)), self.shape
        )
        nodes.flags.writeable = False
        return nodes

    @cached_property
    def cell_origins(self) -> np.ndarray:
        """The lower corner of every cell, shape (num_cells, N)"""
        return np.stack(
            [g.points[:-1][self.cell_indices[:, a]] for a, g in enumerate(self.grids)],
            axis=1,
        )

    @cached_property
    def cell_sizes(self) -> np.ndarray:
        """The side lengths of every cell, shape (num_cells, N)"""
        return np.stack(
            [g.steps[self.cell_indices[:, a]] for a, g in enumerate(self.grids)],
            axis=1,
        )

    @cached_property
    def cell_centers(self) -> np.ndarray:
        """The cell centers as an array of shape (N, num_cells)"""
        return (self.cell_origins + 0.5 * self.cell_sizes).T

    def is_uniform(self) -> bool:
        """Returns True if every axis has equal steps"""
        return all(g.is_uniform() for g in self.grids)

    def is_refinement_of(self, coarse: "TensorMesh") -> bool:
        """Returns True if every node of coarse is a node of this mesh

        Parameters
        ----------
        coarse : TensorMesh
            the candidate coarser mesh

        Returns
        -------
        bool
            True if the meshes are nested (a mesh is nested in itself)
        """
        if coarse.dim != self.dim:
            return False
        return all(f.contains_points_of(c) for f, c in zip(self.grids, coarse.grids))

    def __str__(self) -> str:
        cells = "x".join(str(m) for m in self.cells_shape)
        return f"TensorMesh({cells} cells, q={self.q}, h={self.h_max:.6g})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorMesh):
            return False
        return self.q == other.q and self.grids == other.grids

    def __hash__(self) -> int:
        return hash((self.q, tuple(g.points.tobytes() for g in self.grids)))


def build_uniform_grid(m: int) -> Grid1D:
    """Returns the uniform grid of [0,1] with m cells

    Parameters
    ----------
    m : int
        the number of cells
        Precondition: m >= 2

    Returns
    -------
    Grid1D
        the grid with m + 1 equally spaced points

    Raises
    ------
    InvalidMeshError if m < 2
    """
    if int(m) != m or m < 2:
        raise InvalidMeshError(f"a grid needs at least 2 cells, got {m}")
    return Grid1D(np.linspace(0.0, 1.0, int(m) + 1))


def build_tensor_mesh(grids: List[Grid1D], q: int) -> TensorMesh:
    """Returns the tensor-product mesh of the given grids

    Parameters
    ----------
    grids : List[Grid1D]
        one grid per axis, 2 or 3 of them
    q : int
        the split index, 1 <= q < len(grids)

    Returns
    -------
    TensorMesh
        the mesh

    Raises
    ------
    InvalidSplitError if q is out of range
    """
    return TensorMesh(grids, q)


def refine_halve(mesh: TensorMesh) -> TensorMesh:
    """Splits every cell of the mesh in half along every axis

    Parameters
    ----------
    mesh : TensorMesh
        the mesh to refine

    Returns
    -------
    TensorMesh
        the refined mesh, nested with the input and with the same q
    """
    return TensorMesh([g.refine() for g in mesh.grids], mesh.q)
