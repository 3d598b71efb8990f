"""Diffusion matrices, sources, the epsilon block scaling and the smooth
cutoff used to split a source into a trace-free part and a boundary part.

The coordinates are split as X = (X1, X2) with X1 = (x1..xq). For
0 < eps <= 1 the perturbed matrix is

    A_eps = [[eps^2 A11, eps A12], [eps A21, A22]]

and the limit problem keeps only the A22 block.
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .mesh import TensorMesh
from .space import PointFunction, evaluate_pointwise

__all__ = [
    "InvalidEpsilonError",
    "InvalidDeltaError",
    "DegenerateCutoffError",
    "AssumptionViolatedError",
    "UnknownProblemError",
    "TAGS",
    "RAMP_CONSTANT",
    "DiffusionSpec",
    "SourceSpec",
    "SmoothCutoff",
    "ValidationReport",
    "check_epsilon",
    "scaling_matrix",
    "scale_blocks",
    "limit_blocks",
    "validate_spec",
    "build_cutoff",
    "split_source",
    "DIFFUSIONS",
    "SOURCES",
    "build_diffusion",
    "build_source",
]


class InvalidEpsilonError(Exception):
    """An exception thrown when eps is outside (0,1]"""

    pass


class InvalidDeltaError(Exception):
    """An exception thrown when a cutoff parameter is out of range"""

    pass


class DegenerateCutoffError(Exception):
    """An exception thrown when the inner box of a cutoff is empty"""

    pass


class AssumptionViolatedError(Exception):
    """An exception thrown when a diffusion matrix lacks a required property"""

    pass


class UnknownProblemError(Exception):
    """An exception thrown when a diffusion or source name is not registered"""

    pass


TAGS = frozenset({"H2", "H10", "Linf"})
"""The regularity tags a source may declare"""

RAMP_CONSTANT = 45.0 / 16.0
"""Sup of the cutoff ramp derivative times c2 * delta"""

Entry = Union[float, PointFunction]
MatrixFunction = Callable[[np.ndarray], np.ndarray]
VectorFunction = Callable[[np.ndarray], np.ndarray]


def _entry_values(entry: Entry, x: np.ndarray) -> np.ndarray:
    if callable(entry):
        return evaluate_pointwise(entry, x)
    return np.full(x.shape[1], float(entry))


class DiffusionSpec:
    """A pointwise diffusion matrix A(x) with its declared properties

    Fields
    ------
    name : str
        the name of the diffusion matrix
    dim : int
        the dimension N
    q : int
        the split index
    entries : Tuple[Tuple[Entry, ...], ...]
        the N x N entries, constants or functions of the coordinates
    lambda_claimed : float
        the claimed ellipticity constant
    symmetric : bool
        A(x) is declared symmetric
    lipschitz : bool
        the entries are declared Lipschitz
    offdiag_zero_on_boundary : bool
        off-diagonal entries are declared to vanish on the boundary
    a22_x2_only : bool
        the A22 block is declared to depend on X2 only
    """

    def __init__(
        self,
        name: str,
        entries: Sequence[Sequence[Entry]],
        q: int,
        lambda_claimed: float,
        symmetric: bool = True,
        lipschitz: bool = True,
        offdiag_zero_on_boundary: bool = True,
        a22_x2_only: bool = True,
    ) -> None:
        """Creates a DiffusionSpec object

        Raises
        ------
        ValueError if entries is not square of size 2 or 3, q is out of
        range, or lambda_claimed is not positive
        """
        dim = len(entries)
        if dim not in (2, 3) or any(len(row) != dim for row in entries):
            raise ValueError("diffusion entries must form a 2x2 or 3x3 matrix")
        if not 1 <= q < dim:
            raise ValueError(f"split index q={q} must satisfy 1 <= q < {dim}")
        if not lambda_claimed > 0:
            raise ValueError("the claimed ellipticity constant must be positive")
        self.name = name
        self.dim = dim
        self.q = q
        self.entries = tuple(tuple(row) for row in entries)
        self.lambda_claimed = float(lambda_claimed)
        self.symmetric = symmetric
        self.lipschitz = lipschitz
        self.offdiag_zero_on_boundary = offdiag_zero_on_boundary
        self.a22_x2_only = a22_x2_only

    def matrix(self, x: np.ndarray) -> np.ndarray:
        """Returns A at the points x of shape (N, P) as an (N, N, P) array"""
        x = np.asarray(x, dtype=float)
        return np.stack(
            [np.stack([_entry_values(e, x) for e in row]) for row in self.entries]
        )

    def blocks(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Returns the blocks A11, A12, A21, A22 at the points x"""
        m = self.matrix(x)
        q = self.q
        return m[:q, :q], m[:q, q:], m[q:, :q], m[q:, q:]

    def flags(self) -> Dict[str, bool]:
        """Returns the declared assumption flags by name"""
        return {
            "symmetric": self.symmetric,
            "lipschitz": self.lipschitz,
            "offdiag_zero_on_boundary": self.offdiag_zero_on_boundary,
            "a22_x2_only": self.a22_x2_only,
        }

    def __str__(self) -> str:
        return f"DiffusionSpec({self.name}, N={self.dim}, q={self.q})"


class SourceSpec:
    """A source term f with declared regularity and optional derivatives

    Fields
    ------
    name : str
        the name of the source
    function : PointFunction
        the values of f
    tags : FrozenSet[str]
        the declared regularity classes, a subset of TAGS
    gradient : Optional[VectorFunction]
        the analytic gradient, of shape (N, P)
    hessian : Optional[MatrixFunction]
        the analytic Hessian, of shape (N, N, P)
    exact_gradient : Optional[VectorFunction]
        the gradient of the exact solution when one is known
    exact_for : Optional[Tuple[str, float]]
        the diffusion name and eps for which exact_gradient is exact
    """

    GRADIENT_STEP = 1e-5
    HESSIAN_STEP = 1e-4

    def __init__(
        self,
        name: str,
        function: PointFunction,
        tags: Iterable[str] = (),
        gradient: Optional[VectorFunction] = None,
        hessian: Optional[MatrixFunction] = None,
        exact_gradient: Optional[VectorFunction] = None,
        exact_for: Optional[Tuple[str, float]] = None,
    ) -> None:
        tags = frozenset(tags)
        unknown = tags - TAGS
        if unknown:
            raise ValueError(f"unknown regularity tags {sorted(unknown)}")
        self.name = name
        self.function = function
        self.tags = tags
        self.gradient = gradient
        self.hessian = hessian
        self.exact_gradient = exact_gradient
        self.exact_for = exact_for

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return evaluate_pointwise(self.function, x)

    def has_tag(self, tag: str) -> bool:
        return tag in self.tags

    def is_exact_for(self, diffusion: str, eps: Optional[float]) -> bool:
        """Returns True if exact_gradient solves the problem with the given
        diffusion name and eps (None for the limit problem)"""
        if self.exact_gradient is None or self.exact_for is None or eps is None:
            return False
        return self.exact_for[0] == diffusion and self.exact_for[1] == eps

    def grad(self, x: np.ndarray) -> np.ndarray:
        """Returns the gradient at x, by central differences when no analytic
        gradient was given"""
        x = np.asarray(x, dtype=float)
        if self.gradient is not None:
            return np.broadcast_to(np.asarray(self.gradient(x), dtype=float), x.shape).copy()
        step = self.GRADIENT_STEP
        out = np.empty(x.shape)
        for a in range(x.shape[0]):
            e = np.zeros((x.shape[0], 1))
            e[a] = step
            out[a] = (self(x + e) - self(x - e)) / (2 * step)
        return out

    def hess(self, x: np.ndarray) -> np.ndarray:
        """Returns the Hessian at x, by central differences when no analytic
        Hessian was given"""
        x = np.asarray(x, dtype=float)
        n = x.shape[0]
        if self.hessian is not None:
            return np.broadcast_to(np.asarray(self.hessian(x), dtype=float), (n, n, x.shape[1])).copy()
        step = self.HESSIAN_STEP
        out = np.empty((n, n, x.shape[1]))
        for a in range(n):
            for b in range(a, n):
                ea = np.zeros((n, 1))
                eb = np.zeros((n, 1))
                ea[a] = step
                eb[b] = step
                value = (
                    self(x + ea + eb) - self(x + ea - eb) - self(x - ea + eb) + self(x - ea - eb)
                ) / (4 * step * step)
                out[a, b] = value
                out[b, a] = value
        return out

    def __str__(self) -> str:
        return f"SourceSpec({self.name}, tags={sorted(self.tags)})"


def check_epsilon(eps: float) -> float:
    """Returns eps as a float after checking 0 < eps <= 1

    Raises
    ------
    InvalidEpsilonError if eps is outside (0,1]
    """
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise InvalidEpsilonError(f"eps must lie in (0,1], got {eps}")
    return eps


def scaling_matrix(dim: int, q: int, eps: float) -> np.ndarray:
    """Returns S with S[i,j] = eps^([i<q] + [j<q]), so that A_eps = S * A"""
    powers = (np.arange(dim) < q).astype(int)
    return eps ** (powers[:, None] + powers[None, :]).astype(float)


def scale_blocks(A: DiffusionSpec, eps: float) -> MatrixFunction:
    """Returns the pointwise matrix function of A_eps

    Parameters
    ----------
    A : DiffusionSpec
        the diffusion spec
    eps : float
        the perturbation parameter
        Precondition: 0 < eps <= 1

    Returns
    -------
    MatrixFunction
        function mapping points (N, P) to the (N, N, P) values of A_eps

    Raises
    ------
    InvalidEpsilonError if eps is outside (0,1]
    """
    scale = scaling_matrix(A.dim, A.q, check_epsilon(eps))[:, :, None]

    def a_eps(x: np.ndarray) -> np.ndarray:
        return A.matrix(x) * scale

    return a_eps


def limit_blocks(A: DiffusionSpec) -> MatrixFunction:
    """Returns the pointwise matrix function with only the A22 block kept"""
    mask = np.zeros((A.dim, A.dim, 1))
    mask[A.q :, A.q :] = 1.0

    def a_limit(x: np.ndarray) -> np.ndarray:
        return A.matrix(x) * mask

    return a_limit


@dataclass
class ValidationReport:
    """The outcome of validate_spec

    Fields
    ------
    min_eigenvalue : float
        the smallest eigenvalue of sym(A) over the sample points
    checks : Dict[str, bool]
        one entry per check performed
    """

    min_eigenvalue: float
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    @property
    def passed(self) -> bool:
        return not self.failures

    def satisfies(self, names: Iterable[str]) -> bool:
        """Returns True if every named check was performed and passed"""
        return all(self.checks.get(name, False) for name in names)

    def missing(self, names: Iterable[str]) -> List[str]:
        """Returns the named checks that failed or were not performed"""
        return [name for name in names if not self.checks.get(name, False)]


_SYMMETRY_TOL = 1e-12
_BOUNDARY_TOL = 1e-12
_TRACE_TOL = 1e-10


def validate_spec(A: DiffusionSpec, f: SourceSpec, mesh: TensorMesh) -> ValidationReport:
    """Checks the declared properties of A and f on the nodes and cell
    centers of the mesh

    Parameters
    ----------
    A : DiffusionSpec
        the diffusion spec
    f : SourceSpec
        the source
    mesh : TensorMesh
        the mesh supplying the sample points

    Returns
    -------
    ValidationReport
        the sampled minimum eigenvalue and one check per property: always
        ellipticity, lambda, lipschitz and source_finite, plus one per
        declared flag and source_H10 when f is tagged H10
    """
    if A.dim != mesh.dim or A.q != mesh.q:
        raise ValueError(f"{A} does not match {mesh}")
    samples = np.hstack([mesh.node_coordinates, mesh.cell_centers])
    values = A.matrix(samples)
    stacked = np.moveaxis(values, -1, 0)
    checks: Dict[str, bool] = {}

    finite = bool(np.all(np.isfinite(stacked)))
    if finite:
        sym = 0.5 * (stacked + np.swapaxes(stacked, 1, 2))
        min_eig = float(np.min(np.linalg.eigvalsh(sym)))
    else:
        min_eig = float("nan")
    checks["ellipticity"] = finite and min_eig > 0.0
    checks["lambda"] = finite and min_eig >= A.lambda_claimed * (1.0 - 1e-12)
    checks["lipschitz"] = bool(A.lipschitz)

    if A.symmetric:
        gap = np.max(np.abs(stacked - np.swapaxes(stacked, 1, 2)))
        checks["symmetric"] = bool(finite and gap <= _SYMMETRY_TOL * max(1.0, np.max(np.abs(stacked))))

    if A.offdiag_zero_on_boundary:
        boundary = A.matrix(mesh.node_coordinates[:, mesh.boundary_mask])
        off = ~np.eye(A.dim, dtype=bool)
        checks["offdiag_zero_on_boundary"] = bool(np.all(np.abs(boundary[off]) <= _BOUNDARY_TOL))

    if A.a22_x2_only:
        q = A.q
        base = A.blocks(samples)[3]
        same = True
        for shift in (1, samples.shape[1] // 3 + 1):
            moved = samples.copy()
            moved[:q] = np.roll(samples[:q], shift, axis=1)
            same = same and bool(
                np.all(np.abs(A.blocks(moved)[3] - base) <= _SYMMETRY_TOL * max(1.0, np.max(np.abs(base))))
            )
        checks["a22_x2_only"] = same

    source_values = f(samples)
    checks["source_finite"] = bool(np.all(np.isfinite(source_values)))
    if f.has_tag("H10"):
        trace = f(mesh.node_coordinates[:, mesh.boundary_mask])
        checks["source_H10"] = bool(np.all(np.abs(trace) <= _TRACE_TOL))

    return ValidationReport(min_eigenvalue=min_eig, checks=checks)


def _smoothstep(u: np.ndarray) -> np.ndarray:
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)


def _smoothstep_d1(u: np.ndarray) -> np.ndarray:
    return 30.0 * u * u * (1.0 - u) ** 2


def _smoothstep_d2(u: np.ndarray) -> np.ndarray:
    return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u)


class SmoothCutoff:
    """A tensorized smooth cutoff rho(x) = prod psi(x_i) on the unit cube

    psi is 0 on [0, c2 delta / 3], rises along a quintic smoothstep, is 1 on
    [c2 delta, 1 - c2 delta], and is symmetric about 1/2.

    Fields
    ------
    delta : float
        the cutoff width parameter
    c2 : float
        the geometry constant
    axes : Optional[Tuple[int, ...]]
        the axes the ramp is applied on, all axes when None
    grad_sup : float
        the sup of |psi'|, which bounds every partial derivative of rho
    """

    def __init__(self, delta: float, c2: float, axes: Optional[Sequence[int]] = None) -> None:
        self.delta = float(delta)
        self.c2 = float(c2)
        self.axes = None if axes is None else tuple(sorted(set(axes)))
        self.inner = self.c2 * self.delta
        self.outer = self.inner / 3.0
        self.grad_sup = RAMP_CONSTANT / self.inner

    def _ramp(self, t: np.ndarray):
        width = self.inner - self.outer
        dist = np.minimum(t, 1.0 - t)
        sign = np.where(t < 0.5, 1.0, -1.0)
        u = np.clip((dist - self.outer) / width, 0.0, 1.0)
        return (
            _smoothstep(u),
            _smoothstep_d1(u) * sign / width,
            _smoothstep_d2(u) / (width * width),
        )

    def _axes(self, dim: int) -> Tuple[int, ...]:
        return tuple(range(dim)) if self.axes is None else self.axes

    def psi(self, t: np.ndarray) -> np.ndarray:
        """Returns the 1D ramp at t"""
        return self._ramp(np.asarray(t, dtype=float))[0]

    def psi_prime(self, t: np.ndarray) -> np.ndarray:
        """Returns the derivative of the 1D ramp at t"""
        return self._ramp(np.asarray(t, dtype=float))[1]

    def _factors(self, x: np.ndarray):
        x = np.asarray(x, dtype=float)
        n, p = x.shape
        val = np.ones((n, p))
        d1 = np.zeros((n, p))
        d2 = np.zeros((n, p))
        axes = self._axes(n)
        if axes and axes[-1] >= n:
            raise ValueError(f"{self} used with {n}-dimensional points")
        for a in axes:
            val[a], d1[a], d2[a] = self._ramp(x[a])
        return val, d1, d2

    def __call__(self, x: np.ndarray) -> np.ndarray:
        val, _, _ = self._factors(x)
        return np.prod(val, axis=0)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        """Returns the gradient of rho, shape (N, P)"""
        val, d1, _ = self._factors(x)
        n = val.shape[0]
        return np.stack([d1[a] * np.prod(np.delete(val, a, axis=0), axis=0) for a in range(n)])

    def hessian(self, x: np.ndarray) -> np.ndarray:
        """Returns the Hessian of rho, shape (N, N, P)"""
        val, d1, d2 = self._factors(x)
        n, p = val.shape
        out = np.empty((n, n, p))
        for a in range(n):
            for b in range(n):
                if a == b:
                    out[a, a] = d2[a] * np.prod(np.delete(val, a, axis=0), axis=0)
                else:
                    rest = np.prod(np.delete(val, [a, b], axis=0), axis=0)
                    out[a, b] = d1[a] * d1[b] * rest
        return out

    def __str__(self) -> str:
        return f"SmoothCutoff(delta={self.delta:g}, c2={self.c2:g}, axes={self.axes})"


def build_cutoff(
    delta: float, c2: float = 1.0, axes: Optional[Sequence[int]] = None, dim: Optional[int] = None
) -> SmoothCutoff:
    """Returns the smooth cutoff for the given width

    Parameters
    ----------
    delta : float
        the width parameter
        Precondition: 0 < delta < 1
    c2 : float
        the geometry constant
        Precondition: 0 < c2 <= 1
    axes : Optional[Sequence[int]]
        restrict the ramp to these axes (zero trace on their faces only)
    dim : Optional[int]
        the dimension the cutoff is used in, checked against axes when given

    Returns
    -------
    SmoothCutoff
        the cutoff

    Raises
    ------
    InvalidDeltaError if delta or c2 is out of range
    ValueError if axes is empty, negative or not below dim
    DegenerateCutoffError if c2 * delta >= 1/2
    """
    if not 0.0 < delta < 1.0:
        raise InvalidDeltaError(f"delta must lie in (0,1), got {delta}")
    if not 0.0 < c2 <= 1.0:
        raise InvalidDeltaError(f"c2 must lie in (0,1], got {c2}")
    if c2 * delta >= 0.5:
        raise DegenerateCutoffError(f"c2 * delta = {c2 * delta:g} leaves no inner box")
    if axes is not None:
        axes = [int(a) for a in axes]
        if not axes or min(axes) < 0:
            raise ValueError(f"cutoff axes must be a nonempty list of nonnegative indices, got {axes}")
        if dim is not None and max(axes) >= dim:
            raise ValueError(f"cutoff axis {max(axes)} does not exist in dimension {dim}")
    return SmoothCutoff(delta, c2, axes)


def split_source(
    f: SourceSpec,
    delta: float,
    c2: float = 1.0,
    axes: Optional[Sequence[int]] = None,
    dim: Optional[int] = None,
) -> Tuple[SourceSpec, SourceSpec]:
    """Splits f into rho f and f - rho f

    Parameters
    ----------
    f : SourceSpec
        the source to split
    delta : float
        the cutoff width parameter
    c2 : float
        the cutoff geometry constant
    axes : Optional[Sequence[int]]
        restrict the cutoff to these axes
    dim : Optional[int]
        the dimension of the source, checked against axes when given

    Returns
    -------
    Tuple[SourceSpec, SourceSpec]
        (f1, f2) with f1 + f2 = f; f1 is tagged H10 when the cutoff acts on
        every axis

    Raises
    ------
    InvalidDeltaError, DegenerateCutoffError, ValueError as build_cutoff
    """
    rho = build_cutoff(delta, c2, axes, dim)

    def f1(x):
        return rho(x) * f(x)

    def f2(x):
        return f(x) - f1(x)

    def grad1(x):
        return rho(x) * f.grad(x) + f(x) * rho.gradient(x)

    def hess1(x):
        g = f.grad(x)
        dr = rho.gradient(x)
        cross = dr[:, None, :] * g[None, :, :]
        return rho(x) * f.hess(x) + cross + np.swapaxes(cross, 0, 1) + f(x) * rho.hessian(x)

    tags1 = set(f.tags & {"H2", "Linf"})
    if axes is None:
        tags1.add("H10")
    first = SourceSpec(f"{f.name}*rho", f1, tags1, grad1, hess1)
    second = SourceSpec(
        f"{f.name}*(1-rho)",
        f2,
        f.tags,
        lambda x: f.grad(x) - grad1(x),
        lambda x: f.hess(x) - hess1(x),
    )
    return first, second


# builtin problems


def _constant_matrix(matrix: np.ndarray) -> List[List[float]]:
    return [[float(v) for v in row] for row in matrix]


def _identity(dim: int, q: int, params: Dict) -> DiffusionSpec:
    return DiffusionSpec("identity", _constant_matrix(np.eye(dim)), q, 1.0)


def _anisotropic_constant(dim: int, q: int, params: Dict) -> DiffusionSpec:
    a = float(params.get("a", 2.0))
    b = float(params.get("b", 1.0))
    if a <= 0 or b <= 0:
        raise ValueError("anisotropic-constant needs a > 0 and b > 0")
    diag = np.where(np.arange(dim) < q, a, b)
    return DiffusionSpec("anisotropic-constant", _constant_matrix(np.diag(diag)), q, min(a, b))


def _variable_offdiag(dim: int, q: int, params: Dict) -> DiffusionSpec:
    c = float(params.get("c", 1.0))

    def bubble(x):
        return c * np.prod(x * (1.0 - x), axis=0)

    entries: List[List[Entry]] = _constant_matrix(np.eye(dim))
    for i in range(q):
        for j in range(q, dim):
            entries[i][j] = bubble
            entries[j][i] = bubble
    return DiffusionSpec("variable-offdiag", entries, q, float(params.get("lambda", 0.5)))


DIFFUSIONS: Dict[str, Callable[[int, int, Dict], DiffusionSpec]] = {
    "identity": _identity,
    "anisotropic-constant": _anisotropic_constant,
    "variable-offdiag": _variable_offdiag,
}
"""The builtin diffusion specs by name"""


Factor = Tuple[Callable, Callable, Callable]

_SINE: Factor = (
    lambda t: np.sin(np.pi * t),
    lambda t: np.pi * np.cos(np.pi * t),
    lambda t: -np.pi**2 * np.sin(np.pi * t),
)
_ONE: Factor = (np.ones_like, np.zeros_like, np.zeros_like)
_AFFINE: Factor = (lambda t: 1.0 + t, np.ones_like, np.zeros_like)


def _separable(factors: Sequence[Factor], scale: float = 1.0):
    """Returns value, gradient and Hessian of scale * prod factors[i](x_i)"""

    def parts(x):
        x = np.asarray(x, dtype=float)
        return [np.stack([fac[k](x[i]) for i, fac in enumerate(factors)]) for k in range(3)]

    def value(x):
        g, _, _ = parts(x)
        return scale * np.prod(g, axis=0)

    def gradient(x):
        g, g1, _ = parts(x)
        return scale * np.stack(
            [g1[a] * np.prod(np.delete(g, a, axis=0), axis=0) for a in range(len(factors))]
        )

    def hessian(x):
        g, g1, g2 = parts(x)
        n = len(factors)
        out = np.empty((n, n, g.shape[1]))
        for a in range(n):
            for b in range(n):
                if a == b:
                    out[a, a] = g2[a] * np.prod(np.delete(g, a, axis=0), axis=0)
                else:
                    out[a, b] = g1[a] * g1[b] * np.prod(np.delete(g, [a, b], axis=0), axis=0)
        return scale * out

    return value, gradient, hessian


def _sine_product(dim: int, q: int, params: Dict) -> SourceSpec:
    value, gradient, hessian = _separable([_SINE] * dim)
    return SourceSpec("sine-product", value, {"H10", "H2", "Linf"}, gradient, hessian)


def _one(dim: int, q: int, params: Dict) -> SourceSpec:
    value, gradient, hessian = _separable([_ONE] * dim)
    return SourceSpec("one", value, {"H2", "Linf"}, gradient, hessian)


def _x2_profile(dim: int, q: int, params: Dict) -> SourceSpec:
    factors = [_AFFINE] + [_ONE] * (q - 1) + [_SINE] * (dim - q)
    value, gradient, hessian = _separable(factors)
    return SourceSpec("x2-profile", value, {"H2", "Linf"}, gradient, hessian)


def _poisson_sine(dim: int, q: int, params: Dict) -> SourceSpec:
    value, gradient, hessian = _separable([_SINE] * dim, dim * np.pi**2)
    _, exact_gradient, _ = _separable([_SINE] * dim)
    return SourceSpec(
        "poisson-sine",
        value,
        {"H10", "H2", "Linf"},
        gradient,
        hessian,
        exact_gradient=exact_gradient,
        exact_for=("identity", 1.0),
    )


SOURCES: Dict[str, Callable[[int, int, Dict], SourceSpec]] = {
    "sine-product": _sine_product,
    "one": _one,
    "x2-profile": _x2_profile,
    "poisson-sine": _poisson_sine,
}
"""The builtin sources by name"""


def build_diffusion(name: str, dim: int, q: int, params: Optional[Dict] = None) -> DiffusionSpec:
    """Returns the builtin diffusion spec with the given name

    Raises
    ------
    UnknownProblemError if no builtin spec has that name
    """
    if name not in DIFFUSIONS:
        raise UnknownProblemError(f"unknown diffusion '{name}', known: {sorted(DIFFUSIONS)}")
    return DIFFUSIONS[name](dim, q, params or {})


def build_source(name: str, dim: int, q: int, params: Optional[Dict] = None) -> SourceSpec:
    """Returns the builtin source with the given name

    Raises
    ------
    UnknownProblemError if no builtin source has that name
    """
    if name not in SOURCES:
        raise UnknownProblemError(f"unknown source '{name}', known: {sorted(SOURCES)}")
    return SOURCES[name](dim, q, params or {})
