"""Norms, errors, discrete regularity indicators and rate fits.

Seminorms select gradient components by block: "grad" is the full
gradient, "gradX1" the first q partial derivatives and "gradX2" the rest.
All integrals use the tensorized Gauss rule of assembly.QuadratureRule,
which is exact for the Q1 integrands involved with 2 points per axis.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .assembly import QuadratureRule, element_data, quadrature_points
from .mesh import TensorMesh
from .problems import SourceSpec
from .space import NodalField, prolongate

__all__ = [
    "NORMS",
    "UnsupportedMeshError",
    "UndefinedRatioError",
    "InvalidSampleError",
    "RateFit",
    "H2Indicators",
    "SourceNorms",
    "seminorm",
    "error_between",
    "error_vs_exact",
    "second_difference_indicators",
    "poincare_ratio",
    "fit_rate",
    "source_norms",
]

NORMS = ("L2", "grad", "gradX1", "gradX2")
"""The norms understood by seminorm"""


class UnsupportedMeshError(Exception):
    """An exception thrown when a stencil is applied to a nonuniform mesh"""

    pass


class UndefinedRatioError(Exception):
    """An exception thrown when a ratio has a zero denominator"""

    pass


class InvalidSampleError(Exception):
    """An exception thrown when samples cannot be fitted on a log-log scale"""

    pass


def _components(mesh: TensorMesh, which: str) -> Optional[slice]:
    """Returns the gradient components of a norm, None for L2"""
    match which:
        case "L2":
            return None
        case "grad":
            return slice(0, mesh.dim)
        case "gradX1":
            return slice(0, mesh.q)
        case "gradX2":
            return slice(mesh.q, mesh.dim)
        case _:
            raise ValueError(f"unknown norm '{which}', expected one of {NORMS}")


def seminorm(field: NodalField, which: str = "grad", quad: Optional[QuadratureRule] = None) -> float:
    """Returns the L2 norm of the field or of selected gradient components

    Parameters
    ----------
    field : NodalField
        the field
    which : str
        one of "L2", "grad", "gradX1", "gradX2"
    quad : Optional[QuadratureRule]
        the quadrature rule

    Returns
    -------
    float
        the norm
    """
    mesh = field.mesh
    components = _components(mesh, which)
    data = element_data(mesh, quad or QuadratureRule())
    local = field.values[mesh.cell_nodes]
    if components is None:
        values = np.einsum("qk,ck->cq", data.phi, local)
        return float(np.sqrt(np.sum(data.weights * values**2)))
    grads = np.einsum("cqkn,ck->cqn", data.grads, local)[:, :, components]
    return float(np.sqrt(np.sum(data.weights * np.sum(grads**2, axis=2))))


def error_between(
    coarse: NodalField, fine: NodalField, which: str = "gradX2", quad: Optional[QuadratureRule] = None
) -> float:
    """Returns the norm of the difference of a coarse field and a field on a
    nested finer mesh, computed on the fine mesh

    Raises
    ------
    NonNestedError if fine.mesh is not a refinement of coarse.mesh
    """
    return seminorm(prolongate(coarse, fine.mesh) - fine, which, quad)


def error_vs_exact(
    field: NodalField, exact, which: str = "grad", quad: Optional[QuadratureRule] = None
) -> float:
    """Returns the norm of the difference between a field and an exact
    function

    Parameters
    ----------
    field : NodalField
        the discrete field
    exact : Callable[[np.ndarray], np.ndarray]
        for "L2" the exact values, otherwise the exact gradient of shape (N, P)
    which : str
        one of "L2", "grad", "gradX1", "gradX2"
    quad : Optional[QuadratureRule]
        the quadrature rule, use 3 points per axis for smooth exact functions

    Returns
    -------
    float
        the quadrature norm of the difference
    """
    mesh = field.mesh
    components = _components(mesh, which)
    data = element_data(mesh, quad or QuadratureRule())
    local = field.values[mesh.cell_nodes]
    points = data.flat_points()
    if components is None:
        values = np.einsum("qk,ck->cq", data.phi, local)
        reference = np.asarray(exact(points), dtype=float).reshape(values.shape)
        return float(np.sqrt(np.sum(data.weights * (values - reference) ** 2)))
    grads = np.einsum("cqkn,ck->cqn", data.grads, local)
    reference = np.asarray(exact(points), dtype=float).reshape(mesh.dim, *data.weights.shape)
    diff = grads - np.moveaxis(reference, 0, -1)
    return float(np.sqrt(np.sum(data.weights * np.sum(diff[:, :, components] ** 2, axis=2))))


@dataclass
class H2Indicators:
    """Discrete second-derivative norms of a field, grouped by block

    Fields
    ------
    d2x1 : float
        Frobenius norm of the second differences within X1
    d2x1x2 : float
        norm of the mixed X1/X2 second differences
    d2x2 : float
        Frobenius norm of the second differences within X2
    combined : float
        eps^2 d2x1 + eps d2x1x2 + d2x2
    """

    d2x1: float
    d2x1x2: float
    d2x2: float
    combined: float


def second_difference_indicators(field: NodalField, eps: float) -> H2Indicators:
    """Computes second-difference surrogates of the H2 seminorms on the
    interior nodes of a uniform mesh

    Parameters
    ----------
    field : NodalField
        the field
    eps : float
        the weight used for the combined indicator

    Returns
    -------
    H2Indicators
        the indicators

    Raises
    ------
    UnsupportedMeshError if the mesh is not uniform along every axis
    """
    mesh = field.mesh
    if not mesh.is_uniform():
        raise UnsupportedMeshError(f"second differences need a uniform mesh, got {mesh}")
    v = field.as_grid()
    n = mesh.dim
    h = [g.steps[0] for g in mesh.grids]
    volume = float(np.prod(h))
    inner = tuple(slice(1, -1) for _ in range(n))

    def shifted(offsets):
        return v[tuple(slice(1 + o, v.shape[a] - 1 + o) for a, o in enumerate(offsets))]

    squares = np.zeros((n, n))
    for a in range(n):
        e = [0] * n
        e[a] = 1
        minus = [-o for o in e]
        d = (shifted(e) - 2.0 * v[inner] + shifted(minus)) / h[a] ** 2
        squares[a, a] = volume * np.sum(d**2)
        for b in range(a + 1, n):
            pp = [0] * n
            pp[a], pp[b] = 1, 1
            pm = [0] * n
            pm[a], pm[b] = 1, -1
            d = (shifted(pp) - shifted(pm) - shifted([-o for o in pm]) + shifted([-o for o in pp])) / (
                4.0 * h[a] * h[b]
            )
            squares[a, b] = squares[b, a] = volume * np.sum(d**2)
    x1 = list(mesh.x1_axes)
    x2 = list(mesh.x2_axes)
    d2x1 = float(np.sqrt(np.sum(squares[np.ix_(x1, x1)])))
    d2x2 = float(np.sqrt(np.sum(squares[np.ix_(x2, x2)])))
    d2x1x2 = float(np.sqrt(np.sum(squares[np.ix_(x1, x2)])))
    return H2Indicators(d2x1, d2x1x2, d2x2, eps**2 * d2x1 + eps * d2x1x2 + d2x2)


def poincare_ratio(field: NodalField, quad: Optional[QuadratureRule] = None) -> float:
    """Returns ||v|| / ||grad_X2 v|| for a field vanishing on the boundary

    Raises
    ------
    ValueError if the field does not vanish on the boundary
    UndefinedRatioError if the X2 gradient of the field is zero
    """
    scale = float(np.max(np.abs(field.values))) if field.values.size else 0.0
    if not field.in_vh(tol=1e-12 * scale):
        raise ValueError("the Poincare ratio needs a field vanishing on the boundary")
    denominator = seminorm(field, "gradX2", quad)
    if denominator == 0.0:
        raise UndefinedRatioError("the field has zero X2 gradient")
    return seminorm(field, "L2", quad) / denominator


@dataclass
class RateFit:
    """A least-squares fit of log(error) against log(parameter)

    Fields
    ------
    samples : List[Tuple[float, float]]
        the (parameter, error) pairs used in the fit
    slope : float
        the fitted exponent
    intercept : float
        the fitted log constant
    r2 : float
        the coefficient of determination in [0,1]
    dropped : List[Tuple[float, float]]
        samples left out for lying at or below the floor
    """

    samples: List[Tuple[float, float]]
    slope: float
    intercept: float
    r2: float
    dropped: List[Tuple[float, float]] = field(default_factory=list)


def fit_rate(samples: Sequence[Tuple[float, float]], floor: Optional[float] = None) -> RateFit:
    """Fits error = C parameter^slope by least squares on log-log scale

    Parameters
    ----------
    samples : Sequence[Tuple[float, float]]
        the (parameter, error) pairs
    floor : Optional[float]
        errors at or below the floor are dropped before fitting

    Returns
    -------
    RateFit
        the fit

    Raises
    ------
    InvalidSampleError if a parameter or error is not positive, or if fewer
    than 2 distinct parameters remain
    """
    pairs = [(float(p), float(e)) for p, e in samples]
    dropped = [] if floor is None else [s for s in pairs if s[1] <= floor]
    kept = pairs if floor is None else [s for s in pairs if s[1] > floor]
    for p, e in pairs:
        if not (p > 0 and np.isfinite(p) and np.isfinite(e)):
            raise InvalidSampleError(f"samples must be positive and finite, got ({p}, {e})")
    for p, e in kept:
        if not e > 0:
            raise InvalidSampleError(f"samples must be positive and finite, got ({p}, {e})")
    if len({p for p, _ in kept}) < 2:
        raise InvalidSampleError(f"need at least 2 distinct samples above the floor, got {len(kept)}")
    x = np.log([p for p, _ in kept])
    y = np.log([e for _, e in kept])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = np.sum((y - np.mean(y)) ** 2)
    r2 = 1.0 if total == 0.0 else float(np.clip(1.0 - np.sum(residual**2) / total, 0.0, 1.0))
    return RateFit(kept, float(slope), float(intercept), r2, dropped)


@dataclass
class SourceNorms:
    """Full Sobolev norms of a source"""

    l2: float
    h1: float
    h2: float


def source_norms(
    source: SourceSpec, mesh: TensorMesh, quad: Optional[QuadratureRule] = None
) -> SourceNorms:
    """Integrates the L2, H1 and H2 norms of a source by Gauss quadrature on
    the cells of a mesh

    Parameters
    ----------
    source : SourceSpec
        the source, with analytic derivatives when available
    mesh : TensorMesh
        the mesh supplying the cells
    quad : Optional[QuadratureRule]
        the quadrature rule, 3 points per axis by default

    Returns
    -------
    SourceNorms
        the three norms
    """
    points, weights = quadrature_points(mesh, quad or QuadratureRule(3))
    x = points.reshape(-1, mesh.dim).T
    w = weights.reshape(-1)
    l2 = np.sum(w * source(x) ** 2)
    h1 = l2 + np.sum(w * np.sum(source.grad(x) ** 2, axis=0))
    h2 = h1 + np.sum(w * np.sum(source.hess(x) ** 2, axis=(0, 1)))
    return SourceNorms(float(np.sqrt(l2)), float(np.sqrt(h1)), float(np.sqrt(h2)))
