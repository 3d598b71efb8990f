"""Linear solvers for the assembled systems: Jacobi preconditioned conjugate
gradients for production solves and a dense LU solve used as an oracle.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Tuple, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

__all__ = [
    "DEFAULT_TOL",
    "DENSE_LIMIT",
    "SolveStats",
    "NonConvergenceError",
    "NotSPDError",
    "SingularMatrixError",
    "default_maxit",
    "cg_solve",
    "dense_solve",
    "is_symmetric",
]

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
"""The default relative residual tolerance of cg_solve"""

DENSE_LIMIT = 10_000
"""The largest system dense_solve accepts"""

_RESTARTS = 3

Matrix = Union[sp.spmatrix, np.ndarray]


@dataclass
class SolveStats:
    """Statistics of one iterative solve

    Fields
    ------
    iterations : int
        the number of CG iterations
    residual : float
        the final relative residual ||Mx - b|| / ||b||
    converged : bool
        whether the residual reached the tolerance
    """

    iterations: int
    residual: float
    converged: bool


class NonConvergenceError(Exception):
    """An exception thrown when CG exceeds its iteration budget"""

    def __init__(self, stats: SolveStats) -> None:
        super().__init__(
            f"CG did not converge in {stats.iterations} iterations "
            f"(relative residual {stats.residual:.3e})"
        )
        self.stats = stats


class NotSPDError(Exception):
    """An exception thrown when a matrix has a nonpositive diagonal entry"""

    pass


class SingularMatrixError(Exception):
    """An exception thrown when a dense factorization finds a zero pivot"""

    pass


def default_maxit(n: int) -> int:
    """Returns the default CG iteration budget 20 sqrt(n) + 1000"""
    return int(20 * np.sqrt(n)) + 1000


def cg_solve(
    M: Matrix,
    b: np.ndarray,
    tol: float = DEFAULT_TOL,
    maxit: Optional[int] = None,
    callback: Optional[Callable[[np.ndarray], None]] = None,
) -> Tuple[np.ndarray, SolveStats]:
    """Solves Mx = b by Jacobi preconditioned conjugate gradients

    Parameters
    ----------
    M : Matrix
        the system matrix
        Precondition: symmetric positive definite
    b : np.ndarray
        the right-hand side
    tol : float
        the relative residual tolerance, tol > 0
    maxit : Optional[int]
        the iteration budget, 20 sqrt(n) + 1000 by default
    callback : Optional[Callable[[np.ndarray], None]]
        called with the iterate after every iteration

    Returns
    -------
    Tuple[np.ndarray, SolveStats]
        the solution and the solve statistics

    Raises
    ------
    NotSPDError if M has a zero or negative diagonal entry
    NonConvergenceError if the tolerance is not reached within maxit
    """
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    b = np.asarray(b, dtype=float)
    n = b.size
    norm_b = np.linalg.norm(b)
    if norm_b == 0.0:
        return np.zeros(n), SolveStats(0, 0.0, True)
    diag = M.diagonal()
    if np.any(diag <= 0.0):
        raise NotSPDError(f"matrix has {int(np.sum(diag <= 0.0))} nonpositive diagonal entries")
    budget = default_maxit(n) if maxit is None else int(maxit)
    jacobi = sp.diags(1.0 / diag)
    count = [0]

    def step(xk: np.ndarray) -> None:
        count[0] += 1
        if callback is not None:
            callback(xk)

    x = np.zeros(n)
    residual = 1.0
    # restart from x until the true residual meets tol
    for _ in range(_RESTARTS):
        remaining = budget - count[0]
        if remaining <= 0:
            break
        x, info = spla.cg(M, b, x0=x, rtol=tol, atol=0.0, maxiter=remaining, M=jacobi, callback=step)
        residual = float(np.linalg.norm(M @ x - b) / norm_b)
        if residual <= tol or info < 0:
            break
    stats = SolveStats(count[0], residual, residual <= tol)
    if not stats.converged:
        logger.warning(f"CG stopped after {stats.iterations} iterations at residual {residual:.3e}")
        raise NonConvergenceError(stats)
    logger.debug(f"CG converged: n={n}, iterations={stats.iterations}, residual={residual:.3e}")
    return x, stats


def dense_solve(M: Matrix, b: np.ndarray) -> np.ndarray:
    """Solves Mx = b by LU factorization with partial pivoting

    Parameters
    ----------
    M : Matrix
        the system matrix
        Precondition: at most DENSE_LIMIT rows
    b : np.ndarray
        the right-hand side

    Returns
    -------
    np.ndarray
        the solution

    Raises
    ------
    ValueError if the matrix is larger than DENSE_LIMIT
    SingularMatrixError if a pivot vanishes
    """
    n = M.shape[0]
    if n > DENSE_LIMIT:
        raise ValueError(f"dense solve limited to {DENSE_LIMIT} unknowns, got {n}")
    dense = M.toarray() if sp.issparse(M) else np.asarray(M, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(dense)
    scale = np.max(np.abs(dense)) if dense.size else 0.0
    if scale == 0.0 or np.min(np.abs(np.diag(lu))) <= n * np.finfo(float).eps * scale:
        raise SingularMatrixError("matrix is singular to working precision")
    return la.lu_solve((lu, piv), np.asarray(b, dtype=float))


def is_symmetric(M: Matrix, rtol: float = 1e-10) -> bool:
    """Returns True if max|M - M^T| <= rtol max|M|"""
    if sp.issparse(M):
        scale = abs(M).max()
        gap = abs(M - M.T).max()
    else:
        scale = np.max(np.abs(M))
        gap = np.max(np.abs(M - M.T))
    return bool(gap <= rtol * scale)
