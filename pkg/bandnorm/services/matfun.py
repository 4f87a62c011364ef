"""
Dense matrix-function kernels: exponential, principal logarithm and psi1.

The kernels delegate to scipy.linalg (Pade scaling-and-squaring for the
exponential, inverse scaling-and-squaring on the Schur form for the logarithm)
and add the branch checks the closed-form integrals depend on.
"""
import logging
from typing import Callable, List, Optional

import numpy as np
import scipy.linalg

from bandnorm.core.config import settings
from bandnorm.core.errors import BranchCutError, ConditioningError, ShapeError

logger = logging.getLogger(__name__)


def _square(M, name: str = "M") -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"{name} must be a square matrix, got shape {M.shape}")
    return M


def axis_distance(z: complex) -> float:
    """Distance from z to the closed negative real axis (-inf, 0]."""
    if z.real <= 0.0:
        return abs(z.imag)
    return abs(z)


def expm(M) -> np.ndarray:
    """Matrix exponential e^M."""
    return np.asarray(scipy.linalg.expm(_square(M)), dtype=complex)


def logm_principal(M, tol: Optional[float] = None) -> np.ndarray:
    """
    Principal matrix logarithm.

    Args:
        M: Square matrix with no eigenvalue on the closed negative real axis
        tol: Distance to the axis below which an eigenvalue is rejected
            (defaults to settings.LOGM_AXIS_TOL)

    Returns:
        The unique logarithm whose eigenvalues have imaginary parts in (-pi, pi)

    Raises:
        BranchCutError: If an eigenvalue is zero or within tol of the axis
    """
    M = _square(M)
    tol = settings.LOGM_AXIS_TOL if tol is None else tol
    eigs = np.linalg.eigvals(M)
    distances = np.array([axis_distance(complex(z)) for z in eigs])
    worst = int(np.argmin(distances))
    if distances[worst] <= tol:
        logger.info(f"logm rejected: eigenvalue {eigs[worst]} at distance {distances[worst]:.3e}")
        raise BranchCutError(complex(eigs[worst]), float(distances[worst]), tol)
    return np.asarray(scipy.linalg.logm(M), dtype=complex)


def psi1(M) -> np.ndarray:
    """
    psi1(M) = sum_j M^j / (j+1)!, equal to (e^M - I) M^-1 for invertible M.

    Read off the top-right block of exp([[M, I], [0, 0]]).
    """
    M = _square(M)
    n = M.shape[0]
    aug = np.zeros((2 * n, 2 * n), dtype=complex)
    aug[:n, :n] = M
    aug[:n, n:] = np.eye(n)
    return expm(aug)[:n, n:]


def eigenvalues(M) -> List[complex]:
    """Eigenvalues of M with multiplicity."""
    return [complex(z) for z in np.linalg.eigvals(_square(M))]


def spectral_apply(
    f: Callable[[complex], complex],
    M,
    condition_bound: Optional[float] = None,
) -> np.ndarray:
    """
    Evaluate f(M) = V diag(f(lambda_i)) V^-1 for diagonalizable M.

    Only meant as an independent reference for the kernels above.

    Raises:
        ConditioningError: If cond(V) exceeds the bound
    """
    M = _square(M)
    bound = settings.SPECTRAL_CONDITION_BOUND if condition_bound is None else condition_bound
    w, V = np.linalg.eig(M)
    cond = float(np.linalg.cond(V))
    if not np.isfinite(cond) or cond > bound:
        raise ConditioningError(cond, bound)
    fw = np.array([f(complex(z)) for z in w], dtype=complex)
    # (V diag(fw)) V^-1 as a transposed solve
    return np.linalg.solve(V.T, (V * fw).T).T
