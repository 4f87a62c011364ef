"""
Discrete Lyapunov (Stein) equation A^T P A - P + Q = 0 for Schur-stable A.
"""
import logging
from typing import Optional

import numpy as np
import scipy.linalg

from bandnorm.core.config import settings
from bandnorm.core.errors import InputError, NotSchurError, NumericalError, ShapeError
from bandnorm.models.schemas import GramianMatrix

logger = logging.getLogger(__name__)


def spectral_radius(A) -> float:
    """Largest eigenvalue modulus of A."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def _check_inputs(A, Q):
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError(f"A must be square, got shape {A.shape}")
    if Q.shape != A.shape:
        raise ShapeError(f"Q shape {Q.shape} does not match A shape {A.shape}")
    asym = np.linalg.norm(Q - Q.T)
    if asym > settings.SYMMETRY_TOL * max(np.linalg.norm(Q), 1.0):
        raise InputError(f"Q is not symmetric (||Q - Q^T|| = {asym:.3e})", asymmetry=asym)
    lowest = float(np.linalg.eigvalsh((Q + Q.T) / 2).min()) if Q.size else 0.0
    if lowest < -settings.SYMMETRY_TOL * max(np.linalg.norm(Q), 1.0):
        raise InputError(
            f"Q is not positive semidefinite (smallest eigenvalue {lowest:.3e})", min_eigenvalue=lowest
        )
    return A, Q


def solve_dlyap(A, Q, margin: Optional[float] = None) -> GramianMatrix:
    """
    Solve A^T P A - P + Q = 0 by Schur back-substitution.

    A = U T U^H with T upper triangular turns the equation into
    T^H X T - X + U^H Q U = 0, which is solved one column of X at a time
    with a lower-triangular solve.

    Args:
        A: Real n x n matrix with spectral radius < 1 - margin
        Q: Real symmetric positive semidefinite n x n matrix
        margin: Stability margin (defaults to settings.SCHUR_MARGIN)

    Returns:
        GramianMatrix holding the symmetric solution P

    Raises:
        NotSchurError: If the spectral radius of A is too close to or above 1
    """
    A, Q = _check_inputs(A, Q)
    margin = settings.SCHUR_MARGIN if margin is None else margin
    rho = spectral_radius(A)
    if rho >= 1.0 - margin:
        raise NotSchurError(rho, margin)
    logger.info(f"solve_dlyap: n={A.shape[0]}, spectral radius {rho:.6g}")

    T, U = scipy.linalg.schur(A, output="complex")
    Qt = U.conj().T @ Q @ U
    TH = T.conj().T
    n = A.shape[0]
    X = np.zeros((n, n), dtype=complex)
    eye = np.eye(n)
    for j in range(n):
        # sum_{l<j} X[:, l] T[l, j]
        acc = X[:, :j] @ T[:j, j]
        rhs = -Qt[:, j] - TH @ acc
        X[:, j] = scipy.linalg.solve_triangular(T[j, j] * TH - eye, rhs, lower=True)

    P = (U @ X @ U.conj().T).real
    P = 0.5 * (P + P.T)
    return GramianMatrix(P=P)


def smith_dlyap(A, Q, tol: float = 1e-13, max_iter: int = 64) -> np.ndarray:
    """
    Squared Smith iteration P <- P + A_k^T P A_k, A_k <- A_k^2.

    Used as an independent reference for solve_dlyap.
    """
    A, Q = _check_inputs(A, Q)
    P = Q.copy()
    Ak = A.copy()
    for _ in range(max_iter):
        inc = Ak.T @ P @ Ak
        P = P + inc
        if np.linalg.norm(inc) <= tol * max(np.linalg.norm(P), np.finfo(float).tiny):
            return 0.5 * (P + P.T)
        Ak = Ak @ Ak
    raise NumericalError(f"Smith iteration did not converge in {max_iter} squarings")
