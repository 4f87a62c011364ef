"""
Adaptive quadrature of matrix-valued integrands, used as ground truth.

Resolvents are evaluated by one linear solve per node so the oracle shares no
code path with the matrix-function kernels it checks.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad_vec

from bandnorm.core.errors import InputError, QuadratureError
from bandnorm.models.schemas import (
    Band,
    ContinuousBand,
    DescriptorPair,
    QuadratureConfig,
    QuadratureResult,
    StateSpace,
)

logger = logging.getLogger(__name__)

MatrixIntegrand = Callable[[float], np.ndarray]


def quad_matrix(
    f: MatrixIntegrand,
    a: float,
    b: float,
    cfg: Optional[QuadratureConfig] = None,
) -> QuadratureResult:
    """
    Integrate a complex matrix-valued function over [a, b].

    Real and imaginary parts are stacked into one real array and handed to
    scipy's adaptive Gauss-Kronrod integrator with a max-norm error estimate.
    Intervals shorter than cfg.min_interval integrate to zero.

    Returns:
        QuadratureResult; success is False when the subdivision budget ran out

    Raises:
        InputError: If b < a
        QuadratureError: If the integrand cannot be evaluated or is not finite
    """
    cfg = QuadratureConfig() if cfg is None else cfg
    if b < a:
        raise InputError(f"quadrature interval must satisfy a <= b, got [{a}, {b}]")

    try:
        sample = np.asarray(f(a), dtype=complex)
    except np.linalg.LinAlgError as e:
        raise QuadratureError(f"integrand evaluation failed at {a}: {e}") from e
    shape = sample.shape
    if b - a < cfg.min_interval:
        return QuadratureResult(value=np.zeros(shape, dtype=complex), error=0.0, success=True)

    def stacked(x: float) -> np.ndarray:
        M = np.asarray(f(x), dtype=complex)
        return np.stack((M.real, M.imag))

    executor = ThreadPoolExecutor(max_workers=cfg.workers) if cfg.workers > 1 else None
    try:
        res, err, info = quad_vec(
            stacked,
            a,
            b,
            epsabs=cfg.abs_tol,
            epsrel=cfg.rel_tol,
            norm="max",
            limit=cfg.max_subdivisions,
            workers=executor.map if executor else 1,
            full_output=True,
        )
    except np.linalg.LinAlgError as e:
        raise QuadratureError(f"integrand evaluation failed on [{a}, {b}]: {e}") from e
    finally:
        if executor:
            executor.shutdown()

    # quad_vec status: 0 converged, 1 subdivision limit, 2 roundoff limit, 3 non-finite values
    if info.status == 3:
        raise QuadratureError(f"integrand is not finite on [{a}, {b}]")
    value = res[0] + 1j * res[1]
    success = info.status != 1
    if info.status == 2:
        logger.info(f"quad_matrix: roundoff limit reached on [{a}, {b}], error {err:.3e}")
    elif not success:
        logger.warning(f"quad_matrix: subdivision budget exhausted on [{a}, {b}], error {err:.3e}")
    return QuadratureResult(
        value=value,
        error=float(err),
        success=success,
        intervals=len(info.intervals),
    )


def _require(result: QuadratureResult, what: str) -> np.ndarray:
    if not result.success:
        raise QuadratureError(
            f"{what}: quadrature did not converge",
            estimate=result.value.tolist(),
            error=result.error,
        )
    return result.value


def transfer_at(sys: StateSpace, theta: float) -> np.ndarray:
    """G(e^{j theta}) = D + C (e^{j theta} I - A)^-1 B by a linear solve."""
    z = np.exp(1j * theta)
    return sys.D + sys.C @ np.linalg.solve(z * np.eye(sys.n) - sys.A, sys.B)


def oracle_truncated_norm(
    sys: StateSpace, band: Band, cfg: Optional[QuadratureConfig] = None
) -> float:
    """(1 / 2 pi) int tr(G(e^{j theta})^H G(e^{j theta})) d theta over the band."""
    def integrand(theta: float) -> np.ndarray:
        G = transfer_at(sys, theta)
        return np.array([[np.vdot(G, G).real]])

    result = quad_matrix(integrand, band.theta1, band.theta2, cfg)
    return float(_require(result, "oracle_truncated_norm")[0, 0].real) / (2.0 * math.pi)


def oracle_resolvent_integral(
    p: DescriptorPair, band: Band, cfg: Optional[QuadratureConfig] = None
) -> np.ndarray:
    """int (e^{j theta} E - A)^-1 d theta over the band."""
    eye = np.eye(p.n)

    def integrand(theta: float) -> np.ndarray:
        return np.linalg.solve(np.exp(1j * theta) * p.E - p.A, eye)

    return _require(quad_matrix(integrand, band.theta1, band.theta2, cfg), "oracle_resolvent_integral")


def oracle_continuous_integral(
    p: DescriptorPair, band: ContinuousBand, cfg: Optional[QuadratureConfig] = None
) -> np.ndarray:
    """int (j omega E - A)^-1 d omega over [omega1, omega2]."""
    eye = np.eye(p.n)

    def integrand(omega: float) -> np.ndarray:
        return np.linalg.solve(1j * omega * p.E - p.A, eye)

    return _require(quad_matrix(integrand, band.omega1, band.omega2, cfg), "oracle_continuous_integral")
