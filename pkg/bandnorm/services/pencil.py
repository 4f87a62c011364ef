"""
Matrix-pencil analysis: regularity, shift selection, generalized eigenvalues
and the clearance checks that gate every closed-form integral.
"""
import cmath
import logging
import math
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from bandnorm.core.config import settings
from bandnorm.core.errors import PoleOnArcError, SingularPencilError
from bandnorm.models.schemas import (
    Band,
    ContinuousBand,
    DescriptorPair,
    PencilEigenvalue,
    ShiftSelection,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def wrap(phi: float) -> float:
    """Principal argument of e^{j phi}, in (-pi, pi]."""
    r = math.remainder(phi, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def _condition(M: np.ndarray) -> float:
    cond = float(np.linalg.cond(M))
    return cond if np.isfinite(cond) else math.inf


def select_shift(
    p: DescriptorPair,
    condition_bound: Optional[float] = None,
    grid_size: Optional[int] = None,
) -> ShiftSelection:
    """
    Choose (alpha, beta) with W = alpha E + beta A invertible.

    Preference order: (1, 0) when E is invertible, (0, 1) when A is invertible,
    otherwise alpha = 1 with beta on a grid of unit-modulus values, keeping the
    best-conditioned W.

    Raises:
        SingularPencilError: If every candidate W is numerically singular
    """
    bound = settings.SHIFT_CONDITION_BOUND if condition_bound is None else condition_bound
    grid_size = settings.SHIFT_GRID_SIZE if grid_size is None else grid_size

    for alpha, beta in ((1.0 + 0j, 0j), (0j, 1.0 + 0j)):
        W = alpha * p.E + beta * p.A
        cond = _condition(W)
        if cond <= bound:
            logger.info(f"select_shift: (alpha, beta) = ({alpha}, {beta}), cond(W) = {cond:.3e}")
            return ShiftSelection(alpha=alpha, beta=beta, W=W, W_condition=cond)

    best: Optional[Tuple[float, complex, np.ndarray]] = None
    for k in range(grid_size):
        beta = cmath.exp(1j * TWO_PI * k / grid_size)
        W = (1.0 + 0j) * p.E + beta * p.A
        cond = _condition(W)
        if best is None or cond < best[0]:
            best = (cond, beta, W)

    if best is None or best[0] > bound:
        raise SingularPencilError(
            "singular pencil: alpha E + beta A is numerically singular for every candidate",
            best_condition=None if best is None else best[0],
        )
    cond, beta, W = best
    logger.info(f"select_shift: (alpha, beta) = (1, {beta:.6g}), cond(W) = {cond:.3e}")
    return ShiftSelection(alpha=1.0 + 0j, beta=beta, W=W, W_condition=cond)


def generalized_eigenvalues(p: DescriptorPair) -> List[PencilEigenvalue]:
    """
    Generalized eigenvalues lambda with det(A - lambda E) = 0.

    Infinite eigenvalues are flagged rather than returned as huge numbers.

    Raises:
        SingularPencilError: If the pencil is singular
    """
    select_shift(p)
    if np.array_equal(p.E, np.eye(p.n)):
        return [PencilEigenvalue(real=z.real, imag=z.imag) for z in np.linalg.eigvals(p.A)]

    ab = scipy.linalg.eig(p.A, p.E, right=False, homogeneous_eigvals=True)
    scale = max(np.linalg.norm(p.A), np.linalg.norm(p.E))
    tol = settings.INFINITE_EIGENVALUE_TOL * scale
    result = []
    for a, b in zip(ab[0], ab[1]):
        if abs(b) <= tol:
            result.append(PencilEigenvalue(infinite=True))
        else:
            z = complex(a / b)
            result.append(PencilEigenvalue(real=z.real, imag=z.imag))
    return result


def finite_eigenvalues(p: DescriptorPair) -> List[complex]:
    return [e.value for e in generalized_eigenvalues(p) if not e.infinite]


def _distance_to_arc(z: complex, band: Band) -> float:
    phi = wrap(cmath.phase(z)) if z != 0 else 0.0
    on_arc = band.theta1 <= phi <= band.theta2 or (phi == math.pi and band.theta1 == -math.pi)
    if on_arc:
        return abs(abs(z) - 1.0)
    return min(abs(z - cmath.exp(1j * band.theta1)), abs(z - cmath.exp(1j * band.theta2)))


def nearest_to_arc(
    p: DescriptorPair, band: Band, proximity: Optional[float] = None
) -> Tuple[float, Optional[complex]]:
    """Arc clearance together with the eigenvalue attaining it (None when none is close)."""
    proximity = settings.ARC_PROXIMITY if proximity is None else proximity
    best = (settings.CLEARANCE_SENTINEL, None)
    for z in finite_eigenvalues(p):
        if abs(abs(z) - 1.0) > proximity:
            continue
        d = _distance_to_arc(z, band)
        if d < best[0]:
            best = (d, z)
    return best


def arc_clearance(p: DescriptorPair, band: Band, proximity: Optional[float] = None) -> float:
    """
    Minimum distance from eigenvalues near the unit circle to the band arc.

    Eigenvalues farther than `proximity` from the unit circle are ignored; when
    none remain the sentinel settings.CLEARANCE_SENTINEL is returned.
    """
    return nearest_to_arc(p, band, proximity)[0]


def require_arc_clearance(
    p: DescriptorPair, band: Band, threshold: Optional[float] = None
) -> float:
    """Return the arc clearance or raise PoleOnArcError when it is below threshold."""
    threshold = settings.ARC_CLEARANCE_THRESHOLD if threshold is None else threshold
    clearance, z = nearest_to_arc(p, band)
    if clearance < threshold:
        raise PoleOnArcError(clearance, threshold, z)
    return clearance


def nearest_to_segment(p: DescriptorPair, band: ContinuousBand) -> Tuple[float, Optional[complex]]:
    """Distance from the finite eigenvalues to {j w : w in [w1, w2]} and the closest one."""
    best = (settings.CLEARANCE_SENTINEL, None)
    for z in finite_eigenvalues(p):
        w = min(max(z.imag, band.omega1), band.omega2)
        d = abs(z - 1j * w)
        if d < best[0]:
            best = (d, z)
    return best


def continuous_clearance(p: DescriptorPair, band: ContinuousBand) -> float:
    """Clearance of the imaginary-axis segment, the continuous analogue of arc_clearance."""
    return nearest_to_segment(p, band)[0]


def require_continuous_clearance(
    p: DescriptorPair, band: ContinuousBand, threshold: Optional[float] = None
) -> float:
    threshold = settings.ARC_CLEARANCE_THRESHOLD if threshold is None else threshold
    clearance, z = nearest_to_segment(p, band)
    if clearance < threshold:
        raise PoleOnArcError(clearance, threshold, z, where="segment")
    return clearance
