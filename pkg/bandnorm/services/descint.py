"""
Closed-form frequency-band integrals of descriptor resolvents.

Discrete time:    int_{theta1}^{theta2} (e^{j theta} E - A)^-1 d theta
Continuous time:  int_{omega1}^{omega2} (j omega E - A)^-1 d omega

Both are evaluated through limit-free expressions built from a principal
matrix logarithm, the matrix exponential and psi1. With W = alpha E + beta A
and Q = A W^-1 every intermediate is a function of Q, so all factors commute
and W^-1 can be applied last.
"""
import cmath
import logging
import math
from typing import Literal, Optional

import numpy as np

from bandnorm.core.config import settings
from bandnorm.core.errors import InputError, PoleOnArcError, ShapeError
from bandnorm.models.schemas import (
    Band,
    ContinuousBand,
    DescriptorPair,
    IntegralWorkspace,
    ShiftSelection,
)
from bandnorm.services import matfun
from bandnorm.services.pencil import (
    require_arc_clearance,
    require_continuous_clearance,
    select_shift,
    wrap,
)

logger = logging.getLogger(__name__)

Form = Literal["left", "right"]


def _right_divide(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """X Y^-1 by a linear solve."""
    return np.linalg.solve(Y.T, X.T).T


def _gamma(p: DescriptorPair, t: float) -> np.ndarray:
    """Gamma(theta, 0) = (E + A) t - j (E - A) with t = tan(theta / 2)."""
    return (p.E + p.A) * t - 1j * (p.E - p.A)


def _check_transfer_shapes(C, p: DescriptorPair, B):
    C = np.asarray(C, dtype=float)
    B = np.asarray(B, dtype=float)
    if C.ndim != 2 or C.shape[1] != p.n:
        raise ShapeError(f"C must have {p.n} columns, got shape {C.shape}")
    if B.ndim != 2 or B.shape[0] != p.n:
        raise ShapeError(f"B must have {p.n} rows, got shape {B.shape}")
    return C, B


# --- discrete time ---

def build_workspace(p: DescriptorPair, band: Band, form: Form = "left") -> IntegralWorkspace:
    """
    Intermediates of the discrete closed form for an interior band.

    The "left" form builds Y from Gamma(theta2) Gamma(theta1)^-1 (a function of
    A W^-1); the "right" form uses Gamma(theta1)^-1 Gamma(theta2) (a function of
    W^-1 A).
    """
    t1 = math.tan(0.5 * band.theta1)
    t2 = math.tan(0.5 * band.theta2)
    eta = cmath.log((t2 - 1j) / (t1 - 1j))
    G1 = _gamma(p, t1)
    G2 = _gamma(p, t2)
    if form == "left":
        ratio = _right_divide(G2, G1)
    else:
        ratio = np.linalg.solve(G1, G2)
    n = p.n
    Y = -eta * np.eye(n) + matfun.logm_principal(ratio)
    L = np.linalg.solve(matfun.psi1(Y), np.eye(n))
    return IntegralWorkspace(t1=t1, t2=t2, eta=eta, Gamma1=G1, Gamma2=G2, Y=Y, L=L)


def integrate_resolvent_discrete(
    p: DescriptorPair,
    band: Band,
    form: Form = "left",
    shift: Optional[ShiftSelection] = None,
) -> np.ndarray:
    """
    Integrate (e^{j theta} E - A)^-1 over an interior band.

    Computes (1/j) W^-1 (-alpha L (e^{-j theta2} I - e^{-j theta1} e^Y) + beta Y)
    with Y = -eta I + log(Gamma(theta2) Gamma(theta1)^-1) and L = psi1(Y)^-1.
    When alpha = 0 (A invertible, E singular) this collapses to (1/j) A^-1 Y.

    Args:
        p: Regular real pencil
        band: Band with both edges strictly inside (-pi, pi)
        form: Place W^-1 on the "left" or on the "right"
        shift: Precomputed shift selection (selected when omitted)

    Raises:
        InputError: If a band edge is +-pi (use integrate_resolvent_discrete_any)
        PoleOnArcError: If an eigenvalue lies on the band arc
        SingularPencilError: If the pencil is singular
        BranchCutError: If the logarithm argument meets the negative real axis
    """
    n = p.n
    if band.is_empty:
        return np.zeros((n, n), dtype=complex)
    if not band.is_interior:
        raise InputError(
            "band edges at +-pi need the endpoint form; "
            "use integrate_resolvent_discrete_any"
        )
    require_arc_clearance(p, band)
    shift = select_shift(p) if shift is None else shift
    ws = build_workspace(p, band, form)

    if shift.alpha == 0:
        logger.info("integrate_resolvent_discrete: alpha = 0 branch, A invertible")
        inner = shift.beta * ws.Y
    else:
        if form == "left":
            ratio = _right_divide(ws.Gamma2, ws.Gamma1)
        else:
            ratio = np.linalg.solve(ws.Gamma1, ws.Gamma2)
        # e^Y = e^{-eta} * ratio
        expY = cmath.exp(-ws.eta) * ratio
        M = cmath.exp(-1j * band.theta2) * np.eye(n) - cmath.exp(-1j * band.theta1) * expY
        inner = -shift.alpha * (ws.L @ M) + shift.beta * ws.Y

    if form == "left":
        return np.linalg.solve(shift.W, inner) / 1j
    return _right_divide(inner, shift.W) / 1j


def integrate_resolvent_discrete_to_pi(
    p: DescriptorPair,
    theta1: float,
    shift: Optional[ShiftSelection] = None,
) -> np.ndarray:
    """
    Integrate (e^{j theta} E - A)^-1 over [theta1, pi].

    Computes (1/j) W^-1 L_f (e^Y (alpha - beta) + (e^{-j theta1} alpha + beta) I)
    with Y = -eta_f I + log(t1 I - j (E - A)(E + A)^-1), eta_f = log(t1 - j) and
    L_f = psi1(Y)^-1.

    Raises:
        InputError: If theta1 is outside (-pi, pi]
        PoleOnArcError: If an eigenvalue lies on the arc, including -1
    """
    n = p.n
    if not (-math.pi < theta1 <= math.pi):
        raise InputError(f"theta1 must lie in (-pi, pi], got {theta1}")
    if theta1 == math.pi:
        return np.zeros((n, n), dtype=complex)
    require_arc_clearance(p, Band(theta1=theta1, theta2=math.pi))
    Phi_plus = p.E + p.A
    cond = float(np.linalg.cond(Phi_plus))
    if not np.isfinite(cond) or cond > settings.SHIFT_CONDITION_BOUND:
        raise PoleOnArcError(0.0, settings.ARC_CLEARANCE_THRESHOLD, complex(-1.0, 0.0))
    shift = select_shift(p) if shift is None else shift

    t1 = math.tan(0.5 * theta1)
    eta_f = cmath.log(t1 - 1j)
    S = t1 * np.eye(n) - 1j * _right_divide(p.E - p.A, Phi_plus)
    Y = -eta_f * np.eye(n) + matfun.logm_principal(S)

    if shift.alpha == 0:
        # psi1(Y)^-1 (I - e^Y) = -Y
        logger.info("integrate_resolvent_discrete_to_pi: alpha = 0 branch, A invertible")
        return np.linalg.solve(p.A, -Y) / 1j

    expY = cmath.exp(-eta_f) * S
    rhs = expY * (shift.alpha - shift.beta) + (cmath.exp(-1j * theta1) * shift.alpha + shift.beta) * np.eye(n)
    inner = np.linalg.solve(matfun.psi1(Y), rhs)
    return np.linalg.solve(shift.W, inner) / 1j


def integrate_resolvent_discrete_any(p: DescriptorPair, band: Band) -> np.ndarray:
    """
    Integrate (e^{j theta} E - A)^-1 over any band within [-pi, pi].

    Interior bands go straight to the closed form, bands ending at pi to the
    endpoint form; bands starting at -pi use conj(int_{-b}^{pi}) for real
    pencils, and the full circle is split at 0.
    """
    if band.is_empty:
        return np.zeros((p.n, p.n), dtype=complex)
    if band.is_interior:
        return integrate_resolvent_discrete(p, band)
    starts_at_minus_pi = band.theta1 == -math.pi
    ends_at_pi = band.theta2 == math.pi
    if ends_at_pi and not starts_at_minus_pi:
        return integrate_resolvent_discrete_to_pi(p, band.theta1)
    if starts_at_minus_pi and not ends_at_pi:
        return np.conj(integrate_resolvent_discrete_to_pi(p, -band.theta2))
    logger.info("integrate_resolvent_discrete_any: full circle split at 0")
    upper = integrate_resolvent_discrete_to_pi(p, 0.0)
    return upper + np.conj(upper)


def integrate_transfer_discrete(C, p: DescriptorPair, B, band: Band) -> np.ndarray:
    """C (int (e^{j theta} E - A)^-1 d theta) B over the band."""
    C, B = _check_transfer_shapes(C, p, B)
    return C @ integrate_resolvent_discrete_any(p, band) @ B


# --- continuous time ---

def integrate_resolvent_continuous(
    p: DescriptorPair,
    band: ContinuousBand,
    shift: Optional[ShiftSelection] = None,
) -> np.ndarray:
    """
    Integrate (j omega E - A)^-1 over [omega1, omega2].

    Computes -W^-1 (beta L (omega2 I - e^Y omega1) + j alpha Y) with
    Y = log(Omega(omega2) Omega(omega1)^-1), Omega(omega) = omega E + j A and
    L = psi1(Y)^-1.

    Raises:
        PoleOnArcError: If an eigenvalue j lambda has lambda in [omega1, omega2]
        SingularPencilError: If the pencil is singular
    """
    n = p.n
    if band.omega1 == band.omega2:
        return np.zeros((n, n), dtype=complex)
    require_continuous_clearance(p, band)
    shift = select_shift(p) if shift is None else shift

    Omega1 = band.omega1 * p.E + 1j * p.A
    Omega2 = band.omega2 * p.E + 1j * p.A
    R = _right_divide(Omega2, Omega1)
    Y = matfun.logm_principal(R)

    inner = 1j * shift.alpha * Y
    if shift.beta != 0:
        # e^Y = R
        rhs = band.omega2 * np.eye(n) - band.omega1 * R
        inner = inner + shift.beta * np.linalg.solve(matfun.psi1(Y), rhs)
    return -np.linalg.solve(shift.W, inner)


def integrate_transfer_continuous(C, p: DescriptorPair, B, band: ContinuousBand) -> np.ndarray:
    """C (int (j omega E - A)^-1 d omega) B over the band."""
    C, B = _check_transfer_shapes(C, p, B)
    return C @ integrate_resolvent_continuous(p, band) @ B


# --- scalar reference functions ---

def _on_arc(a: complex, theta1: float, theta: float, tol: float) -> bool:
    if abs(abs(a) - 1.0) > tol:
        return False
    phi = wrap(cmath.phase(a))
    return theta1 - tol <= phi <= theta + tol


def scalar_fd(z: complex, theta: float, theta1: float, alpha: complex, beta: complex) -> complex:
    """
    Scalar kernel whose matrix value at Q = A W^-1 gives W times the integral.

        f_d(z) = (1 / (j z)) (-eta + log(Omega(z, t) / Omega(z, t1)))   for z != 0
        f_d(0) = (alpha / j) (e^{-j theta1} - e^{-j theta})

    with Omega(z, t) = t (1 - beta z + alpha z) - j (1 - beta z - alpha z).

    Raises:
        PoleOnArcError: If alpha z / (1 - beta z) = e^{j phi} with phi in [theta1, theta]
    """
    z = complex(z)
    if z == 0:
        return (alpha / 1j) * (cmath.exp(-1j * theta1) - cmath.exp(-1j * theta))
    tol = settings.ARC_CLEARANCE_THRESHOLD
    if 1 - beta * z != 0 and _on_arc(alpha * z / (1 - beta * z), theta1, theta, tol):
        raise PoleOnArcError(0.0, tol, alpha * z / (1 - beta * z))
    t = math.tan(0.5 * theta)
    t1 = math.tan(0.5 * theta1)
    eta = cmath.log((t - 1j) / (t1 - 1j))

    def omega(tt: float) -> complex:
        return tt * (1 - beta * z + alpha * z) - 1j * (1 - beta * z - alpha * z)

    return (-eta + cmath.log(omega(t) / omega(t1))) / (1j * z)


def scalar_fi(z: complex, theta: float, theta1: float) -> complex:
    """
    Scalar kernel of the A-invertible case: A^-1 f_i(E A^-1) is the integral.

        f_i(z) = (1/j) (-eta + log((t (z + 1) - j (z - 1)) / (t1 (z + 1) - j (z - 1))))

    Raises:
        PoleOnArcError: If z = e^{-j phi} with phi in [theta1, theta]
    """
    z = complex(z)
    tol = settings.ARC_CLEARANCE_THRESHOLD
    if z != 0 and _on_arc(1 / z, theta1, theta, tol):
        raise PoleOnArcError(0.0, tol, 1 / z)
    if theta == theta1:
        return 0j
    t = math.tan(0.5 * theta)
    t1 = math.tan(0.5 * theta1)
    eta = cmath.log((t - 1j) / (t1 - 1j))
    num = t * (z + 1) - 1j * (z - 1)
    den = t1 * (z + 1) - 1j * (z - 1)
    return (-eta + cmath.log(num / den)) / 1j


def scalar_stable_antiderivative(z: complex, theta: float) -> complex:
    """
    Anti-derivative of (e^{j theta} - z)^-1 valid for |z| < 1.

        -j z^-1 log(1 - e^{-j theta} z)   for z != 0,   j e^{-j theta} at z = 0
    """
    z = complex(z)
    if z == 0:
        return 1j * cmath.exp(-1j * theta)
    return -1j * cmath.log(1 - cmath.exp(-1j * theta) * z) / z
