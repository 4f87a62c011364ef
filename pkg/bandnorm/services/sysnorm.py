"""
Frequency-truncated squared L2 norms of discrete-time systems.

    ||G||^2_[theta1, theta2] = (1 / 2 pi) tr int_{theta1}^{theta2} G~(e^{j theta}) G(e^{j theta}) d theta

Stable systems use a Lyapunov solution and one n x n logarithm per band edge;
systems with poles outside the unit circle go through a 2n x 2n descriptor
realization of G~(z) G(z) / z.
"""
import cmath
import logging
import math
from typing import List, Literal, Optional, Tuple

import numpy as np

from bandnorm.core.config import settings
from bandnorm.core.errors import InputError, NumericalError
from bandnorm.models.schemas import (
    AugmentedSystem,
    Band,
    DescriptorPair,
    NormResult,
    StateSpace,
)
from bandnorm.services import matfun
from bandnorm.services.descint import integrate_resolvent_discrete_any
from bandnorm.services.lyap import solve_dlyap, spectral_radius
from bandnorm.services.pencil import arc_clearance, require_arc_clearance

logger = logging.getLogger(__name__)

MethodChoice = Literal["auto", "stable", "general"]


def _require_strictly_proper(sys: StateSpace):
    if not sys.is_strictly_proper:
        raise InputError("this closed form needs D = 0; use truncated_norm for systems with feedthrough")


def _clamp(value: float, diagnostics: List[str]) -> float:
    if value >= 0.0:
        return value
    if value >= -settings.NEGATIVE_CLAMP:
        diagnostics.append(f"negative round-off {value:.3e} clamped to 0")
        return 0.0
    raise NumericalError(f"squared norm evaluated to {value:.6e} < 0", value=value)


def _gramian_trace(sys: StateSpace) -> Tuple[np.ndarray, float]:
    P = solve_dlyap(sys.A, sys.C.T @ sys.C).P
    return P, float(np.trace(sys.B.T @ P @ sys.B))


def full_band_norm(sys: StateSpace) -> NormResult:
    """tr(B^T P B) with A^T P A - P + C^T C = 0."""
    _require_strictly_proper(sys)
    _, value = _gramian_trace(sys)
    band = Band.full()
    clearance = arc_clearance(DescriptorPair.standard(sys.A), band)
    diagnostics: List[str] = []
    return NormResult(
        value=_clamp(value, diagnostics),
        band=band,
        method="full_band",
        arc_clearance=clearance,
        diagnostics=diagnostics,
    )


def truncated_norm_stable(sys: StateSpace, band: Band) -> NormResult:
    """
    Band norm of a stable strictly proper system.

    value = (F(theta2) - F(theta1)) / (2 pi) with
    F(theta) = tr(B^T P B) theta + 2 Im tr(B^T P log(I - e^{-j theta} A) B).

    Raises:
        NotSchurError: If A is not Schur stable
    """
    _require_strictly_proper(sys)
    P, gram = _gramian_trace(sys)
    clearance = arc_clearance(DescriptorPair.standard(sys.A), band)
    diagnostics: List[str] = []
    if band.is_empty:
        return NormResult(value=0.0, band=band, method="stable", arc_clearance=clearance)

    n = sys.n
    BtP = sys.B.T @ P

    def F(theta: float) -> float:
        # I - e^{-j theta} A has spectrum in the open right half plane for Schur A
        L = matfun.logm_principal(np.eye(n) - cmath.exp(-1j * theta) * sys.A)
        return gram * theta + 2.0 * float(np.trace(BtP @ L @ sys.B).imag)

    value = (F(band.theta2) - F(band.theta1)) / (2.0 * math.pi)
    return NormResult(
        value=_clamp(value, diagnostics),
        band=band,
        method="stable",
        arc_clearance=clearance,
        diagnostics=diagnostics,
    )


def build_augmented(sys: StateSpace) -> AugmentedSystem:
    """
    Descriptor realization C_h (z E_h - A_h)^-1 B_h of G~(z) G(z) / z.

    A_h = [[A, 0], [C^T C, I]], E_h = [[I, 0], [0, A^T]], B_h = [B; 0], C_h = [0, -B^T].
    """
    _require_strictly_proper(sys)
    n, m = sys.B.shape
    Z = np.zeros((n, n))
    A_h = np.block([[sys.A, Z], [sys.C.T @ sys.C, np.eye(n)]])
    E_h = np.block([[np.eye(n), Z], [Z, sys.A.T]])
    B_h = np.vstack([sys.B, np.zeros((n, m))])
    C_h = np.hstack([np.zeros((m, n)), -sys.B.T])
    return AugmentedSystem(A_h=A_h, E_h=E_h, B_h=B_h, C_h=C_h)


def _gamma_d(aug: AugmentedSystem, theta: float) -> np.ndarray:
    t = math.tan(0.5 * theta)
    return (aug.E_h + aug.A_h) * t - 1j * (aug.E_h - aug.A_h)


def truncated_norm_general(sys: StateSpace, band: Band) -> NormResult:
    """
    Band norm of a strictly proper system with no pole on the band arc or its mirror.

    Interior bands use (1 / 2 pi) tr((1/j) C_h log(Gamma_d(theta1)^-1 Gamma_d(theta2)) B_h)
    with Gamma_d(theta) = (E_h + A_h) tan(theta / 2) - j (E_h - A_h). Bands
    touching +-pi integrate the reversed augmented pencil over the mirrored
    band with the pi-endpoint closed form.

    Raises:
        PoleOnArcError: If A has an eigenvalue on [theta1, theta2] or [-theta2, -theta1]
    """
    _require_strictly_proper(sys)
    p = DescriptorPair.standard(sys.A)
    clearance = min(require_arc_clearance(p, band), require_arc_clearance(p, band.mirrored()))
    diagnostics: List[str] = []
    if band.is_empty:
        return NormResult(value=0.0, band=band, method="general", arc_clearance=clearance)

    aug = build_augmented(sys)
    if band.is_interior:
        ratio = np.linalg.solve(_gamma_d(aug, band.theta1), _gamma_d(aug, band.theta2))
        L = matfun.logm_principal(ratio)
        trace = complex(np.trace(aug.C_h @ L @ aug.B_h)) / 1j
    else:
        note = "band touches +-pi: evaluated with the pi-endpoint closed form on the reversed augmented pencil"
        logger.info(f"truncated_norm_general: {note}")
        diagnostics.append(note)
        reversed_pencil = DescriptorPair(E=aug.A_h, A=aug.E_h)
        K = integrate_resolvent_discrete_any(reversed_pencil, band.mirrored())
        trace = -complex(np.trace(aug.C_h @ K @ aug.B_h))

    value = trace.real / (2.0 * math.pi)
    residue = abs(trace.imag) / (2.0 * math.pi)
    if residue > settings.IMAG_RESIDUE_WARN * max(1.0, abs(value)):
        msg = f"imaginary residue {residue:.3e} in the general-path trace"
        logger.warning(f"truncated_norm_general: {msg}")
        diagnostics.append(msg)

    return NormResult(
        value=_clamp(value, diagnostics),
        band=band,
        method="general",
        arc_clearance=clearance,
        diagnostics=diagnostics,
    )


def _core_method(sys: StateSpace, method: MethodChoice) -> str:
    if method != "auto":
        return method
    rho = spectral_radius(sys.A)
    chosen = "stable" if rho < 1.0 - settings.AUTO_STABLE_MARGIN else "general"
    logger.info(f"truncated_norm: spectral radius {rho:.6g}, using the {chosen} path")
    return chosen


def _strictly_proper_norm(sys: StateSpace, band: Band, method: str) -> NormResult:
    if method == "stable":
        return truncated_norm_stable(sys, band)
    if method == "general":
        return truncated_norm_general(sys, band)
    raise InputError(f"unknown method {method!r}")


def truncated_norm_with_feedthrough(
    sys: StateSpace, band: Band, method: MethodChoice = "auto"
) -> NormResult:
    """
    Band norm of D + C (zI - A)^-1 B.

    Adds (1 / 2 pi) [(theta2 - theta1) tr(D^T D) + 2 Re tr(D^T C K B)], with K the
    band integral of (e^{j theta} I - A)^-1, to the norm of the strictly proper part.
    """
    core = _core_method(sys, method)
    strict = sys.strictly_proper_part()
    base = _strictly_proper_norm(strict, band, core)
    if sys.is_strictly_proper:
        return base

    K = integrate_resolvent_discrete_any(DescriptorPair.standard(sys.A), band)
    cross = float(np.trace(sys.D.T @ sys.C @ K @ sys.B).real)
    direct = band.width * float(np.trace(sys.D.T @ sys.D))
    diagnostics = list(base.diagnostics)
    value = base.value + (direct + 2.0 * cross) / (2.0 * math.pi)
    return NormResult(
        value=_clamp(value, diagnostics),
        band=band,
        method=base.method,
        arc_clearance=base.arc_clearance,
        diagnostics=diagnostics,
    )


def truncated_norm(sys: StateSpace, band: Optional[Band] = None, method: MethodChoice = "auto") -> NormResult:
    """
    Squared band norm with method dispatch.

    "auto" takes the stable path when the spectral radius is below
    1 - settings.AUTO_STABLE_MARGIN and the general path otherwise.
    """
    band = Band.full() if band is None else band
    if not sys.is_strictly_proper:
        return truncated_norm_with_feedthrough(sys, band, method)
    return _strictly_proper_norm(sys, band, _core_method(sys, method))


def multirate_error(sys: StateSpace, M: int) -> float:
    """
    Mean-square error J of the optimal M-fold decimation/interpolation scheme.

    J = ||G||^2 over the full circle minus ||G||^2 over [-pi/M, pi/M].

    Raises:
        InputError: If M < 1
        NotSchurError: If A is not Schur stable
    """
    if int(M) != M or M < 1:
        raise InputError(f"decimation factor must be a positive integer, got {M}")
    _, gram = _gramian_trace(sys)
    if M == 1:
        return 0.0
    full = gram + float(np.trace(sys.D.T @ sys.D))
    band = Band(theta1=-math.pi / M, theta2=math.pi / M)
    part = truncated_norm(sys, band, method="stable")
    J = full - part.value
    logger.info(f"multirate_error: M={M}, full {full:.12g}, band {part.value:.12g}, J {J:.6g}")
    return J
