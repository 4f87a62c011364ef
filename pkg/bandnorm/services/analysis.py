"""
Command layer shared by the CLI and the HTTP API.

Turns a validated system document plus request options into response models,
running the optional quadrature cross-check.
"""
import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from bandnorm.core.config import settings
from bandnorm.core.errors import InputError, OracleMismatchError, SystemFileError
from bandnorm.models.schemas import (
    Band,
    ContinuousBand,
    InfoResponse,
    IntegralResponse,
    MatrixOutput,
    NormResponse,
    QuadratureConfig,
    SystemFile,
)
from bandnorm.services import descint, oracle, sysnorm
from bandnorm.services.pencil import (
    arc_clearance,
    continuous_clearance,
    generalized_eigenvalues,
    select_shift,
)

logger = logging.getLogger(__name__)


def load_system(data: Dict[str, Any]) -> SystemFile:
    """
    Validate a system document.

    Raises:
        SystemFileError: Naming the first offending field
    """
    if not isinstance(data, dict):
        raise SystemFileError("system document must be an object")
    try:
        return SystemFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        raise SystemFileError(first["msg"], field=field) from e


def make_band(values: Optional[Sequence[float]], degrees: bool = False) -> Band:
    """Band from [theta1, theta2]; the full circle when values is None."""
    if values is None:
        return Band.full()
    if len(values) != 2:
        raise InputError(f"band needs two edges, got {len(values)}")
    try:
        if degrees:
            return Band.from_degrees(values[0], values[1])
        return Band(theta1=values[0], theta2=values[1])
    except ValueError as e:
        raise InputError(str(e)) from e


def make_continuous_band(values: Sequence[float]) -> ContinuousBand:
    if values is None or len(values) != 2:
        raise InputError("continuous integrals need a band [omega1, omega2]")
    try:
        return ContinuousBand(omega1=values[0], omega2=values[1])
    except ValueError as e:
        raise InputError(str(e)) from e


def _oracle_tolerance(tol: float, reference: float) -> float:
    return tol * max(1.0, reference)


class BandNormAnalyzer:
    """Runs the norm, integral and info commands on a system document."""

    def __init__(self, quadrature: Optional[QuadratureConfig] = None):
        self.quadrature = quadrature

    def norm(
        self,
        doc: SystemFile,
        band: Optional[Band] = None,
        method: str = "auto",
        decimation: Optional[int] = None,
        check_oracle: Optional[float] = None,
    ) -> NormResponse:
        if doc.kind != "state_space":
            raise InputError("norm requires a state_space system")
        if doc.time_domain != "discrete":
            raise InputError("norms are defined for discrete-time systems only")
        sys = doc.state_space()
        band = Band.full() if band is None else band

        result = sysnorm.truncated_norm(sys, band, method=method)
        warnings: List[str] = list(result.diagnostics)
        logger.info(f"norm: value {result.value:.12g} via {result.method}")

        J = None
        if decimation is not None:
            J = sysnorm.multirate_error(sys, decimation)

        oracle_value = None
        if check_oracle is not None:
            oracle_value = oracle.oracle_truncated_norm(sys, band, self.quadrature)
            diff = abs(result.value - oracle_value)
            tol = _oracle_tolerance(check_oracle, abs(oracle_value))
            if diff > tol:
                raise OracleMismatchError(result.value, oracle_value, diff, tol)

        return NormResponse(
            value=result.value,
            method=result.method,
            band=[band.theta1, band.theta2],
            arc_clearance=result.arc_clearance,
            multirate_error=J,
            decimation=decimation,
            oracle_value=oracle_value,
            warnings=warnings,
        )

    def integral(
        self,
        doc: SystemFile,
        band_values: Sequence[float],
        continuous: bool = False,
        degrees: bool = False,
        check_oracle: Optional[float] = None,
    ) -> IntegralResponse:
        p = doc.pencil()
        continuous = continuous or doc.time_domain == "continuous"
        with_io = doc.B is not None and doc.C is not None
        warnings: List[str] = []

        if continuous:
            if degrees:
                raise InputError("--degrees applies to discrete bands only")
            band = make_continuous_band(band_values)
            if with_io:
                value = descint.integrate_transfer_continuous(doc.C, p, doc.B, band)
            else:
                value = descint.integrate_resolvent_continuous(p, band)
            clearance = continuous_clearance(p, band)
            method = "continuous"
            edges = [band.omega1, band.omega2]
            reference = (lambda: oracle.oracle_continuous_integral(p, band, self.quadrature))
        else:
            band = make_band(band_values, degrees)
            if with_io:
                value = descint.integrate_transfer_discrete(doc.C, p, doc.B, band)
            else:
                value = descint.integrate_resolvent_discrete_any(p, band)
            clearance = arc_clearance(p, band)
            method = "interior" if band.is_interior or band.is_empty else "pi_endpoint"
            edges = [band.theta1, band.theta2]
            reference = (lambda: oracle.oracle_resolvent_integral(p, band, self.quadrature))

        difference = None
        if check_oracle is not None:
            ref = reference()
            if with_io:
                ref = doc.C @ ref @ doc.B
            difference = float(np.max(np.abs(value - ref))) if value.size else 0.0
            tol = _oracle_tolerance(check_oracle, float(np.max(np.abs(ref))) if ref.size else 0.0)
            if difference > tol:
                raise OracleMismatchError(value, ref, difference, tol)

        out = MatrixOutput.from_array(value)
        return IntegralResponse(
            real=out.real,
            imag=out.imag,
            method=method,
            band=edges,
            time_domain="continuous" if continuous else "discrete",
            arc_clearance=clearance,
            oracle_difference=difference,
            warnings=warnings,
        )

    def info(
        self,
        doc: SystemFile,
        band_values: Optional[Sequence[float]] = None,
        continuous: bool = False,
        degrees: bool = False,
    ) -> InfoResponse:
        p = doc.pencil()
        continuous = continuous or doc.time_domain == "continuous"
        eigs = generalized_eigenvalues(p)
        finite = [e.value for e in eigs if not e.infinite]
        warnings: List[str] = []

        rho = max((abs(z) for z in finite), default=0.0)
        schur = None
        if not continuous:
            schur = rho < 1.0 - settings.SCHUR_MARGIN and len(finite) == len(eigs)
        if len(finite) < len(eigs):
            warnings.append(f"{len(eigs) - len(finite)} infinite eigenvalue(s)")

        shift = select_shift(p)
        shift_info = {
            "alpha": [shift.alpha.real, shift.alpha.imag],
            "beta": [shift.beta.real, shift.beta.imag],
            "condition": shift.W_condition,
        }

        band_edges, clearance, admissible = None, None, None
        if band_values is not None:
            if continuous:
                cband = make_continuous_band(band_values)
                band_edges = [cband.omega1, cband.omega2]
                clearance = continuous_clearance(p, cband)
            else:
                band = make_band(band_values, degrees)
                band_edges = [band.theta1, band.theta2]
                clearance = arc_clearance(p, band)
            admissible = clearance >= settings.ARC_CLEARANCE_THRESHOLD

        return InfoResponse(
            kind=doc.kind,
            time_domain="continuous" if continuous else "discrete",
            states=doc.n,
            eigenvalues=eigs,
            spectral_radius=rho if finite else None,
            schur=schur,
            shift=shift_info,
            band=band_edges,
            arc_clearance=clearance,
            admissible=admissible,
            warnings=warnings,
        )


analyzer = BandNormAnalyzer()
