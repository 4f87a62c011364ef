"""
FastAPI routes for band-norm and band-integral endpoints.
"""
import logging

from fastapi import APIRouter, HTTPException

from bandnorm.core.config import settings
from bandnorm.core.errors import BandNormError
from bandnorm.models.schemas import (
    HealthCheck,
    InfoRequest,
    InfoResponse,
    IntegralRequest,
    IntegralResponse,
    NormRequest,
    NormResponse,
)
from bandnorm.services.analysis import analyzer, load_system, make_band

logger = logging.getLogger(__name__)

router = APIRouter()


def _http_error(e: BandNormError) -> HTTPException:
    logger.warning(f"{type(e).__name__}: {e.message}")
    return HTTPException(status_code=e.http_status, detail=e.to_dict())


@router.get("/health", response_model=HealthCheck)
async def health_check():
    """Health check endpoint."""
    return HealthCheck(
        status="healthy",
        version=settings.APP_VERSION,
    )


@router.post("/norm", response_model=NormResponse)
def compute_norm(request: NormRequest):
    """
    Squared frequency-truncated norm of a discrete-time state-space system.

    Raises:
        HTTPException: 400 for malformed input, 422 when a precondition fails
            (pole on the band arc, not Schur), 500 for numerical failures
    """
    try:
        doc = load_system(request.system)
        band = make_band(request.band, request.degrees)
        logger.info(f"norm request: n={doc.n}, band [{band.theta1:.6g}, {band.theta2:.6g}], method {request.method}")
        return analyzer.norm(
            doc,
            band,
            method=request.method,
            decimation=request.decimation,
            check_oracle=request.check_oracle,
        )
    except BandNormError as e:
        raise _http_error(e)
    except Exception as e:
        logger.exception(f"Norm computation failed: {e}")
        raise HTTPException(
            status_code=500,
            detail=f"Norm computation failed: {str(e)}",
        )


@router.post("/integral", response_model=IntegralResponse)
def compute_integral(request: IntegralRequest):
    """Band integral of a descriptor resolvent (or C (.) B for state-space documents)."""
    try:
        doc = load_system(request.system)
        return analyzer.integral(
            doc,
            request.band,
            continuous=request.continuous,
            degrees=request.degrees,
            check_oracle=request.check_oracle,
        )
    except BandNormError as e:
        raise _http_error(e)
    except Exception as e:
        logger.exception(f"Integral computation failed: {e}")
        raise HTTPException(
            status_code=500,
            detail=f"Integral computation failed: {str(e)}",
        )


@router.post("/info", response_model=InfoResponse)
def system_info(request: InfoRequest):
    """Eigenvalues, shift selection and band clearance of a system."""
    try:
        doc = load_system(request.system)
        return analyzer.info(
            doc,
            request.band,
            continuous=request.continuous,
            degrees=request.degrees,
        )
    except BandNormError as e:
        raise _http_error(e)
