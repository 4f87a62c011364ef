"""
Configuration settings for the band-norm toolkit.
"""
import os
from typing import List
from dotenv import load_dotenv

load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(f"BANDNORM_{name}", default))


def _env_int(name: str, default: int) -> int:
    return int(os.getenv(f"BANDNORM_{name}", default))


class Settings:
    """Application settings."""

    # Application
    APP_NAME: str = "Band Norm"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = os.getenv("BANDNORM_DEBUG", "False").lower() == "true"
    LOG_LEVEL: str = os.getenv("BANDNORM_LOG_LEVEL", "WARNING").upper()

    # CORS (HTTP API only)
    ALLOWED_ORIGINS: List[str] = os.getenv(
        "BANDNORM_ALLOWED_ORIGINS",
        "http://localhost:8000,http://127.0.0.1:8000"
    ).split(",")

    # Matrix functions
    # Eigenvalues closer than this to the closed negative real axis are rejected by logm
    LOGM_AXIS_TOL: float = _env_float("LOGM_AXIS_TOL", 1e-12)
    # Largest eigenvector-matrix condition number accepted by spectral_apply
    SPECTRAL_CONDITION_BOUND: float = _env_float("SPECTRAL_CONDITION_BOUND", 1e3)

    # Discrete Lyapunov equation
    SCHUR_MARGIN: float = _env_float("SCHUR_MARGIN", 1e-10)  # reject rho(A) >= 1 - margin
    SYMMETRY_TOL: float = _env_float("SYMMETRY_TOL", 1e-12)

    # Matrix pencils
    SHIFT_CONDITION_BOUND: float = _env_float("SHIFT_CONDITION_BOUND", 1e12)
    SHIFT_GRID_SIZE: int = _env_int("SHIFT_GRID_SIZE", 16)
    INFINITE_EIGENVALUE_TOL: float = _env_float("INFINITE_EIGENVALUE_TOL", 1e-12)
    ARC_CLEARANCE_THRESHOLD: float = _env_float("ARC_CLEARANCE_THRESHOLD", 1e-9)
    # Only eigenvalues within this distance of the unit circle are measured
    ARC_PROXIMITY: float = _env_float("ARC_PROXIMITY", 0.5)
    CLEARANCE_SENTINEL: float = 1e300

    # System norms
    AUTO_STABLE_MARGIN: float = _env_float("AUTO_STABLE_MARGIN", 1e-8)
    IMAG_RESIDUE_WARN: float = _env_float("IMAG_RESIDUE_WARN", 1e-8)
    NEGATIVE_CLAMP: float = _env_float("NEGATIVE_CLAMP", 1e-12)

    # Quadrature oracle
    QUAD_REL_TOL: float = _env_float("QUAD_REL_TOL", 1e-11)
    QUAD_ABS_TOL: float = _env_float("QUAD_ABS_TOL", 1e-13)
    QUAD_MAX_SUBDIVISIONS: int = _env_int("QUAD_MAX_SUBDIVISIONS", 100000)
    QUAD_MIN_INTERVAL: float = _env_float("QUAD_MIN_INTERVAL", 1e-13)
    QUAD_WORKERS: int = _env_int("QUAD_WORKERS", 1)


settings = Settings()
