"""
Exception hierarchy shared by the library, the CLI and the HTTP API.

Each family carries the CLI exit code and the HTTP status it maps to.
"""
import math
from typing import Any, Dict, Optional


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats (not representable in JSON) by their string form."""
    if isinstance(value, float):
        return value if math.isfinite(value) else str(value)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


class BandNormError(Exception):
    """Base class for every error raised by bandnorm."""

    exit_code: int = 4
    http_status: int = 500

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "details": _json_safe(self.details)}


# --- mathematical preconditions (exit 2) ---

class PreconditionError(BandNormError):
    """A mathematical precondition of a closed form does not hold."""

    exit_code = 2
    http_status = 422


class NotSchurError(PreconditionError):
    def __init__(self, spectral_radius: float, margin: float):
        super().__init__(
            f"A is not Schur: spectral radius {spectral_radius:.16g} "
            f"(required < 1 - {margin:g})",
            spectral_radius=spectral_radius,
            margin=margin,
        )
        self.spectral_radius = spectral_radius


class PoleOnArcError(PreconditionError):
    def __init__(self, clearance: float, threshold: float, eigenvalue: Optional[complex] = None,
                 where: str = "arc"):
        eig = "" if eigenvalue is None else f" (eigenvalue {eigenvalue:.6g})"
        super().__init__(
            f"pole on the integration {where}: clearance {clearance:.3e} "
            f"below threshold {threshold:.1e}{eig}",
            clearance=clearance,
            threshold=threshold,
            eigenvalue=None if eigenvalue is None else [eigenvalue.real, eigenvalue.imag],
        )
        self.clearance = clearance
        self.eigenvalue = eigenvalue


class SingularPencilError(PreconditionError):
    def __init__(self, message: str = "singular pencil", **details: Any):
        super().__init__(message, **details)


class BranchCutError(PreconditionError):
    def __init__(self, eigenvalue: complex, distance: float, tol: float):
        super().__init__(
            f"eigenvalue {eigenvalue:.6g} lies within {distance:.3e} of the closed negative "
            f"real axis (tolerance {tol:.1e}); principal logarithm undefined",
            eigenvalue=[eigenvalue.real, eigenvalue.imag],
            distance=distance,
        )
        self.eigenvalue = eigenvalue
        self.distance = distance


class ConditioningError(PreconditionError):
    def __init__(self, condition: float, bound: float):
        super().__init__(
            f"eigenvector matrix condition {condition:.3e} exceeds bound {bound:.1e}",
            condition=condition,
            bound=bound,
        )


# --- input problems (exit 3) ---

class InputError(BandNormError):
    """Malformed or inconsistent input."""

    exit_code = 3
    http_status = 400


class ShapeError(InputError):
    pass


class SystemFileError(InputError):
    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}", field=field, line=line)
        self.field = field
        self.line = line


# --- numerical failures (exit 4) ---

class NumericalError(BandNormError):
    """A computation ran but could not deliver a trustworthy result."""

    exit_code = 4
    http_status = 500


class QuadratureError(NumericalError):
    def __init__(self, message: str, estimate: Any = None, error: Optional[float] = None):
        super().__init__(message, error_estimate=error)
        self.estimate = estimate
        self.error = error


class OracleMismatchError(NumericalError):
    def __init__(self, closed_form: Any, oracle: Any, difference: float, tol: float):
        super().__init__(
            f"closed form disagrees with quadrature oracle: |difference| = {difference:.3e} "
            f"exceeds {tol:.1e}",
            difference=difference,
            tolerance=tol,
        )
