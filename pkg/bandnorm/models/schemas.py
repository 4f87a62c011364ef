"""
Pydantic models for domain types and for API request/response validation.
"""
import math
from typing import Any, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from bandnorm.core.config import settings


def as_matrix(value: Any, name: str = "matrix", dtype: type = float) -> np.ndarray:
    """
    Coerce nested sequences (or arrays) into a finite 2-D numpy array.

    Scalars become 1x1 matrices and flat sequences become single rows.

    Raises:
        ValueError: If the value is not rectangular, not numeric or not finite
    """
    try:
        arr = np.array(value, dtype=dtype)
    except (TypeError, ValueError) as e:
        raise ValueError(f"{name} must be a rectangular numeric array: {e}") from e
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got {arr.ndim} dimensions")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def as_complex(value: Any) -> complex:
    """Convert a number or a [real, imag] pair to a Python complex."""
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


class MatrixModel(BaseModel):
    """Base for frozen models holding numpy matrices."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


# --- pencils, bands, shifts ---

class DescriptorPair(MatrixModel):
    """The pencil (E, A) appearing in the resolvent (zE - A)^-1."""
    E: np.ndarray = Field(..., description="Real n x n descriptor matrix")
    A: np.ndarray = Field(..., description="Real n x n state matrix")

    @field_validator("E", "A", mode="before")
    @classmethod
    def _coerce(cls, v, info):
        return as_matrix(v, info.field_name)

    @model_validator(mode="after")
    def _check_shapes(self):
        if self.A.shape[0] != self.A.shape[1] or self.A.shape[0] == 0:
            raise ValueError(f"A must be square and non-empty, got {self.A.shape}")
        if self.E.shape != self.A.shape:
            raise ValueError(f"E shape {self.E.shape} does not match A shape {self.A.shape}")
        return self

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @classmethod
    def standard(cls, A: Any) -> "DescriptorPair":
        """Pencil (I, A) of a standard state-space system."""
        A = as_matrix(A, "A")
        return cls(E=np.eye(A.shape[0]), A=A)


class ShiftSelection(MatrixModel):
    """Regularizing pair (alpha, beta) with W = alpha E + beta A invertible."""
    alpha: complex = Field(..., description="Coefficient of E")
    beta: complex = Field(..., description="Coefficient of A")
    W: np.ndarray = Field(..., description="alpha E + beta A")
    W_condition: float = Field(..., description="2-norm condition number of W")

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def _coerce_scalar(cls, v):
        return as_complex(v)

    @model_validator(mode="after")
    def _check_nonzero(self):
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("(alpha, beta) must not both vanish")
        return self


class PencilEigenvalue(BaseModel):
    """A generalized eigenvalue, possibly infinite."""
    real: float = Field(0.0, description="Real part (0 when infinite)")
    imag: float = Field(0.0, description="Imaginary part (0 when infinite)")
    infinite: bool = Field(False, description="True for an infinite eigenvalue")

    @property
    def value(self) -> complex:
        if self.infinite:
            return complex(math.inf, 0.0)
        return complex(self.real, self.imag)


class Band(BaseModel):
    """Angular interval [theta1, theta2] within [-pi, pi]."""
    model_config = ConfigDict(frozen=True)

    theta1: float = Field(..., description="Lower band edge (radians)")
    theta2: float = Field(..., description="Upper band edge (radians)")

    @model_validator(mode="after")
    def _check_order(self):
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise ValueError("band edges must be finite")
        if not (-math.pi <= self.theta1 <= self.theta2 <= math.pi):
            raise ValueError(
                f"band must satisfy -pi <= theta1 <= theta2 <= pi, "
                f"got [{self.theta1}, {self.theta2}]"
            )
        return self

    @classmethod
    def full(cls) -> "Band":
        return cls(theta1=-math.pi, theta2=math.pi)

    @classmethod
    def from_degrees(cls, deg1: float, deg2: float) -> "Band":
        return cls(theta1=math.radians(deg1), theta2=math.radians(deg2))

    @property
    def width(self) -> float:
        return self.theta2 - self.theta1

    @property
    def is_empty(self) -> bool:
        return self.theta1 == self.theta2

    @property
    def is_interior(self) -> bool:
        """Both edges strictly inside (-pi, pi)."""
        return -math.pi < self.theta1 and self.theta2 < math.pi

    def mirrored(self) -> "Band":
        return Band(theta1=-self.theta2, theta2=-self.theta1)


class ContinuousBand(BaseModel):
    """Real frequency interval [omega1, omega2]."""
    model_config = ConfigDict(frozen=True)

    omega1: float = Field(..., description="Lower edge (rad/s)")
    omega2: float = Field(..., description="Upper edge (rad/s)")

    @model_validator(mode="after")
    def _check_order(self):
        if not (math.isfinite(self.omega1) and math.isfinite(self.omega2)):
            raise ValueError("band edges must be finite")
        if self.omega1 > self.omega2:
            raise ValueError(f"omega1 must not exceed omega2, got [{self.omega1}, {self.omega2}]")
        return self


# --- systems ---

class StateSpace(MatrixModel):
    """Real realization G(z) = D + C (zI - A)^-1 B."""
    A: np.ndarray = Field(..., description="n x n state matrix")
    B: np.ndarray = Field(..., description="n x m input matrix")
    C: np.ndarray = Field(..., description="p x n output matrix")
    D: np.ndarray = Field(..., description="p x m feedthrough matrix")

    @model_validator(mode="before")
    @classmethod
    def _default_feedthrough(cls, data):
        if isinstance(data, dict) and data.get("D") is None:
            B = as_matrix(data.get("B", [[0.0]]), "B")
            C = as_matrix(data.get("C", [[0.0]]), "C")
            data = {**data, "D": np.zeros((C.shape[0], B.shape[1]))}
        return data

    @field_validator("A", "B", "C", "D", mode="before")
    @classmethod
    def _coerce(cls, v, info):
        return as_matrix(v, info.field_name)

    @model_validator(mode="after")
    def _check_shapes(self):
        n = self.A.shape[0]
        if self.A.shape != (n, n) or n == 0:
            raise ValueError(f"A must be square and non-empty, got {self.A.shape}")
        if self.B.shape[0] != n:
            raise ValueError(f"B must have {n} rows, got {self.B.shape}")
        if self.C.shape[1] != n:
            raise ValueError(f"C must have {n} columns, got {self.C.shape}")
        if self.D.shape != (self.C.shape[0], self.B.shape[1]):
            raise ValueError(
                f"D must be {self.C.shape[0]} x {self.B.shape[1]}, got {self.D.shape}"
            )
        return self

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def is_strictly_proper(self) -> bool:
        return not np.any(self.D)

    def strictly_proper_part(self) -> "StateSpace":
        return StateSpace(A=self.A, B=self.B, C=self.C, D=np.zeros_like(self.D))


class GramianMatrix(MatrixModel):
    """Solution P of A^T P A - P + Q = 0."""
    P: np.ndarray = Field(..., description="Symmetric positive semidefinite n x n matrix")

    @model_validator(mode="after")
    def _check_symmetric(self):
        scale = max(np.linalg.norm(self.P), 1.0)
        if np.linalg.norm(self.P - self.P.T) > 1e-12 * scale:
            raise ValueError("Gramian is not symmetric")
        if self.P.size and np.linalg.eigvalsh((self.P + self.P.T) / 2).min() < -1e-10 * scale:
            raise ValueError("Gramian is not positive semidefinite")
        return self


class AugmentedSystem(MatrixModel):
    """Descriptor realization of G~(z) G(z) / z used by the general norm."""
    A_h: np.ndarray = Field(..., description="[[A, 0], [C^T C, I]]")
    E_h: np.ndarray = Field(..., description="[[I, 0], [0, A^T]]")
    B_h: np.ndarray = Field(..., description="[B; 0]")
    C_h: np.ndarray = Field(..., description="[0, -B^T]")

    def pencil(self) -> DescriptorPair:
        return DescriptorPair(E=self.E_h, A=self.A_h)


NormMethod = Literal["stable", "general", "full_band"]


class NormResult(BaseModel):
    """Squared frequency-truncated norm with provenance."""
    value: float = Field(..., description="Squared norm over the band (>= 0)")
    band: Band = Field(..., description="Integration band")
    method: NormMethod = Field(..., description="Closed form used")
    arc_clearance: float = Field(..., description="Distance from poles to the band arc")
    diagnostics: List[str] = Field(default_factory=list, description="Warnings and notes")


class IntegralWorkspace(MatrixModel):
    """Intermediate quantities of the discrete closed form."""
    t1: float = Field(..., description="tan(theta1 / 2)")
    t2: float = Field(..., description="tan(theta2 / 2)")
    eta: complex = Field(..., description="log((t2 - j) / (t1 - j))")
    Gamma1: np.ndarray = Field(..., description="Gamma(theta1, 0)")
    Gamma2: np.ndarray = Field(..., description="Gamma(theta2, 0)")
    Y: np.ndarray = Field(..., description="-eta I + log of the Gamma ratio")
    L: np.ndarray = Field(..., description="psi1(Y)^-1")

    @field_validator("eta", mode="before")
    @classmethod
    def _coerce_eta(cls, v):
        return as_complex(v)


# --- quadrature ---

class QuadratureConfig(BaseModel):
    """Tolerances and budget of the adaptive quadrature oracle."""
    model_config = ConfigDict(frozen=True)

    rel_tol: float = Field(default_factory=lambda: settings.QUAD_REL_TOL, gt=0)
    abs_tol: float = Field(default_factory=lambda: settings.QUAD_ABS_TOL, gt=0)
    max_subdivisions: int = Field(default_factory=lambda: settings.QUAD_MAX_SUBDIVISIONS, gt=0)
    min_interval: float = Field(default_factory=lambda: settings.QUAD_MIN_INTERVAL, gt=0)
    workers: int = Field(default_factory=lambda: settings.QUAD_WORKERS, ge=1)

    @field_validator("rel_tol")
    @classmethod
    def _above_epsilon(cls, v):
        if v < 10 * np.finfo(float).eps:
            raise ValueError(f"rel_tol must be at least 10 * machine epsilon, got {v}")
        return v


class QuadratureResult(MatrixModel):
    """Matrix-valued integral estimate."""
    value: np.ndarray = Field(..., description="Complex integral estimate")
    error: float = Field(..., description="Estimated absolute error (max norm)")
    success: bool = Field(..., description="False when the subdivision budget ran out")
    intervals: int = Field(0, description="Number of subintervals used")


# --- system files ---

class SystemFile(MatrixModel):
    """Validated contents of a system description document."""
    kind: Literal["state_space", "descriptor"] = Field(..., description="Realization kind")
    time_domain: Literal["discrete", "continuous"] = Field("discrete", description="Time domain")
    A: np.ndarray = Field(..., description="State matrix")
    B: Optional[np.ndarray] = Field(None, description="Input matrix")
    C: Optional[np.ndarray] = Field(None, description="Output matrix")
    D: Optional[np.ndarray] = Field(None, description="Feedthrough (state_space)")
    E: Optional[np.ndarray] = Field(None, description="Descriptor matrix (defaults to I)")

    @field_validator("A", "B", "C", "D", "E", mode="before")
    @classmethod
    def _coerce(cls, v, info):
        if v is None:
            return None
        return as_matrix(v, info.field_name)

    @model_validator(mode="after")
    def _check_kind(self):
        n = self.A.shape[0]
        if self.A.shape != (n, n):
            raise ValueError(f"A must be square, got {self.A.shape}")
        if self.kind == "state_space":
            if self.B is None or self.C is None:
                raise ValueError("state_space systems require B and C")
            if self.E is not None:
                raise ValueError("E is only allowed for descriptor systems")
            if self.B.shape[0] != n:
                raise ValueError(f"B must have {n} rows, got {self.B.shape}")
            if self.C.shape[1] != n:
                raise ValueError(f"C must have {n} columns, got {self.C.shape}")
            if self.D is not None and self.D.shape != (self.C.shape[0], self.B.shape[1]):
                raise ValueError(
                    f"D must be {self.C.shape[0]} x {self.B.shape[1]}, got {self.D.shape}"
                )
        else:
            if self.D is not None:
                raise ValueError("D is only allowed for state_space systems")
            if self.E is not None and self.E.shape != self.A.shape:
                raise ValueError(f"E shape {self.E.shape} does not match A shape {self.A.shape}")
            if self.B is not None and self.B.shape[0] != n:
                raise ValueError(f"B must have {n} rows, got {self.B.shape}")
            if self.C is not None and self.C.shape[1] != n:
                raise ValueError(f"C must have {n} columns, got {self.C.shape}")
        return self

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def pencil(self) -> DescriptorPair:
        E = np.eye(self.n) if self.E is None else self.E
        return DescriptorPair(E=E, A=self.A)

    def state_space(self) -> StateSpace:
        return StateSpace(A=self.A, B=self.B, C=self.C, D=self.D)


# --- API / structured output ---

class MatrixOutput(BaseModel):
    """Complex matrix split into real and imaginary parts."""
    real: List[List[float]] = Field(..., description="Real parts, row-major")
    imag: List[List[float]] = Field(..., description="Imaginary parts, row-major")

    @classmethod
    def from_array(cls, M: np.ndarray) -> "MatrixOutput":
        M = np.asarray(M, dtype=complex)
        return cls(real=M.real.tolist(), imag=M.imag.tolist())

    def to_array(self) -> np.ndarray:
        return np.array(self.real, dtype=float) + 1j * np.array(self.imag, dtype=float)


class NormResponse(BaseModel):
    """Output of the norm command."""
    value: float = Field(..., description="Squared truncated norm")
    method: str = Field(..., description="Closed form used")
    band: List[float] = Field(..., description="[theta1, theta2] in radians")
    arc_clearance: float = Field(..., description="Distance from poles to the band arc")
    multirate_error: Optional[float] = Field(None, description="J for the requested decimation")
    decimation: Optional[int] = Field(None, description="Decimation factor M")
    oracle_value: Optional[float] = Field(None, description="Quadrature cross-check value")
    warnings: List[str] = Field(default_factory=list, description="Diagnostics")


class IntegralResponse(MatrixOutput):
    """Output of the integral command."""
    method: str = Field(..., description="Closed form used")
    band: List[float] = Field(..., description="Band edges")
    time_domain: str = Field(..., description="discrete or continuous")
    arc_clearance: float = Field(..., description="Distance from poles to the path")
    oracle_difference: Optional[float] = Field(None, description="|closed form - oracle|")
    warnings: List[str] = Field(default_factory=list, description="Diagnostics")


class InfoResponse(BaseModel):
    """Output of the info command."""
    kind: str = Field(..., description="Realization kind")
    time_domain: str = Field(..., description="discrete or continuous")
    states: int = Field(..., description="State dimension n")
    eigenvalues: List[PencilEigenvalue] = Field(..., description="Generalized eigenvalues")
    spectral_radius: Optional[float] = Field(None, description="Largest finite |eigenvalue|")
    schur: Optional[bool] = Field(None, description="True when all poles are inside the unit circle")
    shift: Dict[str, Any] = Field(..., description="Selected (alpha, beta) and cond(W)")
    band: Optional[List[float]] = Field(None, description="Band inspected, if any")
    arc_clearance: Optional[float] = Field(None, description="Clearance for the band, if any")
    admissible: Optional[bool] = Field(None, description="Clearance above threshold")
    warnings: List[str] = Field(default_factory=list, description="Diagnostics")


class NormRequest(BaseModel):
    """Request body of POST /api/norm."""
    system: Dict[str, Any] = Field(..., description="System document")
    band: Optional[List[float]] = Field(None, description="[theta1, theta2]; full circle when omitted")
    method: Literal["auto", "stable", "general"] = Field("auto", description="Closed form")
    decimation: Optional[int] = Field(None, ge=1, description="Decimation factor M for J")
    degrees: bool = Field(False, description="Band given in degrees")
    check_oracle: Optional[float] = Field(None, gt=0, description="Oracle tolerance")


class IntegralRequest(BaseModel):
    """Request body of POST /api/integral."""
    system: Dict[str, Any] = Field(..., description="System document")
    band: List[float] = Field(..., description="[theta1, theta2] or [omega1, omega2]")
    continuous: bool = Field(False, description="Continuous-time integral")
    degrees: bool = Field(False, description="Band given in degrees (discrete only)")
    check_oracle: Optional[float] = Field(None, gt=0, description="Oracle tolerance")


class InfoRequest(BaseModel):
    """Request body of POST /api/info."""
    system: Dict[str, Any] = Field(..., description="System document")
    band: Optional[List[float]] = Field(None, description="Optional band to inspect")
    continuous: bool = Field(False, description="Inspect a continuous band")
    degrees: bool = Field(False, description="Band given in degrees")


class ErrorResponse(BaseModel):
    """Error response."""
    error: str = Field(..., description="Error class")
    message: str = Field(..., description="Error message")
    details: Optional[Dict[str, Any]] = Field(None, description="Additional error details")


class HealthCheck(BaseModel):
    """Health check response."""
    status: str = Field(..., description="Service status")
    version: str = Field(..., description="API version")
