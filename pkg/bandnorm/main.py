"""
Main FastAPI application for frequency-band norms and integrals.
"""
from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from bandnorm.api.routes import router as api_router
from bandnorm.core.config import settings
from bandnorm.models.schemas import ErrorResponse

# Create FastAPI application
app = FastAPI(
    title=settings.APP_NAME,
    version=settings.APP_VERSION,
    description="Frequency-truncated L2 norms and band integrals of discrete-time and descriptor systems",
    debug=settings.DEBUG,
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.ALLOWED_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include API routes with /api prefix
app.include_router(api_router, prefix="/api", tags=["API"])


@app.exception_handler(RequestValidationError)
async def request_validation_handler(request: Request, exc: RequestValidationError):
    """Malformed request bodies are input errors (400), like malformed system documents."""
    body = ErrorResponse(error="InputError", message="invalid request body", details={"errors": exc.errors()})
    return JSONResponse(status_code=400, content=jsonable_encoder(body))


@app.get("/")
async def root():
    """Service index."""
    return {
        "message": "Welcome to the Band Norm API",
        "docs": "/docs",
        "health": "/api/health",
    }

if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "bandnorm.main:app",
        host="0.0.0.0",
        port=8000,
        reload=settings.DEBUG,
    )
