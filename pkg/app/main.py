from datetime import datetime, timezone

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.api.main import api_router
from app.logger import logger
from app.utils.errors import (
    CharacterError,
    DegenerateLatticeError,
    InconclusiveError,
    InsufficientTruncationError,
    InvalidLatticeError,
    InvalidModuleError,
    LatticeGateError,
    MissingInputError,
    PrincipalPartError,
    ThetaRequestError,
)

app = FastAPI(title="Lattice Gate API")

app.include_router(api_router)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# invalid input is 422, undecidable numerics 409, anything else unsupported 400
INVALID_INPUT = (
    InvalidLatticeError,
    DegenerateLatticeError,
    InvalidModuleError,
    PrincipalPartError,
    MissingInputError,
    CharacterError,
    ThetaRequestError,
)
INCONCLUSIVE = (InconclusiveError, InsufficientTruncationError)


def status_for(exc: LatticeGateError) -> int:
    if isinstance(exc, INVALID_INPUT):
        return status.HTTP_422_UNPROCESSABLE_ENTITY
    if isinstance(exc, INCONCLUSIVE):
        return status.HTTP_409_CONFLICT
    return status.HTTP_400_BAD_REQUEST


@app.exception_handler(LatticeGateError)
async def lattice_gate_error_handler(request: Request, exc: LatticeGateError):
    code = status_for(exc)
    logger.info("%s %s -> %d %s: %s", request.method, request.url.path, code, type(exc).__name__, exc)
    content = {"detail": str(exc), "error": type(exc).__name__}
    if isinstance(exc, InsufficientTruncationError):
        content["required_n_max"] = exc.required_n_max
    if isinstance(exc, MissingInputError):
        content["missing"] = exc.missing
    return JSONResponse(status_code=code, content=content)


@app.exception_handler(ValueError)
async def value_error_handler(request: Request, exc: ValueError):
    logger.info("%s %s -> 422: %s", request.method, request.url.path, exc)
    return JSONResponse(
        status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
        content={"detail": str(exc), "error": "ValueError"},
    )


# Root endpoint
@app.get("/", tags=["Root"])
def read_root():
    return {
        "message": "Welcome to the Lattice Gate API",
        "documentation": "/docs",
        "redoc": "/redoc",
    }


# Health check endpoint
@app.get("/health", tags=["Health"])
def health_check():
    return {"status": "ok", "timestamp": datetime.now(timezone.utc).isoformat()}
