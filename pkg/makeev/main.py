"""
FastAPI Application Entry Point

HTTP surface of the certification toolkit: certificates, bounds, searches
and equipartition checks as JSON endpoints.

Run this application with:
    uvicorn makeev.main:app --reload

Or for production:
    uvicorn makeev.main:app --host 0.0.0.0 --port 8000 --workers 4
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from makeev import __version__
from makeev.api.routes import router
from makeev.config import get_settings
from makeev.errors import DomainError, MakeevError, ResourceLimitError, SpecParseError
from makeev.models.schemas import ErrorResponse

# Configure logging
logging.basicConfig(
    level=get_settings().log_level.upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[logging.StreamHandler()],
)

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """
    Application lifespan manager.
    Handles startup and shutdown events.
    """
    settings = get_settings()
    logger.info(f"Starting Makeev certification service (cell limit {settings.cell_limit}, {settings.workers} workers)")
    yield
    logger.info("Shutting down Makeev certification service...")


app = FastAPI(
    title="Makeev Equipartition Certification Service",
    description="""
    Exact GF(2) certificates and bound formulas for the generalized Makeev
    hyperplane equipartition problem, plus Fourier checks of concrete
    arrangements on discrete masses.
    """,
    version=__version__,
    docs_url="/docs",
    redoc_url="/redoc",
    lifespan=lifespan,
)

app.include_router(router, tags=["Certification"])


def _error(status_code: int, exc: MakeevError) -> JSONResponse:
    body = ErrorResponse(error_type=exc.error_type, message=exc.message, details=exc.details or None)
    return JSONResponse(status_code=status_code, content=body.model_dump())


@app.exception_handler(RequestValidationError)
async def request_validation_handler(request: Request, exc: RequestValidationError):
    issues = [
        {"field": ".".join(str(part) for part in err["loc"]), "message": err["msg"]}
        for err in exc.errors()
    ]
    logger.warning(f"{request.url.path}: {len(issues)} invalid field(s)")
    first = issues[0] if issues else {"field": "<body>", "message": "invalid request"}
    body = ErrorResponse(
        error_type="VALIDATION_ERROR",
        message=f"field '{first['field']}': {first['message']}",
        details={"issues": issues},
    )
    return JSONResponse(status_code=422, content=body.model_dump())


@app.exception_handler(DomainError)
@app.exception_handler(SpecParseError)
async def bad_input_handler(request: Request, exc: MakeevError):
    logger.warning(f"{request.url.path}: {exc.message}")
    return _error(400, exc)


@app.exception_handler(ResourceLimitError)
async def resource_handler(request: Request, exc: ResourceLimitError):
    logger.warning(f"{request.url.path}: {exc.message}")
    return _error(413, exc)


# Global exception handler for unhandled errors
@app.exception_handler(Exception)
async def global_exception_handler(request: Request, exc: Exception):
    """Unexpected failures become a structured 500 body without a stack trace."""
    logger.error(f"Unhandled exception on {request.url.path}: {exc}", exc_info=True)
    body = ErrorResponse(error_type="INTERNAL_ERROR", message="Unexpected error while computing the report")
    return JSONResponse(status_code=500, content=body.model_dump())


@app.get("/", summary="API Root")
async def root():
    return {
        "service": "Makeev Equipartition Certification Service",
        "version": __version__,
        "endpoints": {
            "health": "GET /health",
            "certify": "POST /certify",
            "certify_preset": "GET /certify/preset/{identifier}",
            "bounds": "GET /bounds",
            "search": "POST /search",
            "verify": "POST /verify",
        },
    }


if __name__ == "__main__":
    import uvicorn
    uvicorn.run("makeev.main:app", host="127.0.0.1", port=8000, reload=True, log_level="info")
