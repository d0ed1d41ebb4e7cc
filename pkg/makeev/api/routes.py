"""
FastAPI Routes for the Certification Service

Endpoints:
    GET  /health
    POST /certify                      spec file body
    GET  /certify/preset/{identifier}  theorem preset
    GET  /bounds
    POST /search
    POST /verify

Domain errors surface as 400 and resource-limit errors as 413 through the
exception handlers registered in main.py.
"""

import logging
from typing import Optional

from fastapi import APIRouter, Query, status

from makeev import __version__
from makeev.config import get_settings
from makeev.models.schemas import (
    BoundReport,
    CertificateResult,
    ErrorResponse,
    FourierReport,
    HealthResponse,
    PresetId,
    SearchReport,
    SearchRequest,
    SpecFile,
    VerifyRequest,
)
from makeev.services import bounds, equipart
from makeev.services.certify import get_certification_service
from makeev.services.presets import make_preset
from makeev.validation.validator import get_validator

logger = logging.getLogger(__name__)

router = APIRouter()

ERROR_RESPONSES = {
    400: {"description": "Invalid parameters or input", "model": ErrorResponse},
    413: {"description": "Resource limit exceeded", "model": ErrorResponse},
    422: {"description": "Request body or query fails the schema", "model": ErrorResponse},
    500: {"description": "Internal error", "model": ErrorResponse},
}


@router.get("/health", response_model=HealthResponse, summary="Health check")
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__, cell_limit=get_settings().cell_limit)


@router.post(
    "/certify",
    response_model=CertificateResult,
    status_code=status.HTTP_200_OK,
    summary="Certify a representation spec",
    description="""
    Runs the full-monomial test for the spec at its target dimension d.

    **Status values:**
    - Certified: p_U equals t_1^d ... t_k^d
    - NotCertified: p_U differs from the target monomial
    - DimensionMismatch: dim U != k*d, the test is not run
    """,
    responses=ERROR_RESPONSES,
)
def certify_spec(spec: SpecFile) -> CertificateResult:
    logger.info(f"Certify request: k={spec.k}, d={spec.d}, {len(spec.blocks)} blocks")
    return get_certification_service().certify(spec.to_spec(), spec.d)


@router.get(
    "/certify/preset/{identifier}",
    response_model=CertificateResult,
    summary="Certify a theorem preset",
    responses=ERROR_RESPONSES,
)
def certify_preset(
    identifier: PresetId,
    k: Optional[int] = Query(default=None),
    q: Optional[int] = Query(default=None),
    t: Optional[int] = Query(default=None),
    d: Optional[int] = Query(default=None),
) -> CertificateResult:
    preset = make_preset(identifier, k=k, q=q, t=t, d=d)
    logger.info(f"Certify preset request: {preset.label()}")
    return get_certification_service().certify_preset(preset)


@router.get("/bounds", response_model=BoundReport, summary="Bound report", responses=ERROR_RESPONSES)
def bound_report(
    m: int = Query(..., ge=1),
    l: int = Query(..., ge=1),
    k: int = Query(..., ge=1),
    ortho: bool = Query(default=False),
) -> BoundReport:
    return bounds.bound_report(m, l, k, ortho)


@router.post("/search", response_model=SearchReport, summary="Minimal certified d", responses=ERROR_RESPONSES)
def search(request: SearchRequest) -> SearchReport:
    logger.info(f"Search request: {request.model_dump()}")
    return get_certification_service().minimal_certified_d(
        request.m, request.l, request.k, request.policy, request.d_max,
    )


@router.post("/verify", response_model=FourierReport, summary="Fourier equipartition check", responses=ERROR_RESPONSES)
def verify(request: VerifyRequest) -> FourierReport:
    validator = get_validator()
    for result, source in (
        (validator.validate_arrangement(request.arrangement), "arrangement"),
        (validator.validate_masses(request.masses), "masses"),
    ):
        validator.raise_on_errors(result, source)
    arrangement = validator.to_arrangement(request.arrangement)
    masses = validator.to_masses(request.masses)
    return equipart.check_equipartition(
        arrangement, masses, request.l, rel_tol=request.tol, orthogonal=request.orthogonal,
    )
