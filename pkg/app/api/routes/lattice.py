from fastapi import APIRouter, Depends, status

from app.api.dependencies import get_lattice_service
from app.schemas.common_schema import LatticeInput
from app.schemas.gate_schema import HeegnerRequest, HeegnerResponse
from app.schemas.lattice_schema import (
    AnalysisBundle,
    GaussRequest,
    GaussResponse,
    ThetaRequest,
    ThetaResponse,
    WeilRequest,
    WeilResponse,
)
from app.services.lattice_analysis_service import LatticeAnalysisService

router = APIRouter(prefix="/lattice", tags=["Lattice"])


@router.post(
    "/analyze",
    response_model=AnalysisBundle,
    status_code=status.HTTP_200_OK,
    summary="Invariants, discriminant form and converse gate of an even lattice",
)
def analyze(body: LatticeInput, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.analyze(body.to_domain())


@router.post(
    "/weil",
    response_model=WeilResponse,
    summary="Exact Weil representation matrices and relation checks",
)
def weil(body: WeilRequest, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.weil(body.to_domain(), body.sig_mod8, body.gamma)


@router.post("/gauss", response_model=GaussResponse, summary="Gauss sum g_d(A) and Milgram signature")
def gauss(body: GaussRequest, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.gauss(body.to_domain(), body.d)


@router.post(
    "/theta",
    response_model=ThetaResponse,
    summary="Coset theta coefficients, optionally with a modularity check",
)
def theta(body: ThetaRequest, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.theta(
        body.to_domain(),
        body.n_max,
        z_basis=body.z_basis,
        tau_samples=body.tau_samples,
        precision_bits=body.precision_bits,
        tolerance=body.tolerance,
    )


@router.post("/heegner", response_model=HeegnerResponse, summary="Vectors of mu + L with Q = n")
def heegner(body: HeegnerRequest, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.heegner(body.to_domain(), body.mu, body.n, body.bound)
