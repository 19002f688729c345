from fastapi import APIRouter, Depends

from app.api.dependencies import get_lattice_service
from app.schemas.common_schema import LatticeInput
from app.schemas.gate_schema import (
    ConverseReportSchema,
    InjectivityReportSchema,
    InjectivityRequest,
    ReflectiveRequest,
    ReflectiveResponse,
    SingularWeightSettingSchema,
)
from app.services.lattice_analysis_service import LatticeAnalysisService

router = APIRouter(prefix="/gate", tags=["Gate"])


@router.post("/converse", response_model=ConverseReportSchema, summary="Hypotheses of the converse theorem")
def converse(body: LatticeInput, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.converse(body.to_domain())


@router.post("/reflective", response_model=ReflectiveResponse, summary="Reflectivity of a principal part")
def reflective(body: ReflectiveRequest, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.reflective(
        body.to_domain(),
        body.principal_part.to_domain(),
        relaxed=body.relaxed_integrality,
        with_symmetrization=body.symmetrize,
    )


@router.post("/injectivity", response_model=InjectivityReportSchema)
def injectivity(body: InjectivityRequest, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.injectivity(body.to_domain(), body.l)


@router.post("/singular-weight", response_model=SingularWeightSettingSchema)
def singular_weight(body: LatticeInput, service: LatticeAnalysisService = Depends(get_lattice_service)):
    return service.singular_weight(body.to_domain())
