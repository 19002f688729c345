from fastapi import APIRouter, Depends

from app.api.dependencies import get_lfactor_service
from app.schemas.lfactor_schema import L2NormRequest, L2NormResponse, NonvanishingReportSchema, NonvanishingRequest
from app.services.lfactor_service import LFactorService

router = APIRouter(prefix="/lfactor", tags=["L-factors"])


def _value(field):
    return field.to_value() if field is not None else None


@router.post("/nonvanishing", response_model=NonvanishingReportSchema, summary="Local non-vanishing terms")
def nonvanishing(body: NonvanishingRequest, service: LFactorService = Depends(get_lfactor_service)):
    return service.nonvanishing(body.to_domain(), body.m, body.l, body.primes, body.precision_bits)


@router.post("/l2-norm", response_model=L2NormResponse, summary="Assembly of the L2-norm identity")
def l2_norm(body: L2NormRequest, service: LFactorService = Depends(get_lfactor_service)):
    return service.l2_norm(
        body.to_domain(),
        body.m,
        body.l,
        L_value=_value(body.L_value),
        vol=_value(body.vol),
        c_s0=_value(body.c_s0),
        dirichlet_value=_value(body.dirichlet_value),
        chi_spec=body.chi_a,
        precision_bits=body.precision_bits,
    )
