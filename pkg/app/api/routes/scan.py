from fastapi import APIRouter, Depends

from app.api.dependencies import get_scan_service
from app.schemas.scan_schema import ScanRequest, ScanRow
from app.services.scan_service import ScanService

router = APIRouter(tags=["Scan"])


@router.post("/scan", response_model=list[ScanRow], summary="Anisotropic modules of odd square-free order")
def scan(body: ScanRequest, service: ScanService = Depends(get_scan_service)):
    return service.scan(body.max_order, body.signatures)
