# app/api/dependencies.py
from fastapi import Depends

from app.services.lattice_analysis_service import LatticeAnalysisService
from app.services.lfactor_service import LFactorService
from app.services.scan_service import ScanService
from app.utils.settings import Settings, settings


def get_settings() -> Settings:
    return settings


def get_lattice_service(current: Settings = Depends(get_settings)) -> LatticeAnalysisService:
    return LatticeAnalysisService(current)


def get_lfactor_service(current: Settings = Depends(get_settings)) -> LFactorService:
    return LFactorService(current)


def get_scan_service(current: Settings = Depends(get_settings)) -> ScanService:
    return ScanService(current)
