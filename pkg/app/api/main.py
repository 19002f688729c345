from fastapi import APIRouter

from app.api.routes import gate, lattice, lfactor, scan

api_router = APIRouter()

api_router.include_router(lattice.router)
api_router.include_router(gate.router)
api_router.include_router(lfactor.router)
api_router.include_router(scan.router)
