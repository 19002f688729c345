from pathlib import Path

from dotenv import load_dotenv
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

dotenv_path = Path(__file__).resolve().parent.parent.parent / ".env"
load_dotenv(dotenv_path=dotenv_path)


class Settings(BaseSettings):
    precision_bits: int = Field(128, description="Default interval precision in bits")
    max_precision_bits: int = Field(1024, description="Ceiling for automatic precision escalation")
    search_bound: int = Field(10, description="Coefficient bound for isotropic vector searches")
    anisotropy_scan_limit: int = 1_000_000
    orthogonal_group_limit: int = 10_000
    isomorphism_limit: int = 10_000
    scan_max_order: int = 10_000
    theta_tolerance: float = 1e-10
    relaxed_integrality: bool = False
    log_level: str = "INFO"
    log_file: str | None = None

    model_config = {
        "env_file": dotenv_path,
        "env_prefix": "LATTICE_GATE_",
        "extra": "ignore",
    }

    @field_validator("precision_bits", "max_precision_bits")
    @classmethod
    def check_precision(cls, value: int) -> int:
        if value < 53:
            raise ValueError("precision must be at least 53 bits")
        return value

    @field_validator("search_bound", "anisotropy_scan_limit", "orthogonal_group_limit",
                     "isomorphism_limit", "scan_max_order")
    @classmethod
    def check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("bounds must be positive")
        return value


settings = Settings()
