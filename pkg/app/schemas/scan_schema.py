# scan_schema.py
from pydantic import BaseModel, Field


class ScanRequest(BaseModel):
    max_order: int = Field(..., ge=1)
    signatures: list[int] = Field(default_factory=lambda: list(range(1, 9)))


class ScanRow(BaseModel):
    order: int
    components: list[str]
    milgram_signature: int
    signature: int
    p: int
    weight: str
    c00: int
    half_c00: str
    index_set_sizes: dict[int, int]
