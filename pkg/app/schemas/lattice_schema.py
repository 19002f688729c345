# lattice_schema.py
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from app.calculation.fqm import JordanComponent
from app.calculation.lattice_core import HyperbolicSplit, LatticeProfile
from app.calculation.theta import ModularityReport
from app.enums import JordanTag
from app.schemas.common_schema import CycloNumSchema, FqmSchema, LatticeInput, ModuleSource, parse_rational
from app.schemas.gate_schema import ConverseReportSchema


class LatticeProfileSchema(BaseModel):
    rank: int
    signature_pair: tuple[int, int]
    signature: int
    det: int
    level: int
    witt_index: int
    disc_order: int

    @classmethod
    def from_domain(cls, profile: LatticeProfile) -> "LatticeProfileSchema":
        return cls(
            rank=profile.rank,
            signature_pair=(profile.positive, profile.negative),
            signature=profile.signature,
            det=profile.det,
            level=profile.level,
            witt_index=profile.witt_index,
            disc_order=profile.disc_order,
        )


class JordanComponentSchema(BaseModel):
    prime: int
    exponent: int
    tag: JordanTag
    t: Optional[int] = None
    label: str

    @classmethod
    def from_domain(cls, component: JordanComponent) -> "JordanComponentSchema":
        return cls(
            prime=component.prime,
            exponent=component.exponent,
            tag=component.tag,
            t=component.t,
            label=component.label,
        )


class HyperbolicSplitSchema(BaseModel):
    z: list[int]
    z_prime: list[int]
    complement: Optional[list[list[int]]] = None
    complement_basis: list[list[int]]

    @classmethod
    def from_domain(cls, split: HyperbolicSplit) -> "HyperbolicSplitSchema":
        return cls(
            z=list(split.z),
            z_prime=list(split.z_prime),
            complement=[list(row) for row in split.complement.entries] if split.complement else None,
            complement_basis=[list(row) for row in split.complement_basis],
        )


class AnalysisBundle(BaseModel):
    profile: LatticeProfileSchema
    fqm: FqmSchema
    anisotropic: Optional[bool] = None
    classification: Optional[dict[int, list[JordanComponentSchema]]] = None
    classification_note: Optional[str] = None
    milgram_signature: int
    weil_relations: Optional[dict[str, bool]] = None
    hyperbolic_split: Optional[HyperbolicSplitSchema] = None
    converse: ConverseReportSchema


class WeilRequest(ModuleSource):
    sig_mod8: Optional[int] = Field(None, description="defaults to the Milgram signature")
    gamma: Optional[list[list[int]]] = None

    @field_validator("gamma")
    @classmethod
    def check_gamma(cls, value):
        if value is not None and (len(value) != 2 or any(len(row) != 2 for row in value)):
            raise ValueError("gamma must be a 2x2 integer matrix")
        return value


class WeilResponse(BaseModel):
    sig_mod8: int
    basis: list[list[int]]
    rho_T: list[CycloNumSchema]
    rho_S: list[list[CycloNumSchema]]
    rho_Z: list[list[CycloNumSchema]]
    relations: dict[str, bool]
    rho_gamma: Optional[list[list[CycloNumSchema]]] = None


class GaussRequest(ModuleSource):
    d: int = 1


class GaussResponse(BaseModel):
    d: int
    order: int
    value: CycloNumSchema
    numeric: dict[str, list[str]]
    milgram_signature: int


class ThetaRequest(LatticeInput):
    n_max: str = "2"
    z_basis: Optional[list[list[str]]] = None
    tau_samples: Optional[list[tuple[float, float]]] = None
    precision_bits: Optional[int] = None
    tolerance: Optional[float] = None

    @field_validator("n_max")
    @classmethod
    def check_n_max(cls, value):
        if parse_rational(value) < 0:
            raise ValueError("n_max must be non-negative")
        return value


class ThetaRow(BaseModel):
    coset: list[int]
    n: Optional[str] = None
    n_plus: Optional[str] = None
    n_minus: Optional[str] = None
    count: int


class ModularitySampleSchema(BaseModel):
    tau: tuple[float, float]
    t_residual: float
    s_residual: float


class ModularityReportSchema(BaseModel):
    n_max: int
    tolerance: float
    max_residual: float
    samples: list[ModularitySampleSchema]

    @classmethod
    def from_domain(cls, report: ModularityReport) -> "ModularityReportSchema":
        return cls(
            n_max=report.n_max,
            tolerance=report.tolerance,
            max_residual=report.max_residual,
            samples=[
                ModularitySampleSchema(
                    tau=(s.tau.real, s.tau.imag), t_residual=s.t_residual, s_residual=s.s_residual
                )
                for s in report.samples
            ],
        )


class ThetaResponse(BaseModel):
    rank: int
    n_max: str
    indefinite: bool
    rows: list[ThetaRow]
    modularity: Optional[ModularityReportSchema] = None
