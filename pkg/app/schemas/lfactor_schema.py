# lfactor_schema.py
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from app.calculation.l_diagnostics import AssemblyReport, NonvanishingReport
from app.enums import FactorSource, TermVerdict
from app.schemas.common_schema import ComplexInput, CycloNumSchema, IntervalSchema, ModuleSource


class NonvanishingRequest(ModuleSource):
    m: int
    l: int = 0
    primes: list[int] = Field(..., min_length=1)
    precision_bits: Optional[int] = None

    @field_validator("m")
    @classmethod
    def check_m_even(cls, value):
        if value % 2:
            raise ValueError("m must be even")
        return value


class NonvanishingTermSchema(BaseModel):
    prime: int
    chi: CycloNumSchema
    exponent: int
    term: CycloNumSchema
    interval: Optional[IntervalSchema] = None
    verdict: TermVerdict


class NonvanishingReportSchema(BaseModel):
    m: int
    l: int
    theorem_regime: bool
    all_nonzero: bool
    terms: list[NonvanishingTermSchema]

    @classmethod
    def from_domain(cls, report: NonvanishingReport) -> "NonvanishingReportSchema":
        return cls(
            m=report.m,
            l=report.l,
            theorem_regime=report.theorem_regime,
            all_nonzero=report.all_nonzero,
            terms=[
                NonvanishingTermSchema(
                    prime=t.prime,
                    chi=CycloNumSchema.from_domain(t.chi),
                    exponent=t.exponent,
                    term=CycloNumSchema.from_domain(t.term),
                    interval=IntervalSchema.from_domain(t.interval) if t.interval is not None else None,
                    verdict=t.verdict,
                )
                for t in report.terms
            ],
        )


class L2NormRequest(ModuleSource):
    m: int
    l: int = 0
    L_value: Optional[ComplexInput] = None
    vol: Optional[ComplexInput] = None
    c_s0: Optional[ComplexInput] = None
    dirichlet_value: Optional[ComplexInput] = None
    chi_a: str = Field("jacobi", description="jacobi, trivial or table:v0,v1,...")
    precision_bits: Optional[int] = None


class AssemblyFactorSchema(BaseModel):
    name: str
    source: FactorSource
    value: IntervalSchema


class L2NormResponse(BaseModel):
    value: IntervalSchema
    factors: list[AssemblyFactorSchema]

    @classmethod
    def from_domain(cls, report: AssemblyReport) -> "L2NormResponse":
        return cls(
            value=IntervalSchema.from_domain(report.value),
            factors=[
                AssemblyFactorSchema(name=f.name, source=f.source, value=IntervalSchema.from_domain(f.value))
                for f in report.factors
            ],
        )
