# gate_schema.py
from fractions import Fraction
from typing import Optional

from pydantic import BaseModel, Field

from app.calculation.borcherds_gate import (
    ConverseReport,
    HypothesisVerdict,
    InjectivityReport,
    PrincipalPart,
    SingularWeightData,
)
from app.calculation.exact_arithmetic import format_rational
from app.schemas.common_schema import LatticeInput, ModuleSource, parse_rational


class HypothesisVerdictSchema(BaseModel):
    passed: bool
    reason: str

    @classmethod
    def from_domain(cls, verdict: HypothesisVerdict) -> "HypothesisVerdictSchema":
        return cls(passed=verdict.passed, reason=verdict.reason)


class ConverseReportSchema(BaseModel):
    passed: bool
    failing: list[str]
    verdicts: dict[str, HypothesisVerdictSchema]

    @classmethod
    def from_domain(cls, report: ConverseReport) -> "ConverseReportSchema":
        return cls(
            passed=report.passed,
            failing=report.failing,
            verdicts={k: HypothesisVerdictSchema.from_domain(v) for k, v in report.verdicts.items()},
        )


class InjectivityRequest(LatticeInput):
    l: int = 0


class InjectivityReportSchema(BaseModel):
    passed: bool
    verdicts: dict[str, HypothesisVerdictSchema]

    @classmethod
    def from_domain(cls, report: InjectivityReport) -> "InjectivityReportSchema":
        return cls(
            passed=report.passed,
            verdicts={k: HypothesisVerdictSchema.from_domain(v) for k, v in report.verdicts.items()},
        )


class SingularWeightSchema(BaseModel):
    weight: str
    c00: int
    half_c00: str

    @classmethod
    def from_domain(cls, data: SingularWeightData) -> "SingularWeightSchema":
        return cls(weight=format_rational(data.weight), c00=data.c00, half_c00=format_rational(data.half_c00))


class PrincipalPartTerm(BaseModel):
    mu: list[int]
    n: str
    c: str


class PrincipalPartSchema(BaseModel):
    c00: str = "0"
    terms: list[PrincipalPartTerm] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, pp: PrincipalPart) -> "PrincipalPartSchema":
        return cls(
            c00=format_rational(pp.c00),
            terms=[
                PrincipalPartTerm(mu=list(mu), n=format_rational(n), c=format_rational(c))
                for mu, n, c in pp.terms
            ],
        )

    def to_domain(self) -> PrincipalPart:
        mapping: dict[tuple[tuple[int, ...], Fraction], Fraction] = {}
        for term in self.terms:
            key = (tuple(term.mu), parse_rational(term.n))
            mapping[key] = mapping.get(key, Fraction(0)) + parse_rational(term.c)
        return PrincipalPart.from_mapping(mapping, parse_rational(self.c00))


class ReflectiveRequest(ModuleSource):
    principal_part: PrincipalPartSchema
    relaxed_integrality: Optional[bool] = None
    symmetrize: bool = False


class ReflectiveResponse(BaseModel):
    passed: bool
    reasons: list[str]
    symmetrized: Optional[PrincipalPartSchema] = None
    symmetrized_passed: Optional[bool] = None
    symmetrized_reasons: Optional[list[str]] = None
    index_set_sizes: dict[int, int]


class SingularWeightSettingSchema(BaseModel):
    passed: bool
    converse: ConverseReportSchema
    q_ranks_bounded: HypothesisVerdictSchema
    split_found: bool
    weight_data: Optional[SingularWeightSchema] = None


class HeegnerRequest(LatticeInput):
    mu: list[int]
    n: str
    bound: Optional[int] = None


class HeegnerResponse(BaseModel):
    mu: list[int]
    n: str
    multiplicity: int
    vectors: list[list[str]]
