# common_schema.py
from fractions import Fraction
from typing import Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from app.calculation.exact_arithmetic import ComplexInterval, CycloNum, as_rational, format_rational
from app.calculation.fqm import Fqm
from app.calculation.lattice_core import GramMatrix, discriminant_group, standard_lattice


def parse_rational(value: Union[str, int]) -> Fraction:
    try:
        return as_rational(value)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ValueError(f"{value!r} is not a rational number") from exc


class CycloNumSchema(BaseModel):
    conductor: int
    coeffs: dict[int, str]

    @classmethod
    def from_domain(cls, z: CycloNum) -> "CycloNumSchema":
        return cls(
            conductor=z.conductor,
            coeffs={k: format_rational(c) for k, c in sorted(z.coefficients.items())},
        )

    def to_domain(self) -> CycloNum:
        return CycloNum.from_exponents(self.conductor, {k: parse_rational(c) for k, c in self.coeffs.items()})


class IntervalSchema(BaseModel):
    re: list[str] = Field(..., min_length=2, max_length=2)
    im: list[str] = Field(..., min_length=2, max_length=2)

    @classmethod
    def from_domain(cls, z: ComplexInterval) -> "IntervalSchema":
        return cls(**z.to_json())


class ComplexInput(BaseModel):
    """A user supplied number; strings are read as exact rationals."""

    re: Union[str, float] = 0
    im: float = 0

    def to_value(self):
        if self.im:
            return complex(float(parse_rational(self.re)) if isinstance(self.re, str) else self.re, self.im)
        if isinstance(self.re, str):
            return parse_rational(self.re)
        return self.re


class LatticeInput(BaseModel):
    """Lattice given either by its Gram matrix or by a standard expression such as "A2+U"."""

    gram: Optional[list[list[int]]] = None
    expression: Optional[str] = None

    @model_validator(mode="after")
    def check_one_source(self):
        if (self.gram is None) == (self.expression is None):
            raise ValueError("give exactly one of 'gram' or 'expression'")
        return self

    @field_validator("gram")
    @classmethod
    def check_square(cls, value):
        if value is not None and (not value or any(len(row) != len(value) for row in value)):
            raise ValueError("Gram matrix must be a non-empty square matrix")
        return value

    def to_domain(self) -> GramMatrix:
        if self.expression is not None:
            return standard_lattice(self.expression)
        return GramMatrix.from_rows(self.gram)


class FqmSchema(BaseModel):
    divisors: list[int]
    q_mod1: list[str]
    gram_mod1: list[list[str]]

    model_config = {"from_attributes": True}

    @classmethod
    def from_domain(cls, a: Fqm) -> "FqmSchema":
        return cls(
            divisors=list(a.divisors),
            q_mod1=[format_rational(q) for q in a.q_values],
            gram_mod1=[[format_rational(b) for b in row] for row in a.gram],
        )

    def to_domain(self) -> Fqm:
        return Fqm(
            tuple(self.divisors),
            tuple(parse_rational(q) for q in self.q_mod1),
            tuple(tuple(parse_rational(b) for b in row) for row in self.gram_mod1),
        )


class ModuleSource(BaseModel):
    """A finite quadratic module, given directly or as the discriminant form of a lattice."""

    lattice: Optional[LatticeInput] = None
    fqm: Optional[FqmSchema] = None

    @model_validator(mode="after")
    def check_one_source(self):
        if (self.lattice is None) == (self.fqm is None):
            raise ValueError("give exactly one of 'lattice' or 'fqm'")
        return self

    def to_domain(self) -> Fqm:
        if self.fqm is not None:
            return self.fqm.to_domain()
        return discriminant_group(self.lattice.to_domain())
