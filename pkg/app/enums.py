from enum import Enum


class JordanTag(str, Enum):
    A = "A"
    B = "B"
    C = "C"


class TermVerdict(str, Enum):
    nonzero_certified = "nonzero-certified"
    zero_certified = "zero-certified"
    borderline = "borderline"


class FactorSource(str, Enum):
    computed = "computed"
    supplied = "supplied"


class ChiConvention(str, Enum):
    jacobi = "jacobi"
    trivial = "trivial"
    table = "table"
