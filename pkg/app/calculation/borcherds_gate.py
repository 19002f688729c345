"""
Lattice-side gates for the converse theorem and for reflective modular forms.

The converse theorem (every meromorphic modular form with Heegner divisor is a
Borcherds product) is proved for lattices with

    m even, 4 | m, m > max(6, 3 + r0), q = 2, A anisotropic, N odd and square-free,

and each hypothesis is reported separately. The reflective side works on
principal parts: a reflective form may only have poles c(mu, -1/c) q^{-1/c}
on the index sets A_{c,1/c}, with positive integral coefficients. Averaging a
principal part over O(A) keeps it reflective, so symmetrize() is the step
that reduces to O(A)-invariant forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from sympy import factorint

from app.calculation.exact_arithmetic import as_rational, mod1
from app.calculation.fqm import (
    Automorphism,
    Fqm,
    FqmElement,
    apply_automorphism,
    index_set,
    is_anisotropic,
    orthogonal_group,
    q_ranks,
)
from app.calculation.lattice_core import (
    GramMatrix,
    HyperbolicSplit,
    coset_vectors,
    discriminant_group,
    find_hyperbolic_split,
    lattice_profile,
)
from app.logger import get_logger
from app.utils.errors import PrincipalPartError, SizeLimitError

logger = get_logger(__name__)

CONVERSE_HYPOTHESES = (
    "m_even",
    "m_mod4",
    "m_bound",
    "type_p2",
    "anisotropic",
    "level_odd",
    "level_squarefree",
)


@dataclass
class HypothesisVerdict:
    passed: bool
    reason: str


@dataclass
class ConverseReport:
    verdicts: dict[str, HypothesisVerdict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())

    @property
    def failing(self) -> list[str]:
        return [name for name, v in self.verdicts.items() if not v.passed]


def _anisotropy_verdict(a: Fqm, scan_limit: int) -> HypothesisVerdict:
    try:
        anisotropic = is_anisotropic(a, scan_limit)
    except SizeLimitError as exc:
        return HypothesisVerdict(False, f"undecided: {exc}")
    if anisotropic:
        return HypothesisVerdict(True, f"no nonzero isotropic element among {a.order} elements")
    return HypothesisVerdict(False, "discriminant form has a nonzero isotropic element")


def _is_squarefree(n: int) -> bool:
    return all(k == 1 for k in factorint(n).values())


def check_converse(g: GramMatrix, scan_limit: int = 1_000_000) -> ConverseReport:
    profile = lattice_profile(g)
    m, r0, level = profile.rank, profile.witt_index, profile.level
    bound = max(6, 3 + r0)
    report = ConverseReport()
    report.verdicts["m_even"] = HypothesisVerdict(m % 2 == 0, f"m = {m}")
    report.verdicts["m_mod4"] = HypothesisVerdict(m % 4 == 0, f"m = {m} is {m % 4} mod 4")
    report.verdicts["m_bound"] = HypothesisVerdict(m > bound, f"m = {m}, needs m > max(6, 3 + r0) = {bound}")
    report.verdicts["type_p2"] = HypothesisVerdict(
        profile.negative == 2, f"signature type ({profile.positive}, {profile.negative})"
    )
    report.verdicts["anisotropic"] = _anisotropy_verdict(discriminant_group(g), scan_limit)
    report.verdicts["level_odd"] = HypothesisVerdict(level % 2 == 1, f"N = {level}")
    report.verdicts["level_squarefree"] = HypothesisVerdict(_is_squarefree(level), f"N = {level}")
    logger.debug("converse gate for rank %d: failing %s", m, report.failing)
    return report


@dataclass
class SingularWeightData:
    weight: Fraction
    c00: int

    @property
    def half_c00(self) -> Fraction:
        """c(0,0)/2, the multiplicity convention with the factor 1/2 in the product."""
        return Fraction(self.c00, 2)


def singular_weight_data(p: int) -> SingularWeightData:
    """Singular weight p/2 - 1 and c(0,0) = 2k = p - 2 for lattices of type (p, 2)."""
    if p < 3:
        raise ValueError("singular weight data needs p >= 3")
    return SingularWeightData(weight=Fraction(p, 2) - 1, c00=p - 2)


@dataclass(frozen=True)
class PrincipalPart:
    terms: tuple[tuple[FqmElement, Fraction, Fraction], ...]
    c00: Fraction = Fraction(0)

    @classmethod
    def from_mapping(cls, mapping: dict, c00=0) -> PrincipalPart:
        merged: dict[tuple[FqmElement, Fraction], Fraction] = {}
        for (mu, n), c in mapping.items():
            key = (tuple(mu), as_rational(n))
            merged[key] = merged.get(key, Fraction(0)) + as_rational(c)
        terms = tuple(sorted((mu, n, c) for (mu, n), c in merged.items() if c != 0))
        return cls(terms=terms, c00=as_rational(c00))

    def as_mapping(self) -> dict[tuple[FqmElement, Fraction], Fraction]:
        return {(mu, n): c for mu, n, c in self.terms}

    def coefficient(self, mu, n) -> Fraction:
        return self.as_mapping().get((tuple(mu), as_rational(n)), Fraction(0))

    def validate(self, a: Fqm, dual: bool = False) -> None:
        """
        Exponents must be negative with n = Q(mu) mod 1, or n = -Q(mu) mod 1 for
        the dual representation.
        """
        for mu, n, _ in self.terms:
            if a.element(mu) != tuple(mu):
                raise PrincipalPartError(f"{mu} is not a reduced element of the module")
            if n >= 0:
                raise PrincipalPartError(f"principal part exponent {n} is not negative")
            expected = mod1(-a.q(mu)) if dual else a.q(mu)
            if mod1(n) != expected:
                raise PrincipalPartError(f"exponent {n} is not congruent to {expected} for {list(mu)}")


@dataclass
class ReflectiveVerdict:
    passed: bool
    reasons: list[str] = field(default_factory=list)


def check_reflective_principal_part(a: Fqm, pp: PrincipalPart, relaxed: bool = False) -> ReflectiveVerdict:
    """
    Poles only at (mu, -1/c) with mu in A_{c,1/c}, c = ord(mu), and
    coefficients positive integers (positive rationals when relaxed).

    The principal part is read in the dual convention n = -Q(mu) mod 1, the
    one in which the pole q^{-1/c} lives on A_{c,1/c}.
    """
    pp.validate(a, dual=True)
    verdict = ReflectiveVerdict(passed=True)
    for mu, n, c in pp.terms:
        order = a.order_of(mu)
        if mu not in index_set(a, order, Fraction(1, order)):
            verdict.reasons.append(f"{list(mu)}: Q = {a.q(mu)} is not 1/{order} for an element of order {order}")
        if n != Fraction(-1, order):
            verdict.reasons.append(f"{list(mu)}: pole order {n} is not -1/{order}")
        if c <= 0:
            verdict.reasons.append(f"{list(mu)}: coefficient {c} is not positive")
        elif not relaxed and c.denominator != 1:
            verdict.reasons.append(f"{list(mu)}: coefficient {c} is not an integer")
    verdict.passed = not verdict.reasons
    return verdict


def apply_automorphism_to_principal_part(a: Fqm, sigma: Automorphism, pp: PrincipalPart) -> PrincipalPart:
    """sigma(f): the coefficient at (sigma(mu), n) is the old one at (mu, n)."""
    mapping = {(apply_automorphism(a, sigma, mu), n): c for mu, n, c in pp.terms}
    return PrincipalPart.from_mapping(mapping, pp.c00)


def symmetrize(a: Fqm, pp: PrincipalPart, group_limit: int = 10_000) -> PrincipalPart:
    """Average of sigma(f) over O(A)."""
    group = orthogonal_group(a, group_limit)
    size = len(group)
    averaged: dict[tuple[FqmElement, Fraction], Fraction] = {}
    for mu, n, c in pp.terms:
        for sigma in group:
            key = (apply_automorphism(a, sigma, mu), n)
            averaged[key] = averaged.get(key, Fraction(0)) + c / size
    return PrincipalPart.from_mapping(averaged, pp.c00)


def heegner_multiplicity(g: GramMatrix, mu: FqmElement, n, bound: int = 10) -> int:
    """Number of lambda in mu + L with Q(lambda) = n."""
    n = as_rational(n)
    if n <= 0:
        raise ValueError("Heegner multiplicities need a positive norm")
    return len(coset_vectors(g, mu, n, bound))


@dataclass
class InjectivityReport:
    verdicts: dict[str, HypothesisVerdict] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts.values())


def check_injectivity_hypotheses(g: GramMatrix, l: int, scan_limit: int = 1_000_000) -> InjectivityReport:
    """Hypotheses under which the theta lift of weight kappa = m/2 + l is injective."""
    profile = lattice_profile(g)
    m, r0 = profile.rank, profile.witt_index
    bound = max(6, 2 * l - 2, 3 + r0)
    report = InjectivityReport()
    report.verdicts["m_bound"] = HypothesisVerdict(m > bound, f"m = {m}, needs m > {bound}")
    kappa = Fraction(m, 2) + l
    report.verdicts["kappa_even"] = HypothesisVerdict(
        kappa.denominator == 1 and int(kappa) % 2 == 0, f"kappa = {kappa}"
    )
    report.verdicts["q_plus_l_even"] = HypothesisVerdict(
        (profile.negative + l) % 2 == 0, f"q + l = {profile.negative + l}"
    )
    report.verdicts["anisotropic"] = _anisotropy_verdict(discriminant_group(g), scan_limit)
    report.verdicts["nonvanishing_regime"] = HypothesisVerdict(
        Fraction(m, 2) > l + 3, f"m/2 = {Fraction(m, 2)}, needs > {l + 3}"
    )
    return report


@dataclass
class SingularWeightSetting:
    converse: ConverseReport
    q_ranks_bounded: HypothesisVerdict
    split: Optional[HyperbolicSplit]
    weight_data: Optional[SingularWeightData]

    @property
    def passed(self) -> bool:
        return self.converse.passed and self.q_ranks_bounded.passed


def check_singular_weight_setting(g: GramMatrix, search_bound: int = 10, scan_limit: int = 1_000_000) -> SingularWeightSetting:
    """
    Lattice-side conditions for reflective forms of singular weight on type (p, 2):
    the converse gate, every q-rank at most p + 1, and an explicit splitting
    L = K + U as witness for the Witt index.
    """
    profile = lattice_profile(g)
    p = profile.positive
    ranks = q_ranks(discriminant_group(g))
    too_big = {q: r for q, r in ranks.items() if r > p + 1}
    bounded = HypothesisVerdict(
        not too_big,
        f"q-ranks {ranks} exceed p + 1 = {p + 1}" if too_big else f"q-ranks {ranks} at most p + 1 = {p + 1}",
    )
    return SingularWeightSetting(
        converse=check_converse(g, scan_limit),
        q_ranks_bounded=bounded,
        split=find_hyperbolic_split(g, search_bound),
        weight_data=singular_weight_data(p) if p >= 3 and profile.negative == 2 else None,
    )


def index_set_sizes(a: Fqm) -> dict[int, int]:
    """|A_{c,1/c}| for every divisor c > 1 of the exponent of A."""
    exponent = math.lcm(1, *a.divisors)
    return {
        c: len(index_set(a, c, Fraction(1, c)))
        for c in range(2, exponent + 1)
        if exponent % c == 0
    }
