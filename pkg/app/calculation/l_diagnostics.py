"""
Local factors of the standard L-function and the L^2-norm assembly.

All quantities here are finite arithmetic around the Hecke-theoretic formulas
for vector-valued forms of weight kappa = m/2 + l:

- chi_F(p^2) for the character of the p-part, |A_p| e(-sig(A_p)/4) (p / |A_p perp|),
  and the local non-vanishing terms 1 + chi_F(p^2) p^{m/2+3l-5};
- translation of classical Hecke eigenvalues at p^{2k}, p^{2l} into the
  vector-valued normalization;
- the Dirichlet local factors (1 - chi(p) p^{-s})^{-1}, the bad-prime factors
  K(A_p, m, l) and the archimedean constant K(kappa, s);
- the product of all factors in the L^2-norm identity, with every factor the
  caller does not supply computed here and labelled as computed.

Exact values are CycloNum or Fraction; anything involving square roots or real
powers is a ComplexInterval at the requested precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

import mpmath
from mpmath import iv
from sympy import primefactors

from app.calculation.exact_arithmetic import (
    ComplexInterval,
    CycloNum,
    embed_complex,
    interval_precision,
    real_sqrt,
    root_of_unity,
)
from app.calculation.fqm import (
    Fqm,
    gauss_sum,
    jacobi_character,
    milgram_signature,
    p_primary_decomposition,
    quadratic_character,
    require_prime,
)
from app.enums import FactorSource, TermVerdict
from app.logger import get_logger
from app.utils.errors import (
    CharacterError,
    HypothesisError,
    InconclusiveError,
    MissingInputError,
    PoleError,
)

logger = get_logger(__name__)

ExactValue = Union[CycloNum, Fraction, int]


def _component(a: Fqm, p: int) -> Optional[Fqm]:
    return p_primary_decomposition(a).get(p)


def chi_F_at_pp(a: Fqm, p: int) -> CycloNum:
    """chi_F(p^2) = |A_p| e(-sig(A_p)/4) (p / |A_p perp|) as an exact cyclotomic number."""
    require_prime(p)
    a_p = _component(a, p)
    if a_p is None:
        return CycloNum.rational(jacobi_character(a.order, p))
    complement = a.order // a_p.order
    sign = jacobi_character(complement, p)
    return root_of_unity(Fraction(-milgram_signature(a_p), 4)) * (a_p.order * sign)


@dataclass
class NonvanishingTerm:
    prime: int
    chi: CycloNum
    exponent: int
    term: CycloNum
    interval: Optional[ComplexInterval]
    verdict: TermVerdict


@dataclass
class NonvanishingReport:
    m: int
    l: int
    theorem_regime: bool
    terms: list[NonvanishingTerm] = field(default_factory=list)

    @property
    def all_nonzero(self) -> bool:
        return all(t.verdict is TermVerdict.nonzero_certified for t in self.terms)


def nonvanishing_report(a: Fqm, m: int, l: int, primes: list[int], precision_bits: int = 128) -> NonvanishingReport:
    """
    Local terms 1 + chi_F(p^2) p^{m/2+3l-5}.

    Exact zero is detected symbolically; otherwise the 128-bit (or requested)
    enclosure decides whether the term is certified nonzero.
    """
    if m % 2:
        raise ValueError("m must be even")
    exponent = m // 2 + 3 * l - 5
    report = NonvanishingReport(m=m, l=l, theorem_regime=Fraction(m, 2) > l + 3)
    for p in primes:
        chi = chi_F_at_pp(a, p)
        term = chi * Fraction(p) ** exponent + 1
        if term.is_zero():
            report.terms.append(NonvanishingTerm(p, chi, exponent, term, None, TermVerdict.zero_certified))
            continue
        enclosure = embed_complex(term, precision_bits)
        verdict = TermVerdict.nonzero_certified if enclosure.excludes_zero() else TermVerdict.borderline
        report.terms.append(NonvanishingTerm(p, chi, exponent, term, enclosure, verdict))
    logger.debug("nonvanishing m=%d l=%d: %s", m, l, [t.verdict.value for t in report.terms])
    return report


def eigenvalue_translate(a: Fqm, p: int, k: int, l: int, kappa: int, lambda_classical: ExactValue) -> CycloNum:
    """
    Vector-valued Hecke eigenvalue at (p^{2k}, p^{2l}) from the classical one.

    (k, l) must lie in Lambda_+ = {0 <= k <= l, k + l even}.
    """
    require_prime(p)
    if not (0 <= k <= l and (k + l) % 2 == 0):
        raise ValueError(f"({k}, {l}) is not in Lambda_+")
    factor = Fraction(p) ** ((k - l) // 2 * (kappa - 2))
    value = lambda_classical if isinstance(lambda_classical, CycloNum) else CycloNum.rational(lambda_classical)
    a_p = _component(a, p)
    if a_p is None:
        return value * factor
    gauss_pk = gauss_sum(a_p, p**k)
    gauss_inverse = gauss_sum(a_p).conjugate() / a_p.order
    complement = a.order // a_p.order
    chi = jacobi_character(complement, p**k)
    return gauss_pk * gauss_inverse * value * (factor * chi)


def dirichlet_local_factor(p: int, s, chi_value: int, precision_bits: int = 128):
    """
    (1 - chi(p) p^{-s})^{-1}.

    Integral s gives an exact Fraction; other rational s give an interval.
    """
    require_prime(p)
    if chi_value not in (-1, 0, 1):
        raise CharacterError("character values must be -1, 0 or 1")
    s = Fraction(s)
    if chi_value == 0:
        return Fraction(1)
    if s.denominator == 1:
        inner = chi_value * Fraction(p) ** (-int(s))
        if inner == 1:
            raise PoleError(f"local factor has a pole at p={p}, s={s}")
        return 1 / (1 - inner)
    with interval_precision(precision_bits):
        power = iv.mpf(p) ** (-(iv.mpf(s.numerator) / s.denominator))
        value = 1 / (1 - chi_value * power)
        return ComplexInterval(value, iv.mpf(0))


def _as_interval(value) -> ComplexInterval:
    if isinstance(value, ComplexInterval):
        return value
    return ComplexInterval.from_number(Fraction(value))


def K_Ap_factor(a_p: Fqm, m: int, l: int, precision_bits: int = 128, complement_order: int = 1,
                max_precision_bits: int = 1024) -> ComplexInterval:
    """
    K(A_p, m, l) = ((e(sig/8)/sqrt|A_p| - 1) + L_p(m/2 - l + 2, chi_{A_p perp}))^{-1}.

    The precision is doubled until the denominator is certified nonzero.
    """
    if a_p.is_trivial():
        return ComplexInterval.from_number(Fraction(1))
    if not Fraction(m, 2) > l - 1:
        raise HypothesisError("K(A_p, m, l) needs m/2 > l - 1")
    primes = {q for d in a_p.divisors for q in primefactors(d)}
    if len(primes) != 1:
        raise ValueError("K(A_p, m, l) needs a p-group")
    (p,) = primes
    chi = jacobi_character(complement_order, p)
    sig = milgram_signature(a_p)
    s = Fraction(m, 2) - l + 2
    bits = precision_bits
    while bits <= max_precision_bits:
        with interval_precision(bits):
            phase = embed_complex(root_of_unity(Fraction(sig, 8)), bits).scale(1 / real_sqrt(a_p.order))
            local = _as_interval(dirichlet_local_factor(p, s, chi, bits))
            denominator = phase - 1 + local
            if denominator.excludes_zero():
                return ComplexInterval.from_number(1) / denominator
        logger.debug("K(A_p) denominator undecided at %d bits", bits)
        bits *= 2
    raise InconclusiveError("K(A_p, m, l) denominator could not be separated from zero")


@dataclass
class ArchimedeanConstant:
    rational_part: Fraction
    phase_eighths: int
    disc_order: int
    interval: ComplexInterval


def K_archimedean(kappa: int, s, a: Fqm, precision_bits: int = 128) -> ArchimedeanConstant:
    """
    K(kappa, s) = (-1)^{s+kappa/2} 2^{3-2s-kappa} Gamma(kappa+s-1)/Gamma(kappa+s) e(sig/8)/sqrt|A|.

    The Gamma ratio is 1/(kappa+s-1). The symbolic triple is
    (rational part, sig mod 8, |A|) with value rational * e(sig/8) / sqrt|A|.
    """
    if kappa % 2:
        raise ValueError("kappa must be even")
    s = Fraction(s)
    if kappa + s - 1 <= 0:
        raise HypothesisError("Gamma(kappa + s - 1) has a pole")
    if (s + Fraction(kappa, 2)).denominator != 1:
        raise HypothesisError("s + kappa/2 must be an integer")
    sign = -1 if int(s + Fraction(kappa, 2)) % 2 else 1
    two_power = 3 - 2 * s - kappa
    rational = sign * Fraction(2) ** int(two_power) / (kappa + s - 1)
    sig = milgram_signature(a)
    with interval_precision(precision_bits):
        phase = embed_complex(root_of_unity(Fraction(sig, 8)), precision_bits).scale(1 / real_sqrt(a.order))
        interval = phase * ComplexInterval.from_number(rational)
    return ArchimedeanConstant(rational, sig, a.order, interval)


def dirichlet_l_value(chi: Callable[[int], int], period: int, s, precision_bits: int = 128) -> ComplexInterval:
    """L(s, chi) for a character of the given period, via mpmath.dirichlet."""
    s = Fraction(s)
    if s <= 1:
        raise HypothesisError("L-values are only evaluated for s > 1")
    table = [chi(n) for n in range(period)]
    saved = mpmath.mp.prec
    mpmath.mp.prec = precision_bits + 20
    try:
        value = mpmath.dirichlet(mpmath.mpf(s.numerator) / s.denominator, table)
    finally:
        mpmath.mp.prec = saved
    with interval_precision(precision_bits):
        slack = iv.mpf(2) ** (-(precision_bits - 10))
        centre = iv.mpf(value)
        return ComplexInterval(centre + iv.mpf([-1, 1]) * slack * (1 + abs(centre)), iv.mpf(0))


@dataclass
class AssemblyFactor:
    name: str
    source: FactorSource
    value: ComplexInterval


@dataclass
class AssemblyReport:
    value: ComplexInterval
    factors: list[AssemblyFactor] = field(default_factory=list)


def l2_norm_assembly(
    a: Fqm,
    m: int,
    l: int,
    L_value=None,
    vol=None,
    c_s0=None,
    dirichlet_value=None,
    chi_a: Optional[Callable[[int], int]] = None,
    chi_period: Optional[int] = None,
    precision_bits: int = 128,
) -> AssemblyReport:
    """
    ||Lambda f||^2 / ||f||^2 = vol * C(s0) K(kappa, -l/2) L(m/2-l+2, chi_A)^{-1}
                               * prod_{p | |A|} K(A_p, m, l) * L(-m/4-3l/2+3, f).

    L_value, vol and c_s0 must be supplied. The Dirichlet value defaults to
    the computed L(m/2-l+2, chi_A) with chi_A the Jacobi character of |A|;
    an injected chi_a is read with period chi_period (default |A|).
    """
    missing = [name for name, value in (("L_value", L_value), ("vol", vol), ("c_s0", c_s0)) if value is None]
    if missing:
        raise MissingInputError(missing)
    if m % 2:
        raise ValueError("m must be even")
    kappa = m // 2 + l
    factors: list[AssemblyFactor] = []

    def supplied(name, value):
        interval = value if isinstance(value, ComplexInterval) else ComplexInterval.from_number(value)
        factors.append(AssemblyFactor(name, FactorSource.supplied, interval))
        return interval

    with interval_precision(precision_bits):
        total = supplied("vol", vol) * supplied("c_s0", c_s0)
        archimedean = K_archimedean(kappa, Fraction(-l, 2), a, precision_bits)
        factors.append(AssemblyFactor("K_archimedean", FactorSource.computed, archimedean.interval))
        total = total * archimedean.interval

        if dirichlet_value is None:
            chi = chi_a or quadratic_character(a)
            dirichlet = dirichlet_l_value(chi, chi_period or a.order, Fraction(m, 2) - l + 2, precision_bits)
            factors.append(AssemblyFactor("dirichlet_L", FactorSource.computed, dirichlet))
        else:
            dirichlet = supplied("dirichlet_L", dirichlet_value)
        total = total / dirichlet

        for p, a_p in p_primary_decomposition(a).items():
            factor = K_Ap_factor(a_p, m, l, precision_bits, complement_order=a.order // a_p.order)
            factors.append(AssemblyFactor(f"K_A_{p}", FactorSource.computed, factor))
            total = total * factor

        total = total * supplied("L_value", L_value)
    return AssemblyReport(value=total, factors=factors)
