"""
Vector-valued Siegel theta functions of even lattices.

For a positive definite lattice the coset theta series are

    theta_mu(tau) = sum over lambda in mu + L of e(Q(lambda) tau),

and Theta = sum theta_mu e_mu transforms with the Weil representation:
Theta(tau + 1) = rho(T) Theta(tau) and Theta(-1/tau) = tau^{m/2} rho(S) Theta(tau).

Coefficients are exact counts. The numerical check evaluates truncated series
with interval arithmetic and adds a certified bound for the omitted terms:
the points of a coset with Q <= X are at mutual distance at least
sqrt(2 q_min) in the lattice metric, so a packing argument bounds their number
by (1 + 2 sqrt(X / q_min))^m.

For indefinite lattices the coefficients are indexed by the pair
(Q(lambda_{z perp}), Q(lambda_z)) for a negative definite subspace z, and the
enumeration is complete for the majorant Q(lambda_{z perp}) - Q(lambda_z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mpmath import iv

from app.calculation.exact_arithmetic import ComplexInterval, embed_complex, interval_precision
from app.calculation.fqm import FqmElement
from app.calculation.lattice_core import (
    ExactForm,
    GramMatrix,
    coset_representative,
    discriminant_group,
    minimum_norm,
    short_vectors,
)
from app.calculation.quadratic_space import diagonalize
from app.calculation.weil_rep import build_weil_matrices
from app.logger import get_logger
from app.utils.errors import InsufficientTruncationError, ThetaRequestError, UnsupportedSignatureError
from app.utils.integer_matrix import mat_mul, rational_inverse, transpose

logger = get_logger(__name__)

MAX_TRUNCATION = 200


@dataclass
class ThetaBlock:
    rank: int
    n_max: Fraction
    cosets: tuple[FqmElement, ...]
    coefficients: dict[FqmElement, dict] = field(default_factory=dict)
    indefinite: bool = False

    def coefficient(self, mu: FqmElement, n) -> int:
        return self.coefficients.get(tuple(mu), {}).get(n, 0)


def _definite_coefficients(g: GramMatrix, n_max: Fraction) -> ThetaBlock:
    disc = discriminant_group(g)
    block = ThetaBlock(rank=g.rank, n_max=n_max, cosets=disc.element_list)
    for mu in disc.elements():
        shift = coset_representative(g, mu)
        exact = ExactForm(g.entries, shift)
        counts: dict[Fraction, int] = {}
        for x in short_vectors(g.entries, shift, n_max):
            value = exact.value(x)
            if value <= n_max:
                counts[value] = counts.get(value, 0) + 1
        block.coefficients[mu] = dict(sorted(counts.items()))
    return block


def _negative_projection(g: GramMatrix, z_basis) -> list[list[Fraction]]:
    """Matrix P with Q(lambda_z) = lambda^T P lambda / 2."""
    basis = [[Fraction(x) for x in row] for row in z_basis]
    gb = mat_mul(g.entries, transpose(basis))
    inner = mat_mul(basis, gb)
    try:
        inner_inverse = rational_inverse(inner)
    except ValueError as exc:
        raise ThetaRequestError("z basis is degenerate") from exc
    return mat_mul(mat_mul(gb, inner_inverse), transpose(gb))


def _indefinite_coefficients(g: GramMatrix, n_max: Fraction, z_basis) -> ThetaBlock:
    negative = g.signature_pair[1]
    if len(z_basis) != negative:
        raise ThetaRequestError(f"z basis must span a {negative}-dimensional negative definite subspace")
    projection = _negative_projection(g, z_basis)
    majorant = [[g.entries[i][j] - 2 * projection[i][j] for j in range(g.rank)] for i in range(g.rank)]
    if not all(a > 0 for a in diagonalize(majorant)):
        raise ThetaRequestError("z basis does not span a negative definite subspace")

    disc = discriminant_group(g)
    block = ThetaBlock(rank=g.rank, n_max=n_max, cosets=disc.element_list, indefinite=True)
    for mu in disc.elements():
        shift = coset_representative(g, mu)
        exact = ExactForm(g.entries, shift)
        exact_z = ExactForm(projection, shift)
        counts: dict[tuple[Fraction, Fraction], int] = {}
        for x in short_vectors(majorant, shift, n_max):
            q_total, q_z = exact.value(x), exact_z.value(x)
            if q_total - 2 * q_z <= n_max:
                key = (q_total - q_z, q_z)
                counts[key] = counts.get(key, 0) + 1
        block.coefficients[mu] = dict(sorted(counts.items()))
    return block


def theta_coefficients(g: GramMatrix, n_max, z_basis=None) -> ThetaBlock:
    """
    Exact theta coefficients up to n_max.

    Definite lattices give counts c(mu, n) for n <= n_max; negative definite
    lattices are handled through -G. Indefinite lattices need ``z_basis``, the
    rows of a rational basis of a maximal negative definite subspace.
    """
    n_max = Fraction(n_max)
    if g.is_positive_definite:
        return _definite_coefficients(g, n_max)
    if g.is_negative_definite:
        return _definite_coefficients(g.negated(), n_max)
    if z_basis is None:
        raise ThetaRequestError("indefinite lattices need a negative definite subspace z")
    return _indefinite_coefficients(g, n_max, z_basis)


def truncation_tail_bound(rank: int, q_min: Fraction, v: float, n_max: int) -> float:
    """Upper bound for the sum of exp(-2 pi v Q) over coset points with Q > n_max."""
    q_min = float(q_min)
    total, k = 0.0, 0
    while True:
        count = (1.0 + 2.0 * math.sqrt((n_max + k + 1) / q_min)) ** rank
        term = count * math.exp(-2.0 * math.pi * v * (n_max + k))
        total += term
        k += 1
        next_count = (1.0 + 2.0 * math.sqrt((n_max + k + 1) / q_min)) ** rank
        ratio = (next_count / count) * math.exp(-2.0 * math.pi * v)
        if ratio < 0.5 and term < 1e-30 * max(total, 1e-300):
            return (total + term * ratio / (1.0 - ratio)) * (1.0 + 1e-9)
        if k > 10_000:
            return math.inf


def required_truncation(rank: int, q_min: Fraction, v: float, tolerance: float) -> int:
    for n in range(MAX_TRUNCATION + 1):
        if truncation_tail_bound(rank, q_min, v, n) < tolerance:
            return n
    raise InsufficientTruncationError(MAX_TRUNCATION + 1, "tolerance unreachable within the truncation cap")


def _theta_values(block: ThetaBlock, tau_real, tau_imag) -> list[ComplexInterval]:
    values = []
    for mu in block.cosets:
        real, imag = iv.mpf(0), iv.mpf(0)
        for n, count in block.coefficients[mu].items():
            n_iv = iv.mpf(n.numerator) / n.denominator
            modulus = iv.exp(-2 * iv.pi * n_iv * tau_imag)
            angle = 2 * iv.pi * n_iv * tau_real
            real += count * modulus * iv.cos(angle)
            imag += count * modulus * iv.sin(angle)
        values.append(ComplexInterval(real, imag))
    return values


@dataclass
class ModularitySample:
    tau: complex
    t_residual: float
    s_residual: float


@dataclass
class ModularityReport:
    n_max: int
    tolerance: float
    samples: list[ModularitySample] = field(default_factory=list)

    @property
    def max_residual(self) -> float:
        return max((max(s.t_residual, s.s_residual) for s in self.samples), default=0.0)


def verify_theta_modularity(
    g: GramMatrix,
    tau_samples: list[complex],
    precision_bits: int = 128,
    n_max: Optional[int] = None,
    tolerance: float = 1e-10,
) -> ModularityReport:
    """
    Check Theta(tau+1) = rho(T) Theta(tau) and Theta(-1/tau) = tau^{m/2} rho(S) Theta(tau).

    The residuals are certified upper bounds: interval widths plus the tail
    bound of the truncated series. Truncations of Theta(tau+1) and
    rho(T) Theta(tau) agree term by term, so the T residual carries no tail.
    """
    if not g.is_positive_definite:
        raise ThetaRequestError("modularity check needs a positive definite lattice")
    if g.rank % 2:
        raise UnsupportedSignatureError("odd rank needs the metaplectic double cover")
    weight = g.rank // 2
    disc = discriminant_group(g)
    weil = build_weil_matrices(disc, g.rank % 8)
    q_min = minimum_norm(g)

    imag_parts = []
    for tau in tau_samples:
        tau = complex(tau)
        if tau.imag <= 0:
            raise ThetaRequestError("tau must lie in the upper half plane")
        imag_parts.append(min(tau.imag, tau.imag / abs(tau) ** 2))
    needed = max(required_truncation(g.rank, q_min, v, tolerance) for v in imag_parts)
    if n_max is None:
        n_max = needed
    elif n_max < needed:
        raise InsufficientTruncationError(needed)

    block = theta_coefficients(g, n_max)
    logger.debug("theta check with n_max=%d for rank %d", n_max, g.rank)
    report = ModularityReport(n_max=n_max, tolerance=tolerance)
    size = disc.order
    with interval_precision(precision_bits):
        rho_t = [embed_complex(x, precision_bits) for x in weil.rho_T]
        rho_s = [[embed_complex(x, precision_bits) for x in row] for row in weil.rho_S]
        for tau in tau_samples:
            tau = complex(tau)
            u, v = iv.mpf(tau.real), iv.mpf(tau.imag)
            norm = u * u + v * v
            s_real, s_imag = -u / norm, v / norm

            theta = _theta_values(block, u, v)
            shifted = _theta_values(block, u + 1, v)
            inverted = _theta_values(block, s_real, s_imag)

            t_residual = max(
                ((shifted[i] - rho_t[i] * theta[i]).abs_upper() for i in range(size)), default=0.0
            )

            tau_iv = ComplexInterval(u, v)
            factor = ComplexInterval.from_number(1)
            for _ in range(weight):
                factor = factor * tau_iv
            s_numeric = 0.0
            for i in range(size):
                combined = ComplexInterval.from_number(0)
                for j in range(size):
                    combined = combined + rho_s[i][j] * theta[j]
                s_numeric = max(s_numeric, (inverted[i] - factor * combined).abs_upper())

            v_inverted = tau.imag / abs(tau) ** 2
            tail = truncation_tail_bound(g.rank, q_min, v_inverted, n_max)
            tail += abs(tau) ** weight * math.sqrt(size) * truncation_tail_bound(g.rank, q_min, tau.imag, n_max)
            report.samples.append(ModularitySample(tau=tau, t_residual=t_residual, s_residual=s_numeric + tail))
    return report


def coefficient_rows(block: ThetaBlock) -> list[dict]:
    """Flat rows for CSV/JSON export."""
    rows = []
    for mu in block.cosets:
        for key, count in block.coefficients[mu].items():
            if block.indefinite:
                rows.append({"coset": list(mu), "n_plus": str(key[0]), "n_minus": str(key[1]), "count": count})
            else:
                rows.append({"coset": list(mu), "n": str(key), "count": count})
    return rows
