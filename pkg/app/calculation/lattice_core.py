"""
Even lattice invariants.

An even lattice is given by its Gram matrix G with respect to a Z-basis, so
(x, y) = x^T G y and Q(x) = (x, x) / 2. This module computes the signature,
level, determinant and discriminant group of such a lattice, its rational Witt
index, searches for an explicit splitting L = K + U, and enumerates vectors of
cosets of L in the dual lattice L'.

The discriminant group is read off the Smith normal form U G V = D: the
columns of V divided by the elementary divisors d_i > 1 are generators of
L'/L, and the rows of U G reduce any vector of L' to its coordinates.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Optional

from app.calculation.exact_arithmetic import mod1
from app.calculation.fqm import Fqm, FqmElement
from app.calculation.quadratic_space import diagonalize, rational_witt_index
from app.logger import get_logger
from app.utils.errors import DegenerateLatticeError, InvalidLatticeError, ThetaRequestError
from app.utils.integer_matrix import (
    bezout_vector,
    content,
    determinant,
    integer_kernel,
    mat_mul,
    mat_vec,
    rational_inverse,
    smith_normal_form,
    transpose,
)

logger = get_logger(__name__)

Vector = tuple[Fraction, ...]


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        m = len(rows)
        if m == 0 or any(len(row) != m for row in rows):
            raise InvalidLatticeError("Gram matrix must be a non-empty square matrix")
        if any(rows[i][j] != rows[j][i] for i in range(m) for j in range(m)):
            raise InvalidLatticeError("Gram matrix must be symmetric")
        if any(rows[i][i] % 2 for i in range(m)):
            raise InvalidLatticeError("Gram matrix must have even diagonal")
        if determinant(rows) == 0:
            raise DegenerateLatticeError("Gram matrix is degenerate (determinant 0)")

    @classmethod
    def from_rows(cls, rows) -> GramMatrix:
        return cls(tuple(tuple(row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.entries)

    @cached_property
    def det(self) -> int:
        return determinant(self.entries)

    @cached_property
    def inverse(self) -> list[list[Fraction]]:
        return rational_inverse(self.entries)

    @cached_property
    def signature_pair(self) -> tuple[int, int]:
        diagonal = diagonalize(self.entries)
        return sum(1 for a in diagonal if a > 0), sum(1 for a in diagonal if a < 0)

    @property
    def is_positive_definite(self) -> bool:
        return self.signature_pair[1] == 0

    @property
    def is_negative_definite(self) -> bool:
        return self.signature_pair[0] == 0

    def bilinear(self, x, y) -> Fraction:
        return sum((Fraction(a) * b for a, b in zip(x, mat_vec(self.entries, y))), Fraction(0))

    def norm(self, x) -> Fraction:
        """Q(x) = (x, x) / 2."""
        return self.bilinear(x, x) / 2

    def negated(self) -> GramMatrix:
        return GramMatrix(tuple(tuple(-a for a in row) for row in self.entries))

    def __repr__(self):
        return f"GramMatrix({[list(row) for row in self.entries]})"


def direct_sum(*grams: GramMatrix) -> GramMatrix:
    size = sum(g.rank for g in grams)
    rows = [[0] * size for _ in range(size)]
    offset = 0
    for g in grams:
        for i, row in enumerate(g.entries):
            rows[offset + i][offset:offset + g.rank] = row
        offset += g.rank
    return GramMatrix.from_rows(rows)


def _cartan(size: int, edges) -> list[list[int]]:
    rows = [[2 if i == j else 0 for j in range(size)] for i in range(size)]
    for i, j in edges:
        rows[i][j] = rows[j][i] = -1
    return rows


_E_EDGES = {
    6: [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)],
    7: [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 3)],
    8: [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)],
}


def _root_lattice(kind: str, n: int) -> GramMatrix:
    if kind == "A":
        return GramMatrix.from_rows(_cartan(n, [(i, i + 1) for i in range(n - 1)]))
    if kind == "D":
        if n < 4:
            raise InvalidLatticeError("D_n needs n >= 4")
        edges = [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
        return GramMatrix.from_rows(_cartan(n, edges))
    if n not in _E_EDGES:
        raise InvalidLatticeError("E_n needs n in 6, 7, 8")
    return GramMatrix.from_rows(_cartan(n, _E_EDGES[n]))


def _standard_summand(token: str) -> GramMatrix:
    token = token.strip()
    if token == "U":
        return GramMatrix.from_rows([[0, 1], [1, 0]])
    if match := re.fullmatch(r"U\((-?\d+)\)", token):
        n = int(match.group(1))
        return GramMatrix.from_rows([[0, n], [n, 0]])
    # root lattices, optionally negated and rescaled: -A2, D4(3)
    if match := re.fullmatch(r"(-?)([ADE])(\d+)(?:\(([1-9]\d*)\))?", token):
        sign, kind, n, scale = match.groups()
        factor = int(scale or 1) * (-1 if sign else 1)
        g = _root_lattice(kind, int(n))
        return GramMatrix.from_rows([[factor * x for x in row] for row in g.entries])
    if match := re.fullmatch(r"diag\(([-\d,\s]+)\)", token):
        values = [int(v) for v in match.group(1).split(",")]
        return GramMatrix.from_rows([[v if i == j else 0 for j in range(len(values))]
                                     for i, v in enumerate(values)])
    raise InvalidLatticeError(f"unknown lattice summand {token!r}")


def standard_lattice(expr: str) -> GramMatrix:
    """Parse expressions such as ``"A2+A2+U+U"``, ``"E8+U(3)"`` or ``"diag(2,-2)"``."""
    parts = re.split(r"\+(?![^(]*\))", expr)
    return direct_sum(*(_standard_summand(part) for part in parts))


@dataclass(frozen=True)
class LatticeProfile:
    rank: int
    positive: int
    negative: int
    det: int
    level: int
    witt_index: int
    disc_order: int

    @property
    def signature(self) -> int:
        return self.positive - self.negative


def lattice_level(g: GramMatrix) -> int:
    inverse = g.inverse
    m = g.rank
    denominators = [(inverse[i][i] / 2).denominator for i in range(m)]
    denominators += [inverse[i][j].denominator for i in range(m) for j in range(m) if i != j]
    return math.lcm(*denominators)


def lattice_profile(g: GramMatrix) -> LatticeProfile:
    positive, negative = g.signature_pair
    return LatticeProfile(
        rank=g.rank,
        positive=positive,
        negative=negative,
        det=g.det,
        level=lattice_level(g),
        witt_index=witt_index(g),
        disc_order=abs(g.det),
    )


@lru_cache(maxsize=256)
def discriminant_group(g: GramMatrix) -> Fqm:
    diagonal, left, right = smith_normal_form(g.entries)
    reduction_rows = mat_mul(left, g.entries)
    generators, divisors, reduction = [], [], []
    for i, d in enumerate(diagonal):
        if d > 1:
            generators.append(tuple(Fraction(right[r][i], d) for r in range(g.rank)))
            divisors.append(d)
            reduction.append(tuple(reduction_rows[i]))
    q_values = tuple(mod1(g.norm(v)) for v in generators)
    gram = tuple(tuple(mod1(g.bilinear(u, v)) for v in generators) for u in generators)
    return Fqm(
        divisors=tuple(divisors),
        q_values=q_values,
        gram=gram,
        generators=tuple(generators),
        reduction=tuple(reduction),
    )


def coset_representative(g: GramMatrix, mu: FqmElement) -> Vector:
    """A vector of L' in the coset mu, using the canonical generators."""
    disc = discriminant_group(g)
    mu = disc.element(mu)
    vector = [Fraction(0)] * g.rank
    for c, generator in zip(mu, disc.generators):
        for i, x in enumerate(generator):
            vector[i] += c * x
    return tuple(vector)


def coset_of(g: GramMatrix, vector) -> FqmElement:
    """Coordinates in L'/L of a vector of L'."""
    disc = discriminant_group(g)
    return disc.element_of_vector(vector)


def witt_index(g: GramMatrix) -> int:
    return rational_witt_index(g.entries)


def is_isotropic_space(g: GramMatrix) -> bool:
    return witt_index(g) > 0


@dataclass(frozen=True)
class HyperbolicSplit:
    z: tuple[int, ...]
    z_prime: tuple[int, ...]
    complement: Optional[GramMatrix]
    complement_basis: tuple[tuple[int, ...], ...]


def _shell(rank: int, radius: int) -> Iterator[tuple[int, ...]]:
    """
    Vectors of sup-norm ``radius`` whose first nonzero entry is positive,
    grouped by the first coordinate that reaches the radius.
    """
    inner = range(-radius + 1, radius)
    outer = range(-radius, radius + 1)
    for i in range(rank):
        for head in itertools.product(inner, repeat=i):
            leading = next((x for x in head if x), 0)
            if leading < 0:
                continue
            signs = (radius, -radius) if leading else (radius,)
            for edge in signs:
                for tail in itertools.product(outer, repeat=rank - i - 1):
                    yield head + (edge,) + tail


def find_hyperbolic_split(g: GramMatrix, search_bound: int = 10) -> Optional[HyperbolicSplit]:
    """
    Search primitive isotropic z with an integral partner z' and Q(z') = 0.

    Candidates are streamed shell by shell in sup-norm. Rationally anisotropic
    lattices return None at once. Otherwise None only means nothing was found
    within the bound, not that no split exists.
    """
    if witt_index(g) == 0:
        logger.debug("no isotropic vector over Q, skipping the split search")
        return None
    m = g.rank
    for radius in range(1, search_bound + 1):
        for z in _shell(m, radius):
            if g.norm(z) != 0:
                continue
            gz = mat_vec(g.entries, z)
            divisor, y = bezout_vector(gz)
            if divisor != 1:
                continue
            t = g.norm(y)
            z_prime = tuple(int(a - t * b) for a, b in zip(y, z))
            basis = integer_kernel([gz, mat_vec(g.entries, z_prime)])
            complement = (
                GramMatrix.from_rows(mat_mul(mat_mul(basis, g.entries), transpose(basis)))
                if basis else None
            )
            logger.debug("hyperbolic split found at radius %d: z=%s", radius, z)
            return HyperbolicSplit(
                z=tuple(z),
                z_prime=z_prime,
                complement=complement,
                complement_basis=tuple(tuple(row) for row in basis),
            )
    logger.debug("no hyperbolic split within bound %d", search_bound)
    return None


def _ldl_form(form) -> tuple[list[list[float]], list[float]]:
    """
    Exact decomposition Q(y) = sum_i d_i (y_i + sum_{j>i} u_ij y_j)^2 of the
    half-form y^T form y / 2, returned as floats for bounding the search.
    """
    m = len(form)
    q = [[Fraction(form[i][j]) / 2 for j in range(m)] for i in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, m):
            for l in range(k, m):
                q[k][l] -= q[k][i] * q[i][l]
    upper = [[float(q[i][j]) if j > i else 0.0 for j in range(m)] for i in range(m)]
    diag = [float(q[i][i]) for i in range(m)]
    return upper, diag


def short_vectors(form, shift, bound) -> Iterator[tuple[int, ...]]:
    """
    Integer x with (shift + x)^T form (shift + x) / 2 <= bound (approximately).

    ``form`` must be positive definite. The float search uses a safety margin
    so no vector inside the bound is missed; callers filter the candidates
    with exact arithmetic.
    """
    m = len(form)
    upper, diag = _ldl_form(form)
    center_shift = [float(s) for s in shift]
    bound = float(bound)
    margin = 1e-9 * (1.0 + abs(bound))
    x = [0] * m

    def search(i: int, remaining: float):
        center = -sum(upper[i][j] * (center_shift[j] + x[j]) for j in range(i + 1, m))
        radius = math.sqrt(max(remaining, 0.0) / diag[i]) + 1e-7
        low = math.ceil(center - radius - center_shift[i])
        high = math.floor(center + radius - center_shift[i])
        for value in range(low, high + 1):
            x[i] = value
            offset = center_shift[i] + value - center
            left = remaining - diag[i] * offset * offset
            if left < -margin:
                continue
            if i == 0:
                yield tuple(x)
            else:
                yield from search(i - 1, left)
        x[i] = 0

    yield from search(m - 1, bound + margin)


class ExactForm:
    """Evaluates v^T form v / 2 exactly for v = shift + x with integer x."""

    def __init__(self, form, shift):
        denominators = [Fraction(a).denominator for row in form for a in row]
        self._scale = math.lcm(*denominators)
        self._form = [[int(Fraction(a) * self._scale) for a in row] for row in form]
        self._den = math.lcm(*(Fraction(s).denominator for s in shift)) if shift else 1
        self._shift = [int(Fraction(s) * self._den) for s in shift]

    def value(self, x) -> Fraction:
        w = [s + self._den * a for s, a in zip(self._shift, x)]
        total = sum(w[i] * sum(f * b for f, b in zip(self._form[i], w)) for i in range(len(w)))
        return Fraction(total, 2 * self._scale * self._den * self._den)


def minimum_norm(g: GramMatrix) -> Fraction:
    """Smallest Q(λ) over nonzero λ of a definite lattice (absolute value for negative definite)."""
    form = g.entries if g.is_positive_definite else g.negated().entries
    if not (g.is_positive_definite or g.is_negative_definite):
        raise ThetaRequestError("minimum norm needs a definite lattice")
    bound = min(Fraction(form[i][i], 2) for i in range(g.rank))
    zero = (Fraction(0),) * g.rank
    exact = ExactForm(form, zero)
    values = [exact.value(x) for x in short_vectors(form, zero, bound) if any(x)]
    return min(v for v in values if v > 0)


def coset_vectors(g: GramMatrix, coset: FqmElement, norm, bound: int = 10) -> list[Vector]:
    """
    All λ in coset + L with Q(λ) = norm, sorted lexicographically.

    Definite lattices are enumerated completely; indefinite lattices are
    searched over the coefficient box [-bound, bound]^m around the canonical
    coset representative, which is complete only within that box.
    """
    norm = Fraction(norm)
    disc = discriminant_group(g)
    mu = disc.element(coset)
    if mod1(norm) != disc.q(mu):
        return []
    shift = coset_representative(g, mu)

    if g.is_positive_definite or g.is_negative_definite:
        sign = 1 if g.is_positive_definite else -1
        if sign * norm < 0:
            return []
        form = g.entries if sign > 0 else g.negated().entries
        candidates = short_vectors(form, shift, sign * norm)
        exact = ExactForm(form, shift)
        target = sign * norm
    else:
        candidates = itertools.product(range(-bound, bound + 1), repeat=g.rank)
        exact = ExactForm(g.entries, shift)
        target = norm

    found = [
        tuple(s + a for s, a in zip(shift, x))
        for x in candidates
        if exact.value(x) == target
    ]
    return sorted(found)


def primitive(vector) -> bool:
    return content(vector) == 1
