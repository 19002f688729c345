"""
Finite quadratic modules.

A finite quadratic module (A, Q) is stored on generators g_1, ..., g_r of
orders d_1 | d_2 | ... | d_r together with Q(g_i) and the bilinear values
b(g_i, g_j), all modulo 1. Elements are integer coefficient tuples reduced
modulo the divisors; their lexicographic order is the canonical basis order
used by the Weil representation.

Anisotropic modules of odd order are orthogonal sums of the p-modules
(Z/p, t x^2/p) and (Z/p)^2 with t x^2/p + y^2/p where -t is a non-square.
``classify_anisotropic`` recovers that structure and proves it by exhibiting
an isometry to the model module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Optional

from sympy import factorint, isprime, jacobi_symbol, legendre_symbol

from app.calculation.exact_arithmetic import (
    CycloNum,
    as_rational,
    embed_complex,
    interval_precision,
    mod1,
    real_sqrt,
    root_of_unity,
)
from app.logger import get_logger
from app.enums import JordanTag
from app.utils.errors import (
    CharacterError,
    InconsistentSignatureError,
    InvalidModuleError,
    NotAnisotropicError,
    SizeLimitError,
    UnsupportedClassificationError,
)

logger = get_logger(__name__)

FqmElement = tuple[int, ...]
Automorphism = tuple[FqmElement, ...]

DEFAULT_SCAN_LIMIT = 1_000_000
DEFAULT_GROUP_LIMIT = 10_000


@dataclass(frozen=True)
class Fqm:
    divisors: tuple[int, ...]
    q_values: tuple[Fraction, ...]
    gram: tuple[tuple[Fraction, ...], ...]
    generators: Optional[tuple[tuple[Fraction, ...], ...]] = field(default=None, compare=False)
    reduction: Optional[tuple[tuple[int, ...], ...]] = field(default=None, compare=False)

    def __post_init__(self):
        r = len(self.divisors)
        if len(self.q_values) != r or len(self.gram) != r or any(len(row) != r for row in self.gram):
            raise InvalidModuleError("divisors, Q values and Gram matrix disagree in size")
        if any(d < 2 for d in self.divisors):
            raise InvalidModuleError("generator orders must exceed 1")
        q_values = tuple(mod1(q) for q in self.q_values)
        gram = tuple(tuple(mod1(b) for b in row) for row in self.gram)
        object.__setattr__(self, "divisors", tuple(int(d) for d in self.divisors))
        object.__setattr__(self, "q_values", q_values)
        object.__setattr__(self, "gram", gram)
        for i, d in enumerate(self.divisors):
            if mod1(d * d * q_values[i]) != 0:
                raise InvalidModuleError(f"Q(d*g) is not 0 for generator {i}")
            if gram[i][i] != mod1(2 * q_values[i]):
                raise InvalidModuleError(f"b(g,g) != 2Q(g) for generator {i}")
            for j in range(r):
                if gram[i][j] != gram[j][i] or mod1(d * gram[i][j]) != 0:
                    raise InvalidModuleError("bilinear form is not symmetric or not well defined")

    # construction

    @classmethod
    def trivial(cls) -> Fqm:
        return cls((), (), ())

    @classmethod
    def from_diagonal(cls, divisors, q_values) -> Fqm:
        """Orthogonal sum of cyclic modules (Z/d_i, Q(g_i) = q_i)."""
        r = len(divisors)
        gram = tuple(
            tuple(mod1(2 * as_rational(q_values[i])) if i == j else Fraction(0) for j in range(r))
            for i in range(r)
        )
        return cls(tuple(divisors), tuple(as_rational(q) for q in q_values), gram)

    # basic structure

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.divisors)

    def is_trivial(self) -> bool:
        return self.order == 1

    @cached_property
    def level(self) -> int:
        dens = [q.denominator for q in self.q_values]
        dens += [self.gram[i][j].denominator for i in range(self.rank) for j in range(i + 1, self.rank)]
        return math.lcm(1, *dens)

    @cached_property
    def element_list(self) -> tuple[FqmElement, ...]:
        return tuple(itertools.product(*(range(d) for d in self.divisors)))

    def elements(self) -> Iterator[FqmElement]:
        return iter(self.element_list)

    @cached_property
    def index(self) -> dict[FqmElement, int]:
        return {mu: k for k, mu in enumerate(self.element_list)}

    def zero(self) -> FqmElement:
        return (0,) * self.rank

    def element(self, coeffs) -> FqmElement:
        coeffs = tuple(coeffs)
        if len(coeffs) != self.rank:
            raise InvalidModuleError(f"element needs {self.rank} coordinates, got {len(coeffs)}")
        return tuple(int(c) % d for c, d in zip(coeffs, self.divisors))

    def element_of_vector(self, vector) -> FqmElement:
        if self.reduction is None:
            raise InvalidModuleError("module was not built from a lattice")
        coeffs = []
        for row, d in zip(self.reduction, self.divisors):
            value = sum(Fraction(a) * b for a, b in zip(row, vector))
            if value.denominator != 1:
                raise InvalidModuleError("vector is not in the dual lattice")
            coeffs.append(int(value) % d)
        return tuple(coeffs)

    def add(self, x: FqmElement, y: FqmElement) -> FqmElement:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.divisors))

    def neg(self, x: FqmElement) -> FqmElement:
        return tuple((-a) % d for a, d in zip(x, self.divisors))

    def scale(self, k: int, x: FqmElement) -> FqmElement:
        return tuple((k * a) % d for a, d in zip(x, self.divisors))

    def order_of(self, x: FqmElement) -> int:
        return math.lcm(1, *(d // math.gcd(a, d) for a, d in zip(x, self.divisors)))

    def q(self, x: FqmElement) -> Fraction:
        total = Fraction(0)
        for i, a in enumerate(x):
            if a:
                total += a * a * self.q_values[i]
                for j in range(i + 1, self.rank):
                    if x[j]:
                        total += a * x[j] * self.gram[i][j]
        return mod1(total)

    def b(self, x: FqmElement, y: FqmElement) -> Fraction:
        total = Fraction(0)
        for i, a in enumerate(x):
            if a:
                for j, c in enumerate(y):
                    if c:
                        total += a * c * self.gram[i][j]
        return mod1(total)

    def negated(self) -> Fqm:
        return Fqm(self.divisors, tuple(-q for q in self.q_values),
                   tuple(tuple(-b for b in row) for row in self.gram))

    def direct_sum(self, other: Fqm) -> Fqm:
        r, s = self.rank, other.rank
        gram = tuple(
            tuple(self.gram[i][j] if i < r and j < r else
                  other.gram[i - r][j - r] if i >= r and j >= r else Fraction(0)
                  for j in range(r + s))
            for i in range(r + s)
        )
        return Fqm(self.divisors + other.divisors, self.q_values + other.q_values, gram)


def require_prime(p: int) -> None:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")


def is_anisotropic(a: Fqm, scan_limit: int = DEFAULT_SCAN_LIMIT) -> bool:
    """Exhaustive check that Q(mu) != 0 for every mu != 0."""
    if a.order > scan_limit:
        raise SizeLimitError(f"|A| = {a.order} exceeds the scan limit {scan_limit}")
    zero = a.zero()
    return all(a.q(mu) != 0 for mu in a.elements() if mu != zero)


def q_ranks(a: Fqm) -> dict[int, int]:
    """p-rank of each primary component."""
    ranks: dict[int, int] = {}
    for d in a.divisors:
        for p in factorint(d):
            ranks[p] = ranks.get(p, 0) + 1
    return dict(sorted(ranks.items()))


def p_primary_decomposition(a: Fqm) -> dict[int, Fqm]:
    components = {}
    for p in sorted(factorint(a.order)):
        picked = []
        for i, d in enumerate(a.divisors):
            if d % p == 0:
                pk = p ** factorint(d)[p]
                picked.append((i, pk, d // pk))
        divisors = tuple(pk for _, pk, _ in picked)
        q_values = tuple(c * c * a.q_values[i] for i, _, c in picked)
        gram = tuple(tuple(c * c2 * a.gram[i][j] for j, _, c2 in picked) for i, _, c in picked)
        generators = None
        if a.generators is not None:
            generators = tuple(tuple(c * x for x in a.generators[i]) for i, _, c in picked)
        components[p] = Fqm(divisors, q_values, gram, generators=generators)
    return components


@dataclass(frozen=True)
class JordanComponent:
    prime: int
    exponent: int
    tag: JordanTag
    t: Optional[int] = None

    @property
    def label(self) -> str:
        base = f"{self.tag.value}_{self.prime ** self.exponent}"
        return f"{base}^{self.t}" if self.t is not None else base


def jordan_module(component: JordanComponent) -> Fqm:
    """
    Model module of a Jordan component.

    B_{2^k} is taken as Q(x, y) = (x^2 + xy + y^2) / 2^k, so its bilinear form has
    1/2^k off the diagonal; C_{2^k} is Q(x, y) = xy / 2^k.
    """
    p, k, t = component.prime, component.exponent, component.t
    n = p**k
    if component.tag is JordanTag.A:
        if p == 2:
            return Fqm.from_diagonal((n,), (Fraction(t, 2 * n),))
        return Fqm.from_diagonal((n,), (Fraction(t, n),))
    if p != 2:
        raise InvalidModuleError("B and C components only exist for p = 2")
    if component.tag is JordanTag.B:
        q = (Fraction(1, n), Fraction(1, n))
    else:
        q = (Fraction(0), Fraction(0))
    half = Fraction(1, n)
    return Fqm((n, n), q, ((2 * q[0], half), (half, 2 * q[1])))


def smallest_nonresidue(p: int) -> int:
    return next(n for n in range(2, p) if legendre_symbol(n, p) == -1)


def _square_class_representative(t: int, p: int) -> int:
    return 1 if legendre_symbol(t % p, p) == 1 else smallest_nonresidue(p)


def classify_anisotropic(a_p: Fqm, isomorphism_limit: int = 10_000) -> list[JordanComponent]:
    """
    Jordan decomposition of an anisotropic p-module for odd p.

    The structure is forced: all divisors equal p and the rank is at most 2.
    The returned decomposition is verified by an explicit isometry to the model
    module whenever |A_p| <= isomorphism_limit.
    """
    primes = set()
    for d in a_p.divisors:
        primes.update(factorint(d))
    if len(primes) != 1:
        raise InvalidModuleError("classification needs a non-trivial p-group")
    (p,) = primes
    if p == 2:
        raise UnsupportedClassificationError("2-adic anisotropic modules are not classified")
    if not is_anisotropic(a_p):
        raise NotAnisotropicError("module has a nonzero isotropic element")
    if any(d != p for d in a_p.divisors) or a_p.rank > 2:
        # anisotropy already rules this out
        raise NotAnisotropicError("anisotropic odd p-modules have exponent p and rank <= 2")

    if a_p.rank == 1:
        t = int(p * a_p.q_values[0]) % p
        components = [JordanComponent(p, 1, JordanTag.A, _square_class_representative(t, p))]
    else:
        diag_a = int(p * a_p.q_values[0]) % p
        diag_c = int(p * a_p.q_values[1]) % p
        cross = int(p * a_p.gram[0][1]) % p
        half_cross = cross * pow(2, -1, p) % p
        det = (diag_a * diag_c - half_cross * half_cross) % p
        components = [
            JordanComponent(p, 1, JordanTag.A, _square_class_representative(det, p)),
            JordanComponent(p, 1, JordanTag.A, 1),
        ]

    if a_p.order <= isomorphism_limit:
        model = Fqm.trivial()
        for component in components:
            model = model.direct_sum(jordan_module(component))
        if find_isomorphism(a_p, model) is None:
            raise InvalidModuleError("classification could not be verified by an isometry")
    return components


def _isometries(source: Fqm, target: Fqm, first_only: bool, limit: int) -> list[Automorphism]:
    if source.order != target.order:
        return []
    if source.order > limit:
        raise SizeLimitError(f"|A| = {source.order} exceeds the isometry search limit {limit}")
    candidates = []
    for i, d in enumerate(source.divisors):
        candidates.append([
            h for h in target.elements()
            if target.scale(d, h) == target.zero() and target.q(h) == source.q_values[i]
        ])
    gens = [tuple(1 if j == i else 0 for j in range(source.rank)) for i in range(source.rank)]
    found: list[Automorphism] = []

    def extend(images: list[FqmElement]):
        i = len(images)
        if i == source.rank:
            if _is_bijective(target, images, source):
                found.append(tuple(images))
            return
        for h in candidates[i]:
            if all(target.b(h, images[j]) == source.b(gens[i], gens[j]) for j in range(i)):
                images.append(h)
                extend(images)
                images.pop()
                if first_only and found:
                    return

    extend([])
    return found


def _is_bijective(target: Fqm, images, source: Fqm) -> bool:
    span = {target.zero()}
    for h, d in zip(images, source.divisors):
        span = {target.add(x, target.scale(k, h)) for x in span for k in range(d)}
    return len(span) == target.order


def find_isomorphism(a: Fqm, b: Fqm, limit: int = 10_000) -> Optional[Automorphism]:
    """Images of the generators of a under an isometry a -> b, if one exists."""
    found = _isometries(a, b, first_only=True, limit=limit)
    return found[0] if found else None


def is_isomorphic(a: Fqm, b: Fqm, limit: int = 10_000) -> bool:
    return find_isomorphism(a, b, limit) is not None


def apply_automorphism(a: Fqm, sigma: Automorphism, x: FqmElement) -> FqmElement:
    result = a.zero()
    for c, image in zip(x, sigma):
        if c:
            result = a.add(result, a.scale(c, image))
    return result


def compose_automorphisms(a: Fqm, first: Automorphism, second: Automorphism) -> Automorphism:
    """first after second."""
    return tuple(apply_automorphism(a, first, image) for image in second)


def orthogonal_group(a: Fqm, limit: int = DEFAULT_GROUP_LIMIT) -> list[Automorphism]:
    if a.is_trivial():
        return [()]
    group = _isometries(a, a, first_only=False, limit=limit)
    logger.debug("orthogonal group of order %d for |A| = %d", len(group), a.order)
    return group


def gauss_sum(a: Fqm, d: int = 1) -> CycloNum:
    """g_d(A) = sum over mu of e(d Q(mu))."""
    n = a.level
    counts: dict[int, int] = {}
    for mu in a.elements():
        k = int(a.q(mu) * n) * d % n
        counts[k] = counts.get(k, 0) + 1
    return CycloNum.from_exponents(n, counts)


def milgram_signature(a: Fqm, precision_bits: int = 128) -> int:
    """
    Signature mod 8 from g(A) = sqrt|A| e(sig/8).

    The eighth root of unity is located with a certified interval, then
    confirmed exactly through g(A)^2 = |A| e(sig/4).
    """
    g = gauss_sum(a)
    order = a.order
    if g * g.conjugate() != order:
        raise InconsistentSignatureError("|g(A)|^2 != |A|, the module is degenerate")
    with interval_precision(precision_bits):
        normalized = embed_complex(g, precision_bits).scale(1 / real_sqrt(order))
        matches = [
            s for s in range(8)
            if (normalized - embed_complex(root_of_unity(Fraction(s, 8)), precision_bits)).abs_upper() < 0.25
        ]
    if len(matches) != 1:
        raise InconsistentSignatureError("Gauss sum is not an eighth root of unity times sqrt|A|")
    signature = matches[0]
    if g * g != root_of_unity(Fraction(signature, 4)) * order:
        raise InconsistentSignatureError("exact Milgram check g(A)^2 = |A| e(sig/4) failed")
    return signature


def index_set(a: Fqm, c: int, x) -> frozenset[FqmElement]:
    """A_{c,x}: elements of order c with Q(mu) = x mod 1."""
    x = mod1(x)
    return frozenset(mu for mu in a.elements() if a.order_of(mu) == c and a.q(mu) == x)


def jacobi_character(modulus: int, n: int) -> int:
    if modulus < 1 or modulus % 2 == 0:
        raise CharacterError(f"Jacobi symbol needs a positive odd modulus, got {modulus}")
    if modulus == 1:
        return 1
    return int(jacobi_symbol(n % modulus, modulus))


def quadratic_character(a: Fqm) -> Callable[[int], int]:
    """Default χ_A: n -> (n / |A|)."""
    order = a.order
    if order % 2 == 0:
        raise CharacterError("default character needs odd |A|; supply a character table")
    return lambda n: jacobi_character(order, n)


@lru_cache(maxsize=None)
def _cached_jordan(p: int, t: int) -> Fqm:
    return jordan_module(JordanComponent(p, 1, JordanTag.A, t))


def anisotropic_squarefree_modules(max_order: int) -> Iterator[tuple[int, tuple[JordanComponent, ...], Fqm]]:
    """
    All anisotropic modules of odd square-free order up to max_order, as
    products of (Z/p, t x^2/p) with t in {1, smallest non-residue}.
    """
    for order in range(1, max_order + 1, 2):
        factors = factorint(order)
        if any(k > 1 for k in factors.values()):
            continue
        primes = sorted(factors)
        choices = [[1, smallest_nonresidue(p)] for p in primes]
        for ts in itertools.product(*choices):
            module = Fqm.trivial()
            components = []
            for p, t in zip(primes, ts):
                components.append(JordanComponent(p, 1, JordanTag.A, t))
                module = module.direct_sum(_cached_jordan(p, t))
            yield order, tuple(components), module
