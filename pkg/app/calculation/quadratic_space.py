"""
Rational quadratic spaces: diagonalization, local invariants and isotropy.

A non-degenerate quadratic space over Q is determined by its dimension,
signature, discriminant (a square class) and the Hasse invariants
c_p = prod_{i<j} (a_i, a_j)_p of a diagonalization <a_1, ..., a_m>. Isotropy is
decided place by place (Hasse-Minkowski) and the rational Witt index is
obtained by splitting off hyperbolic planes at the level of invariants, which
never requires an explicit isotropic vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, legendre_symbol

from app.logger import get_logger

logger = get_logger(__name__)


def diagonalize(gram) -> list[Fraction]:
    """Congruence-diagonalize a symmetric rational matrix, returning the diagonal."""
    a = [[Fraction(x) for x in row] for row in gram]
    m = len(a)
    for i in range(m):
        if a[i][i] == 0:
            swap = next((j for j in range(i + 1, m) if a[j][j] != 0), None)
            if swap is not None:
                a[i], a[swap] = a[swap], a[i]
                for row in a:
                    row[i], row[swap] = row[swap], row[i]
            else:
                partner = next((j for j in range(i + 1, m) if a[i][j] != 0), None)
                if partner is None:
                    raise ValueError("matrix is degenerate")
                # all later diagonal entries vanish, so adding gives 2*a[i][partner] != 0
                a[i] = [x + y for x, y in zip(a[i], a[partner])]
                for row in a:
                    row[i] += row[partner]
        pivot = a[i][i]
        for j in range(i + 1, m):
            factor = a[j][i] / pivot
            if factor:
                a[j] = [x - factor * y for x, y in zip(a[j], a[i])]
                for row in a:
                    row[j] -= factor * row[i]
    return [a[i][i] for i in range(m)]


def square_free_part(value: Fraction | int) -> int:
    """Square-free integer in the same square class as a nonzero rational."""
    value = Fraction(value)
    if value == 0:
        raise ValueError("zero has no square class")
    n = abs(value.numerator * value.denominator)
    result = 1
    for p, k in factorint(n).items():
        if k % 2:
            result *= p
    return result if value > 0 else -result


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def hilbert_symbol(a: int, b: int, p: int) -> int:
    """Hilbert symbol (a, b)_p of nonzero integers at a finite prime p."""
    alpha, beta = _valuation(a, p), _valuation(b, p)
    u, v = a // p**alpha, b // p**beta
    if p == 2:
        def eps(x):
            return ((x - 1) // 2) % 2

        def omega(x):
            return ((x * x - 1) // 8) % 2

        exponent = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if exponent % 2 else 1
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        sign *= legendre_symbol(u % p, p)
    if alpha % 2:
        sign *= legendre_symbol(v % p, p)
    return sign


def is_local_square(d: int, p: int) -> bool:
    """Whether the square-free integer d is a square in Q_p."""
    if d % p == 0:
        return False
    if p == 2:
        return d % 8 == 1
    return legendre_symbol(d % p, p) == 1


@dataclass(frozen=True)
class SpaceInvariants:
    dim: int
    positive: int
    negative: int
    discriminant: int
    hasse: dict[int, int] = field(default_factory=dict)

    @property
    def primes(self) -> list[int]:
        return sorted(self.hasse)

    @property
    def is_indefinite(self) -> bool:
        return self.positive > 0 and self.negative > 0


def space_invariants(gram) -> SpaceInvariants:
    diagonal = [square_free_part(x) for x in diagonalize(gram)]
    primes = {2}
    for a in diagonal:
        primes.update(factorint(abs(a)))
    hasse = {}
    for p in sorted(primes):
        c = 1
        for i in range(len(diagonal)):
            for j in range(i + 1, len(diagonal)):
                c *= hilbert_symbol(diagonal[i], diagonal[j], p)
        hasse[p] = c
    discriminant = 1
    for a in diagonal:
        discriminant *= a
    return SpaceInvariants(
        dim=len(diagonal),
        positive=sum(1 for a in diagonal if a > 0),
        negative=sum(1 for a in diagonal if a < 0),
        discriminant=square_free_part(discriminant),
        hasse=hasse,
    )


def is_isotropic(inv: SpaceInvariants) -> bool:
    """Hasse-Minkowski decision from the invariants."""
    n, d = inv.dim, inv.discriminant
    if n <= 1:
        return False
    if n == 2:
        return -d == 1
    if not inv.is_indefinite:
        return False
    if n == 3:
        return all(inv.hasse[p] == hilbert_symbol(-1, -d, p) for p in inv.primes)
    if n == 4:
        return not any(
            is_local_square(d, p) and inv.hasse[p] != hilbert_symbol(-1, -1, p)
            for p in inv.primes
        )
    return True


def split_hyperbolic_plane(inv: SpaceInvariants) -> SpaceInvariants:
    """Invariants of W where V = H + W, assuming V is isotropic."""
    discriminant = square_free_part(-inv.discriminant)
    hasse = {p: c * hilbert_symbol(-1, discriminant, p) for p, c in inv.hasse.items()}
    return SpaceInvariants(
        dim=inv.dim - 2,
        positive=inv.positive - 1,
        negative=inv.negative - 1,
        discriminant=discriminant,
        hasse=hasse,
    )


def rational_witt_index(gram) -> int:
    inv = space_invariants(gram)
    index = 0
    while is_isotropic(inv):
        inv = split_hyperbolic_plane(inv)
        index += 1
    logger.debug("witt index %d for dimension %d", index, len(gram))
    return index
