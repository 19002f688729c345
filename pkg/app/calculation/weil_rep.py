"""
Weil representation of SL2(Z) attached to a finite quadratic module of even signature.

On the basis e_mu (mu in A, lexicographic order) the generators act by

    rho(T) e_mu = e(Q(mu)) e_mu
    rho(S) e_mu = e(-sig/8) / sqrt|A| * sum_nu e(-(nu, mu)) e_nu
    rho(Z) e_mu = e(-sig/4) e_{-mu}

The scalar e(-sig/8)/sqrt|A| equals conj(g(A))/|A| by Milgram's formula, so
every entry lives in a cyclotomic field and all relations are checked exactly.

Products are formed in the integral group ring of Z/N (N the level): S, T and
Z are monomial matrices up to a scalar, so their products are integer
exponent counts that are reduced to CycloNum only when compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from app.calculation.exact_arithmetic import CycloNum, mod1, root_of_unity
from app.calculation.fqm import Fqm, FqmElement, gauss_sum, milgram_signature
from app.logger import get_logger
from app.utils.errors import InconsistentSignatureError, UnsupportedSignatureError

logger = get_logger(__name__)

# entry of a group-ring matrix: exponent k (meaning e(k/N)) -> multiplicity
RingEntry = dict[int, int]
RingMatrix = list[list[RingEntry]]


@dataclass(frozen=True, eq=False)
class WeilMatrices:
    fqm: Fqm
    sig_mod8: int
    basis: tuple[FqmElement, ...]
    t_exponents: tuple[Fraction, ...]
    s_scalar: CycloNum
    s_exponents: tuple[tuple[Fraction, ...], ...]
    z_scalar: CycloNum
    z_permutation: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def rho_T(self) -> list[CycloNum]:
        """Diagonal of rho(T)."""
        return [root_of_unity(x) for x in self.t_exponents]

    @property
    def rho_S(self) -> list[list[CycloNum]]:
        return [[self.s_scalar * root_of_unity(x) for x in row] for row in self.s_exponents]

    @property
    def rho_Z(self) -> list[list[CycloNum]]:
        n = self.dimension
        dense = [[CycloNum.zero() for _ in range(n)] for _ in range(n)]
        for column, row in enumerate(self.z_permutation):
            dense[row][column] = self.z_scalar
        return dense

    def with_s_entry(self, row: int, column: int, exponent: Fraction) -> WeilMatrices:
        """Copy with one exponent of rho(S) replaced."""
        rows = [list(r) for r in self.s_exponents]
        rows[row][column] = mod1(exponent)
        return replace(self, s_exponents=tuple(tuple(r) for r in rows))


def build_weil_matrices(a: Fqm, sig_mod8: int) -> WeilMatrices:
    sig = sig_mod8 % 8
    if sig % 2:
        raise UnsupportedSignatureError("odd signature needs the metaplectic double cover")
    milgram = milgram_signature(a)
    if milgram != sig:
        raise InconsistentSignatureError(
            f"signature {sig} mod 8 does not match the Milgram signature {milgram}"
        )
    basis = a.element_list
    index = a.index
    return WeilMatrices(
        fqm=a,
        sig_mod8=sig,
        basis=basis,
        t_exponents=tuple(a.q(mu) for mu in basis),
        s_scalar=gauss_sum(a).conjugate() / a.order,
        s_exponents=tuple(tuple(mod1(-a.b(nu, mu)) for mu in basis) for nu in basis),
        z_scalar=root_of_unity(Fraction(-sig, 4)),
        z_permutation=tuple(index[a.neg(mu)] for mu in basis),
    )


def basis_vector(w: WeilMatrices, mu: FqmElement) -> list[CycloNum]:
    k = w.fqm.index[w.fqm.element(mu)]
    return [CycloNum.one() if i == k else CycloNum.zero() for i in range(w.dimension)]


def scalar_product(x: list[CycloNum], y: list[CycloNum]) -> CycloNum:
    """<x, y> = sum x_mu conj(y_mu), antilinear in the second slot."""
    total = CycloNum.zero()
    for a, b in zip(x, y):
        if not a.is_zero() and not b.is_zero():
            total = total + a * b.conjugate()
    return total


def weight_is_compatible(kappa, sig: int) -> bool:
    """2 kappa = sig mod 2, the parity condition for nonzero M_{kappa, A}."""
    return (2 * Fraction(kappa) - sig) % 2 == 0


def matrix_vector(matrix: list[list[CycloNum]], vector: list[CycloNum]) -> list[CycloNum]:
    result = []
    for row in matrix:
        total = CycloNum.zero()
        for a, b in zip(row, vector):
            if not a.is_zero() and not b.is_zero():
                total = total + a * b
        result.append(total)
    return result


# group ring arithmetic


def _monomial(exponents, level: int) -> RingMatrix:
    return [[{int(x * level) % level: 1} for x in row] for row in exponents]


def _diagonal(exponents, level: int) -> RingMatrix:
    n = len(exponents)
    return [[{int(exponents[i] * level) % level: 1} if i == j else {} for j in range(n)] for i in range(n)]


def _permutation(perm) -> RingMatrix:
    n = len(perm)
    matrix: RingMatrix = [[{} for _ in range(n)] for _ in range(n)]
    for column, row in enumerate(perm):
        matrix[row][column] = {0: 1}
    return matrix


def _ring_matmul(left: RingMatrix, right: RingMatrix, level: int) -> RingMatrix:
    n = len(left)
    result: RingMatrix = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        row = left[i]
        out = result[i]
        for k in range(n):
            a = row[k]
            if not a:
                continue
            right_row = right[k]
            for j in range(n):
                b = right_row[j]
                if not b:
                    continue
                target = out[j]
                for x, cx in a.items():
                    for y, cy in b.items():
                        key = (x + y) % level
                        target[key] = target.get(key, 0) + cx * cy
    return result


def _ring_value(entry: RingEntry, level: int) -> CycloNum:
    if not entry:
        return CycloNum.zero()
    return CycloNum.from_exponents(level, entry)


def _s_conjugate_transpose_exponents(w: WeilMatrices):
    n = w.dimension
    return [[mod1(-w.s_exponents[j][i]) for j in range(n)] for i in range(n)]


@dataclass
class RelationReport:
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(self.checks.values())


def _matches(product: RingMatrix, scalar: CycloNum, expected, level: int) -> bool:
    n = len(product)
    for i in range(n):
        for j in range(n):
            target = expected(i, j)
            value = _ring_value(product[i][j], level)
            if target is None:
                if not value.is_zero():
                    return False
            elif scalar * value != target:
                return False
    return True


def _ring_modulus(w: WeilMatrices) -> int:
    denominators = [x.denominator for row in w.s_exponents for x in row]
    return math.lcm(w.fqm.level, *denominators)


def verify_relations(w: WeilMatrices) -> RelationReport:
    level = _ring_modulus(w)
    perm = w.z_permutation
    s0 = _monomial(w.s_exponents, level)
    t0 = _diagonal(w.t_exponents, level)

    def z_entry(i, j):
        return w.z_scalar if i == perm[j] else None

    def identity_entry(i, j):
        return CycloNum.one() if i == j else None

    report = RelationReport()

    s_squared = _ring_matmul(s0, s0, level)
    report.checks["s_squared_equals_z"] = _matches(s_squared, w.s_scalar * w.s_scalar, z_entry, level)

    st = _ring_matmul(s0, t0, level)
    st_cubed = _ring_matmul(_ring_matmul(st, st, level), st, level)
    report.checks["st_cubed_equals_z"] = _matches(st_cubed, w.s_scalar ** 3, z_entry, level)

    report.checks["z_squared_identity"] = (
        w.z_scalar * w.z_scalar == 1 and all(perm[perm[i]] == i for i in range(len(perm)))
    )

    s_adjoint = _monomial(_s_conjugate_transpose_exponents(w), level)
    gram = _ring_matmul(s0, s_adjoint, level)
    report.checks["s_unitary"] = _matches(gram, w.s_scalar * w.s_scalar.conjugate(), identity_entry, level)

    report.checks["z_commutes_with_t"] = all(
        w.t_exponents[perm[i]] == w.t_exponents[i] for i in range(len(perm))
    )
    logger.debug("Weil relations for |A| = %d: %s", w.fqm.order, report.checks)
    return report


def _decompose(gamma) -> tuple[list[tuple[str, int]], int]:
    """
    Write gamma = (word) * Z^z_power * T^shift with word letters ("T", q) or ("S", 1).

    Returns the letters in left-to-right order including the final T power.
    """
    (a, b), (c, d) = gamma
    if a * d - b * c != 1:
        raise ValueError("matrix must have determinant 1")
    word: list[tuple[str, int]] = []
    while c != 0:
        q = a // c
        if q:
            word.append(("T", q))
            a, b = a - q * c, b - q * d
        word.append(("S", 1))
        # S^-1 applied on the left
        a, b, c, d = c, d, -a, -b
    z_power = 0
    if a == -1:
        z_power = 1
        b = -b
    word.append(("Z", z_power))
    word.append(("T", b))
    return word, z_power


def rho_of_gamma(w: WeilMatrices, gamma) -> list[list[CycloNum]]:
    """rho(gamma) for gamma in SL2(Z), by reduction to the generators S and T."""
    level = _ring_modulus(w)
    n = w.dimension
    word, _ = _decompose(gamma)
    product = _permutation(tuple(range(n)))
    scalar = CycloNum.one()
    s0 = _monomial(w.s_exponents, level)
    for letter, power in word:
        if letter == "S":
            product = _ring_matmul(product, s0, level)
            scalar = scalar * w.s_scalar
        elif letter == "T" and power:
            product = _ring_matmul(product, _diagonal([x * power for x in w.t_exponents], level), level)
        elif letter == "Z" and power:
            product = _ring_matmul(product, _permutation(w.z_permutation), level)
            scalar = scalar * w.z_scalar
    return [[scalar * _ring_value(product[i][j], level) for j in range(n)] for i in range(n)]
