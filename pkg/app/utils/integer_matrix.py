"""
Exact integer and rational linear algebra.

Smith normal form is computed here with its unimodular transforms because the
discriminant group needs both of them: the right transform gives generators of
L'/L and the left transform gives the coordinate map back from L' to the group.
Determinants and inverses are delegated to sympy and converted to
``fractions.Fraction`` so the rest of the package never sees sympy numbers.
"""

from fractions import Fraction
from math import gcd

from sympy import Matrix

IntMatrix = list[list[int]]
RationalMatrix = list[list[Fraction]]


def identity(size: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def to_fraction(value) -> Fraction:
    """Convert a sympy Rational (or int) to a Fraction."""
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    return Fraction(int(value.p), int(value.q))


def determinant(matrix) -> int:
    return int(Matrix(matrix).det())


def rational_inverse(matrix) -> RationalMatrix:
    inverse = Matrix(matrix).inv()
    return [[to_fraction(inverse[i, j]) for j in range(inverse.cols)] for i in range(inverse.rows)]


def mat_vec(matrix, vector) -> list:
    return [sum(a * b for a, b in zip(row, vector)) for row in matrix]


def mat_mul(left, right) -> list:
    cols = list(zip(*right))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in left]


def transpose(matrix) -> list:
    return [list(col) for col in zip(*matrix)]


def _swap_rows(matrix, i, j):
    matrix[i], matrix[j] = matrix[j], matrix[i]


def _swap_cols(matrix, i, j):
    for row in matrix:
        row[i], row[j] = row[j], row[i]


def _add_row(matrix, target, source, factor):
    matrix[target] = [a + factor * b for a, b in zip(matrix[target], matrix[source])]


def _add_col(matrix, target, source, factor):
    for row in matrix:
        row[target] += factor * row[source]


def _smallest_entry(matrix, start):
    best = None
    for i in range(start, len(matrix)):
        for j in range(start, len(matrix[0])):
            value = matrix[i][j]
            if value and (best is None or abs(value) < abs(matrix[best[0]][best[1]])):
                best = (i, j)
    return best


def smith_normal_form(matrix) -> tuple[list[int], IntMatrix, IntMatrix]:
    """
    Smith normal form with transforms.

    Args:
        matrix: integer matrix as nested lists

    Returns:
        (diagonal, left, right) with ``left * matrix * right`` diagonal, entries
        non-negative and each dividing the next; ``left`` and ``right`` unimodular.
    """
    work = [list(map(int, row)) for row in matrix]
    rows, cols = len(work), len(work[0]) if work else 0
    left, right = identity(rows), identity(cols)

    for t in range(min(rows, cols)):
        while True:
            pivot = _smallest_entry(work, t)
            if pivot is None:
                break
            i, j = pivot
            _swap_rows(work, t, i)
            _swap_rows(left, t, i)
            _swap_cols(work, t, j)
            _swap_cols(right, t, j)
            p = work[t][t]

            clean = True
            for i in range(t + 1, rows):
                q = work[i][t] // p
                if q:
                    _add_row(work, i, t, -q)
                    _add_row(left, i, t, -q)
                if work[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = work[t][j] // p
                if q:
                    _add_col(work, j, t, -q)
                    _add_col(right, j, t, -q)
                if work[t][j]:
                    clean = False
            if not clean:
                continue

            # pivot must divide the remaining block
            offender = next(
                (i for i in range(t + 1, rows)
                 for j in range(t + 1, cols) if work[i][j] % p),
                None,
            )
            if offender is None:
                break
            _add_row(work, t, offender, 1)
            _add_row(left, t, offender, 1)

        if work[t][t] < 0:
            work[t] = [-a for a in work[t]]
            left[t] = [-a for a in left[t]]

    diagonal = [work[i][i] for i in range(min(rows, cols))]
    return diagonal, left, right


def integer_kernel(matrix) -> IntMatrix:
    """Basis (as columns listed row-wise: one basis vector per entry) of {x in Z^n : matrix x = 0}."""
    diagonal, _, right = smith_normal_form(matrix)
    cols = len(matrix[0])
    rank = sum(1 for d in diagonal if d)
    return [[right[r][c] for r in range(cols)] for c in range(rank, cols)]


def bezout_vector(values: list[int]) -> tuple[int, list[int]]:
    """Return (g, y) with sum(values[i] * y[i]) == g == gcd(values), g >= 0."""
    g, coeffs = 0, [0] * len(values)
    for index, value in enumerate(values):
        if value == 0:
            continue
        if g == 0:
            g = abs(value)
            coeffs[index] = 1 if value > 0 else -1
            continue
        # extended gcd of g and value
        old_r, r = g, value
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coeffs = [c * old_s for c in coeffs]
        coeffs[index] = old_t
        g = old_r
    return g, coeffs


def content(values) -> int:
    result = 0
    for value in values:
        result = gcd(result, int(value))
    return result
