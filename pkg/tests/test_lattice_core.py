import math
from collections import Counter
from fractions import Fraction

import pytest

from app.calculation.fqm import is_isomorphic, milgram_signature
from app.calculation.lattice_core import (
    GramMatrix,
    _shell,
    coset_of,
    coset_representative,
    coset_vectors,
    direct_sum,
    discriminant_group,
    find_hyperbolic_split,
    lattice_profile,
    minimum_norm,
    standard_lattice,
)
from app.utils.errors import DegenerateLatticeError, InvalidLatticeError
from app.utils.integer_matrix import mat_mul, smith_normal_form


def test_gram_validation():
    with pytest.raises(InvalidLatticeError):
        GramMatrix.from_rows([[1, 0], [0, 2]])
    with pytest.raises(InvalidLatticeError):
        GramMatrix.from_rows([[2, 1], [0, 2]])
    with pytest.raises(DegenerateLatticeError):
        GramMatrix.from_rows([[2, 2], [2, 2]])


def test_standard_lattice_parser():
    assert standard_lattice("U").entries == ((0, 1), (1, 0))
    assert standard_lattice("A2").entries == ((2, -1), (-1, 2))
    assert standard_lattice("U(3)").entries == ((0, 3), (3, 0))
    assert standard_lattice("A2+U").rank == 4
    assert standard_lattice("E8").det == 1
    assert standard_lattice("D4").det == 4
    assert standard_lattice("-A2").signature_pair == (0, 2)
    assert standard_lattice("A2(2)").entries == ((4, -2), (-2, 4))
    assert standard_lattice("A2(2)").det == 12
    assert standard_lattice("-D4(3)").signature_pair == (0, 4)
    with pytest.raises(InvalidLatticeError):
        standard_lattice("F4")
    with pytest.raises(InvalidLatticeError):
        standard_lattice("E5")
    with pytest.raises(InvalidLatticeError):
        standard_lattice("D3")


def test_direct_sum_is_block_diagonal():
    g = direct_sum(standard_lattice("A2"), standard_lattice("U"))
    assert g == standard_lattice("A2+U")
    assert g.det == -3


@pytest.mark.parametrize("expr, signature, det, level, disc_order, witt", [
    ("U", (1, 1), -1, 1, 1, 1),
    ("A2", (2, 0), 3, 3, 3, 0),
    ("diag(2)", (1, 0), 2, 4, 2, 0),
    ("A2+A2+U+U", (6, 2), 9, 3, 9, 2),
    ("D4", (4, 0), 4, 2, 4, 0),
])
def test_lattice_profile(expr, signature, det, level, disc_order, witt):
    profile = lattice_profile(standard_lattice(expr))
    assert (profile.positive, profile.negative) == signature
    assert profile.det == det
    assert profile.level == level
    assert profile.disc_order == disc_order
    assert profile.witt_index == witt
    assert profile.positive + profile.negative == profile.rank


def test_level_kills_every_dual_norm(corpus):
    for g in corpus.values():
        level = lattice_profile(g).level
        disc = discriminant_group(g)
        assert all((level * disc.q(mu)).denominator == 1 for mu in disc.elements())


def test_smith_normal_form_transforms():
    matrix = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    diagonal, left, right = smith_normal_form(matrix)
    product = mat_mul(mat_mul(left, matrix), right)
    assert [product[i][i] for i in range(3)] == diagonal
    assert all(product[i][j] == 0 for i in range(3) for j in range(3) if i != j)
    assert all(diagonal[i + 1] % diagonal[i] == 0 for i in range(2))
    assert [abs(d) for d in diagonal] == [2, 6, 12]


def test_discriminant_group_of_u_is_trivial():
    assert discriminant_group(standard_lattice("U")).order == 1


def test_discriminant_group_of_a2():
    disc = discriminant_group(standard_lattice("A2"))
    assert disc.divisors == (3,)
    assert disc.q_values == (Fraction(1, 3),)


def test_discriminant_group_of_a2_squared():
    disc = discriminant_group(standard_lattice("A2+A2"))
    assert disc.divisors == (3, 3)
    assert Counter(disc.q(mu) for mu in disc.elements()) == {
        Fraction(0): 1, Fraction(1, 3): 4, Fraction(2, 3): 4
    }


def test_disc_order_is_product_of_divisors(corpus):
    for g in corpus.values():
        assert math.prod(discriminant_group(g).divisors) == abs(g.det)


def test_milgram_consistency_over_corpus(corpus):
    for name, g in corpus.items():
        positive, negative = g.signature_pair
        assert milgram_signature(discriminant_group(g)) == (positive - negative) % 8, name


def test_coset_representatives_round_trip():
    g = standard_lattice("A2+A2")
    disc = discriminant_group(g)
    for mu in disc.elements():
        assert coset_of(g, coset_representative(g, mu)) == mu
        assert g.norm(coset_representative(g, mu)) % 1 == disc.q(mu)


def test_hyperbolic_split_of_u():
    split = find_hyperbolic_split(standard_lattice("U"), 10)
    assert split.z == (1, 0)
    assert split.z_prime == (0, 1)
    assert split.complement is None


@pytest.mark.parametrize("expr", ["A2+U", "A2+A2+U+U", "U(3)+U", "D4+U"])
def test_hyperbolic_split_witness(expr):
    g = standard_lattice(expr)
    split = find_hyperbolic_split(g, 10)
    assert split is not None
    assert g.norm(split.z) == 0
    assert g.norm(split.z_prime) == 0
    assert g.bilinear(split.z, split.z_prime) == 1
    k = split.complement
    assert k.rank == g.rank - 2
    assert k.det == -g.det
    assert is_isomorphic(discriminant_group(k), discriminant_group(g))


def test_hyperbolic_split_not_found_on_diag():
    assert find_hyperbolic_split(standard_lattice("diag(2,-2)"), 10) is None


@pytest.mark.parametrize("expr", ["E8", "-E8", "A2+A2"])
def test_hyperbolic_split_skips_anisotropic_spaces(expr):
    # the box at this bound is far too large to walk
    assert find_hyperbolic_split(standard_lattice(expr), 1000) is None


@pytest.mark.parametrize("rank, radius", [(1, 3), (3, 1), (3, 2), (4, 2)])
def test_shell_enumerates_half_the_sup_norm_sphere(rank, radius):
    shell = list(_shell(rank, radius))
    assert len(shell) == ((2 * radius + 1) ** rank - (2 * radius - 1) ** rank) // 2
    assert len(set(shell)) == len(shell)
    assert all(max(map(abs, v)) == radius for v in shell)
    assert all(next(x for x in v if x) > 0 for v in shell)


def test_coset_vectors_a2():
    g = standard_lattice("A2")
    assert coset_vectors(g, (0,), 0) == [(Fraction(0), Fraction(0))]
    assert len(coset_vectors(g, (0,), 1)) == 6
    assert len(coset_vectors(g, (1,), Fraction(1, 3))) == 3
    assert coset_vectors(g, (1,), Fraction(1, 2)) == []


def test_coset_vectors_symmetric_under_negation():
    g = standard_lattice("A2+A2")
    disc = discriminant_group(g)
    for mu in disc.elements():
        n = disc.q(mu) + 1
        assert len(coset_vectors(g, mu, n)) == len(coset_vectors(g, disc.neg(mu), n))


def test_coset_vectors_indefinite_box():
    g = standard_lattice("U")
    vectors = coset_vectors(g, (), 0, bound=2)
    assert (Fraction(0), Fraction(0)) in vectors
    assert all(g.norm(v) == 0 for v in vectors)
    assert len(vectors) == 9


def test_minimum_norm():
    assert minimum_norm(standard_lattice("A2")) == 1
    assert minimum_norm(standard_lattice("E8")) == 1
    assert minimum_norm(standard_lattice("diag(4)")) == 2
