from fractions import Fraction

import pytest

from app.calculation.exact_arithmetic import CycloNum, root_of_unity
from app.calculation.fqm import gauss_sum
from app.calculation.lattice_core import discriminant_group
from app.calculation.weil_rep import (
    basis_vector,
    build_weil_matrices,
    matrix_vector,
    rho_of_gamma,
    scalar_product,
    verify_relations,
    weight_is_compatible,
)
from app.utils.errors import InconsistentSignatureError, UnsupportedSignatureError

from tests.conftest import EVEN_RANK_CORPUS

S = ((0, -1), (1, 0))
T = ((1, 1), (0, 1))


def dense_mul(left, right):
    n = len(left)
    result = []
    for i in range(n):
        row = []
        for j in range(n):
            total = CycloNum.zero()
            for k in range(n):
                total = total + left[i][k] * right[k][j]
            row.append(total)
        result.append(row)
    return result


def diagonal(values):
    n = len(values)
    return [[values[i] if i == j else CycloNum.zero() for j in range(n)] for i in range(n)]


@pytest.fixture
def weil_a3(a3_1):
    return build_weil_matrices(a3_1, 2)


def test_rho_t_diagonal(weil_a3):
    assert weil_a3.rho_T == [CycloNum.one(), root_of_unity(Fraction(1, 3)), root_of_unity(Fraction(1, 3))]


def test_rho_s_scalar(weil_a3, a3_1):
    assert weil_a3.rho_S[0][0] == gauss_sum(a3_1).conjugate() / 3


def test_rho_z_swaps_negatives(weil_a3):
    z = weil_a3.rho_Z
    minus_one = root_of_unity(Fraction(-2, 4))
    assert z[0][0] == minus_one
    assert z[2][1] == minus_one
    assert z[1][2] == minus_one
    assert z[1][1].is_zero()


def test_relations_a3(weil_a3):
    report = verify_relations(weil_a3)
    assert report.all_passed
    assert set(report.checks) == {
        "s_squared_equals_z",
        "st_cubed_equals_z",
        "z_squared_identity",
        "s_unitary",
        "z_commutes_with_t",
    }


def test_trivial_module(trivial):
    w = build_weil_matrices(trivial, 0)
    assert w.dimension == 1
    assert verify_relations(w).all_passed


@pytest.mark.parametrize("name", EVEN_RANK_CORPUS)
def test_relations_over_corpus(corpus, name):
    g = corpus[name]
    p, q = g.signature_pair
    w = build_weil_matrices(discriminant_group(g), (p - q) % 8)
    report = verify_relations(w)
    assert report.all_passed, report.checks


def test_relation_corpus_covers_small_mixed_signatures(corpus):
    small = [corpus[name] for name in EVEN_RANK_CORPUS if corpus[name].rank <= 6 and abs(corpus[name].det) <= 200]
    assert len(small) >= 20
    assert {(p - q) % 8 for p, q in (g.signature_pair for g in small)} == {0, 2, 4, 6}
    assert any(g.signature_pair[1] > 0 for g in small)


def test_corrupted_s_entry_breaks_unitarity(weil_a3):
    corrupted = weil_a3.with_s_entry(0, 0, weil_a3.s_exponents[0][0] + Fraction(1, 2))
    report = verify_relations(corrupted)
    assert not report.checks["s_unitary"]
    assert not report.all_passed


def test_signature_must_match_milgram(a3_1):
    with pytest.raises(InconsistentSignatureError):
        build_weil_matrices(a3_1, 6)


def test_odd_signature_rejected(trivial):
    with pytest.raises(UnsupportedSignatureError):
        build_weil_matrices(trivial, 1)


def test_dual_representation_conjugates_t_and_s(a3_1, weil_a3):
    dual = build_weil_matrices(a3_1.negated(), 6)
    assert dual.rho_T == [x.conjugate() for x in weil_a3.rho_T]
    assert dual.rho_S == [[x.conjugate() for x in row] for row in weil_a3.rho_S]
    assert verify_relations(dual).all_passed


class TestRhoOfGamma:
    def test_generators(self, weil_a3):
        assert rho_of_gamma(weil_a3, T) == diagonal(weil_a3.rho_T)
        assert rho_of_gamma(weil_a3, S) == weil_a3.rho_S

    def test_minus_identity_is_z(self, weil_a3):
        assert rho_of_gamma(weil_a3, ((-1, 0), (0, -1))) == weil_a3.rho_Z

    def test_product_st(self, weil_a3):
        expected = dense_mul(weil_a3.rho_S, diagonal(weil_a3.rho_T))
        assert rho_of_gamma(weil_a3, ((0, -1), (1, 1))) == expected

    def test_homomorphism(self, weil_a3):
        # (7 2; 3 1) = T^2 (1 0; 3 1)
        left = rho_of_gamma(weil_a3, ((1, 2), (0, 1)))
        right = rho_of_gamma(weil_a3, ((1, 0), (3, 1)))
        assert rho_of_gamma(weil_a3, ((7, 2), (3, 1))) == dense_mul(left, right)

    def test_determinant_checked(self, weil_a3):
        with pytest.raises(ValueError):
            rho_of_gamma(weil_a3, ((2, 0), (0, 1)))


def test_vectors_and_scalar_product(weil_a3):
    e0 = basis_vector(weil_a3, (0,))
    e1 = basis_vector(weil_a3, (4,))
    assert scalar_product(e0, e0) == 1
    assert scalar_product(e0, e1).is_zero()
    image = matrix_vector(weil_a3.rho_S, e0)
    # rho(S) is unitary
    assert scalar_product(image, image) == 1


def test_weight_compatibility():
    assert weight_is_compatible(1, 2)
    assert not weight_is_compatible(1, 1)
    assert weight_is_compatible(Fraction(1, 2), 1)
