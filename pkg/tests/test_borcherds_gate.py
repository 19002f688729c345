from fractions import Fraction

import pytest

from app.calculation.borcherds_gate import (
    CONVERSE_HYPOTHESES,
    PrincipalPart,
    apply_automorphism_to_principal_part,
    check_converse,
    check_injectivity_hypotheses,
    check_reflective_principal_part,
    check_singular_weight_setting,
    heegner_multiplicity,
    index_set_sizes,
    singular_weight_data,
    symmetrize,
)
from app.calculation.fqm import index_set, orthogonal_group
from app.calculation.lattice_core import standard_lattice
from app.utils.errors import PrincipalPartError

THIRD = Fraction(-1, 3)


@pytest.fixture
def reflective_pp() -> PrincipalPart:
    return PrincipalPart.from_mapping({((1,), THIRD): 1, ((2,), THIRD): 1})


class TestConverse:
    def test_passing_lattice(self):
        report = check_converse(standard_lattice("A2+A2+U+U"))
        assert report.passed
        assert report.failing == []
        assert set(report.verdicts) == set(CONVERSE_HYPOTHESES)

    def test_rank_six(self):
        report = check_converse(standard_lattice("A2+U+U"))
        assert set(report.failing) == {"m_mod4", "m_bound"}

    def test_unimodular(self):
        assert check_converse(standard_lattice("E8+U+U")).passed

    def test_isotropic_discriminant(self):
        report = check_converse(standard_lattice("diag(2,-2)+U+U+U"))
        assert "anisotropic" in report.failing
        assert "level_odd" in report.failing

    def test_wrong_signature_type(self):
        report = check_converse(standard_lattice("E8"))
        assert "type_p2" in report.failing

    def test_undecided_anisotropy_fails(self):
        report = check_converse(standard_lattice("A2+A2+U+U"), scan_limit=2)
        assert not report.verdicts["anisotropic"].passed
        assert report.verdicts["anisotropic"].reason.startswith("undecided")


class TestInjectivity:
    def test_passing(self):
        report = check_injectivity_hypotheses(standard_lattice("A2+A2+U+U"), 0)
        assert report.passed

    def test_large_l(self):
        report = check_injectivity_hypotheses(standard_lattice("A2+A2+U+U"), 6)
        assert not report.verdicts["m_bound"].passed
        assert not report.verdicts["nonvanishing_regime"].passed


class TestSingularWeight:
    @pytest.mark.parametrize("p, weight, c00", [(6, Fraction(2), 4), (4, Fraction(1), 2), (3, Fraction(1, 2), 1)])
    def test_data(self, p, weight, c00):
        data = singular_weight_data(p)
        assert data.weight == weight
        assert data.c00 == c00
        assert data.half_c00 == Fraction(c00, 2)

    def test_small_p(self):
        with pytest.raises(ValueError):
            singular_weight_data(2)

    def test_setting(self):
        setting = check_singular_weight_setting(standard_lattice("A2+A2+U+U"))
        assert setting.passed
        assert setting.split is not None
        assert setting.weight_data.c00 == 4


class TestPrincipalPart:
    def test_merges_and_drops_zero(self):
        pp = PrincipalPart.from_mapping({((1,), THIRD): 1, ((2,), THIRD): 0})
        assert pp.terms == (((1,), THIRD, Fraction(1)),)
        assert pp.coefficient((1,), "-1/3") == 1

    def test_validate_positive_exponent(self, a3_2):
        with pytest.raises(PrincipalPartError):
            PrincipalPart.from_mapping({((1,), Fraction(2, 3)): 1}).validate(a3_2)

    def test_validate_residue(self, a3_2):
        with pytest.raises(PrincipalPartError):
            PrincipalPart.from_mapping({((1,), Fraction(-2, 3)): 1}).validate(a3_2)

    def test_validate_unreduced_element(self, a3_2):
        with pytest.raises(PrincipalPartError):
            PrincipalPart.from_mapping({((4,), THIRD): 1}).validate(a3_2)

    def test_validate_dual_convention(self, a3_2):
        pp = PrincipalPart.from_mapping({((1,), THIRD): 1})
        pp.validate(a3_2)
        with pytest.raises(PrincipalPartError):
            pp.validate(a3_2, dual=True)


class TestReflective:
    def test_index_set(self, a3_1, a3_2):
        assert index_set(a3_1, 3, Fraction(1, 3)) == {(1,), (2,)}
        assert index_set(a3_2, 3, Fraction(1, 3)) == frozenset()
        assert index_set_sizes(a3_1) == {3: 2}
        assert index_set_sizes(a3_2) == {3: 0}

    def test_passes(self, a3_1, reflective_pp):
        verdict = check_reflective_principal_part(a3_1, reflective_pp)
        assert verdict.passed
        assert verdict.reasons == []

    def test_deep_pole_fails(self, a3_1):
        pp = PrincipalPart.from_mapping({((1,), Fraction(-4, 3)): 1})
        verdict = check_reflective_principal_part(a3_1, pp)
        assert not verdict.passed
        assert any("pole order" in r for r in verdict.reasons)

    def test_negative_coefficient_fails(self, a3_1):
        pp = PrincipalPart.from_mapping({((1,), THIRD): -1})
        assert not check_reflective_principal_part(a3_1, pp).passed

    def test_root_pole_at_zero_coset(self, a3_1):
        # c = 1: q^{-1} e_0 comes from the norm -2 roots of L itself
        pp = PrincipalPart.from_mapping({((0,), Fraction(-1)): 2})
        assert check_reflective_principal_part(a3_1, pp).passed

    def test_pole_on_wrong_coset_fails(self, a3_2):
        pp = PrincipalPart.from_mapping({((1,), Fraction(-2, 3)): 1})
        verdict = check_reflective_principal_part(a3_2, pp)
        assert not verdict.passed
        assert len(verdict.reasons) == 2

    def test_exponent_read_in_dual_convention(self, a3_2):
        # n = -1/3 matches Q(1) = 2/3 but not -Q(1)
        pp = PrincipalPart.from_mapping({((1,), THIRD): 1})
        with pytest.raises(PrincipalPartError):
            check_reflective_principal_part(a3_2, pp)

    def test_empty_passes(self, a3_1):
        assert check_reflective_principal_part(a3_1, PrincipalPart.from_mapping({})).passed

    def test_reflective_pp_is_invariant(self, a3_1, reflective_pp):
        for sigma in orthogonal_group(a3_1):
            assert apply_automorphism_to_principal_part(a3_1, sigma, reflective_pp) == reflective_pp


class TestSymmetrize:
    def test_averaging_breaks_integrality(self, a3_1):
        pp = PrincipalPart.from_mapping({((1,), THIRD): 1}, c00=4)
        averaged = symmetrize(a3_1, pp)
        assert averaged.coefficient((1,), THIRD) == Fraction(1, 2)
        assert averaged.coefficient((2,), THIRD) == Fraction(1, 2)
        assert averaged.c00 == 4
        assert not check_reflective_principal_part(a3_1, averaged).passed
        assert check_reflective_principal_part(a3_1, averaged, relaxed=True).passed

    def test_idempotent(self, a3_1):
        once = symmetrize(a3_1, PrincipalPart.from_mapping({((1,), THIRD): 3}))
        assert symmetrize(a3_1, once) == once

    def test_invariant_input_unchanged(self, a3_1, reflective_pp):
        assert symmetrize(a3_1, reflective_pp) == reflective_pp


class TestHeegner:
    def test_a2_counts(self, a2):
        assert heegner_multiplicity(a2, (1,), Fraction(1, 3)) == 3
        assert heegner_multiplicity(a2, (0,), 1) == 6

    def test_wrong_residue(self, a2):
        assert heegner_multiplicity(a2, (1,), 1) == 0

    def test_non_positive_norm(self, a2):
        with pytest.raises(ValueError):
            heegner_multiplicity(a2, (0,), 0)
