import math
from fractions import Fraction

import mpmath
import pytest

from app.calculation.exact_arithmetic import numeric
from app.calculation.fqm import is_anisotropic
from app.calculation.lattice_core import discriminant_group
from app.calculation.l_diagnostics import (
    K_Ap_factor,
    K_archimedean,
    chi_F_at_pp,
    dirichlet_l_value,
    dirichlet_local_factor,
    eigenvalue_translate,
    l2_norm_assembly,
    nonvanishing_report,
)
from app.enums import FactorSource, TermVerdict
from app.utils.errors import CharacterError, HypothesisError, MissingInputError, PoleError
from tests.conftest import EVEN_RANK_CORPUS


class TestChiF:
    def test_prime_dividing_order(self, a3_1):
        assert chi_F_at_pp(a3_1, 3) == -3

    def test_prime_coprime_to_order(self, a3_1):
        # (2 / 3) = -1
        assert chi_F_at_pp(a3_1, 2) == -1

    def test_trivial_module(self, trivial):
        assert chi_F_at_pp(trivial, 7) == 1

    def test_non_prime(self, a3_1):
        with pytest.raises(ValueError):
            chi_F_at_pp(a3_1, 9)


class TestNonvanishing:
    def test_nonzero_term(self, a3_1):
        report = nonvanishing_report(a3_1, 10, 0, [3])
        (term,) = report.terms
        assert term.exponent == 0
        assert term.term == -2
        assert term.verdict is TermVerdict.nonzero_certified
        assert report.all_nonzero

    def test_exact_cancellation(self, a3_1):
        report = nonvanishing_report(a3_1, 8, 0, [3])
        (term,) = report.terms
        assert term.term.is_zero()
        assert term.interval is None
        assert term.verdict is TermVerdict.zero_certified
        assert not report.all_nonzero

    def test_trivial_module(self, trivial):
        report = nonvanishing_report(trivial, 16, 0, [5])
        assert report.terms[0].exponent == 3
        assert report.terms[0].term == 126

    def test_theorem_regime(self, a3_1):
        assert nonvanishing_report(a3_1, 10, 0, [2]).theorem_regime
        assert not nonvanishing_report(a3_1, 10, 2, [2]).theorem_regime

    def test_odd_m(self, a3_1):
        with pytest.raises(ValueError):
            nonvanishing_report(a3_1, 9, 0, [3])


class TestEigenvalues:
    def test_identity_at_origin(self, a3_1):
        assert eigenvalue_translate(a3_1, 3, 0, 0, 6, 5) == 5

    def test_coprime_prime_scales(self, a3_1):
        # (k, l) = (0, 2): factor p^{-(kappa - 2)}
        assert eigenvalue_translate(a3_1, 2, 0, 2, 4, 8) == 2

    def test_outside_index_set(self, a3_1):
        with pytest.raises(ValueError):
            eigenvalue_translate(a3_1, 3, 1, 2, 6, 1)


class TestLocalFactors:
    def test_dirichlet_values(self):
        assert dirichlet_local_factor(3, 2, 1) == Fraction(9, 8)
        assert dirichlet_local_factor(3, 2, -1) == Fraction(9, 10)
        assert dirichlet_local_factor(3, 2, 0) == 1

    def test_pole(self):
        with pytest.raises(PoleError):
            dirichlet_local_factor(5, 0, 1)

    def test_bad_character_value(self):
        with pytest.raises(CharacterError):
            dirichlet_local_factor(5, 2, 2)

    def test_half_integral_s(self):
        value = dirichlet_local_factor(2, Fraction(1, 2), 1)
        assert value.contains(1 / (1 - 2 ** -0.5), slack=1e-12)

    def test_k_ap(self, a3_1):
        factor = K_Ap_factor(a3_1, 10, 0)
        expected = 1 / (1 / 2186 + 1j / math.sqrt(3))
        assert factor.contains(expected, slack=1e-12)

    def test_k_ap_trivial(self, trivial):
        assert K_Ap_factor(trivial, 10, 0).contains(1)

    def test_k_ap_hypothesis(self, a3_1):
        with pytest.raises(HypothesisError):
            K_Ap_factor(a3_1, 2, 3)


class TestArchimedean:
    def test_values(self, trivial):
        assert K_archimedean(4, 0, trivial).rational_part == Fraction(1, 6)
        assert K_archimedean(6, 1, trivial).rational_part == Fraction(1, 192)

    def test_phase_carries_signature(self, a3_1):
        constant = K_archimedean(4, 0, a3_1)
        assert constant.phase_eighths == 2
        assert constant.disc_order == 3
        assert constant.interval.contains(1j / (6 * math.sqrt(3)), slack=1e-12)

    def test_odd_kappa(self, trivial):
        with pytest.raises(ValueError):
            K_archimedean(5, 0, trivial)

    def test_non_integral_exponent(self, trivial):
        with pytest.raises(HypothesisError):
            K_archimedean(4, Fraction(1, 2), trivial)


def test_dirichlet_l_value_zeta():
    value = dirichlet_l_value(lambda n: 1, 1, 2)
    assert value.contains(math.pi**2 / 6, slack=1e-12)


def test_dirichlet_l_value_needs_convergence():
    with pytest.raises(HypothesisError):
        dirichlet_l_value(lambda n: 1, 1, 1)


class TestL2Norm:
    def test_trivial_module(self, trivial):
        report = l2_norm_assembly(trivial, 8, 0, L_value=1, vol=1, c_s0=1, dirichlet_value=1)
        assert report.value.contains(1 / 6, slack=1e-12)
        sources = {f.name: f.source for f in report.factors}
        assert sources["K_archimedean"] is FactorSource.computed
        assert sources["dirichlet_L"] is FactorSource.supplied

    def test_vanishing_l_value(self, trivial):
        report = l2_norm_assembly(trivial, 8, 0, L_value=0, vol=1, c_s0=1, dirichlet_value=1)
        assert report.value.contains(0)

    def test_missing_inputs(self, trivial):
        with pytest.raises(MissingInputError) as info:
            l2_norm_assembly(trivial, 8, 0, L_value=1)
        assert info.value.missing == ["vol", "c_s0"]

    def test_computed_factors(self, a3_1):
        report = l2_norm_assembly(a3_1, 12, 0, L_value=1, vol=1, c_s0=1)
        names = [f.name for f in report.factors]
        assert names == ["vol", "c_s0", "K_archimedean", "dirichlet_L", "K_A_3", "L_value"]
        computed = {f.name for f in report.factors if f.source is FactorSource.computed}
        assert computed == {"K_archimedean", "dirichlet_L", "K_A_3"}
        assert report.value.excludes_zero()

    def test_even_order_needs_character(self):
        from app.calculation.fqm import JordanComponent, jordan_module
        from app.enums import JordanTag

        c2 = jordan_module(JordanComponent(2, 1, JordanTag.C))
        with pytest.raises(CharacterError):
            l2_norm_assembly(c2, 8, 0, L_value=1, vol=1, c_s0=1)


def _anisotropic_odd_modules(corpus):
    modules = {}
    for name in EVEN_RANK_CORPUS:
        a = discriminant_group(corpus[name])
        if a.order > 1 and a.order % 2 and is_anisotropic(a):
            modules[name] = a
    return modules


@pytest.mark.parametrize("m", [10, 12, 14])
def test_nonvanishing_sweep_matches_direct_evaluation(corpus, m):
    modules = _anisotropic_odd_modules(corpus)
    assert {"A2", "A2+A2", "A4", "A6", "E6"} <= set(modules)
    zeros = []
    for name, a in modules.items():
        for t in nonvanishing_report(a, m, 0, [2, 3, 5, 7]).terms:
            # chi_F(p^2) is a Gaussian integer, so rounding the double embedding is exact
            approx = numeric(t.chi)
            chi = mpmath.mpc(round(approx.real), round(approx.imag))
            with mpmath.workprec(128):
                direct = 1 + chi * mpmath.mpf(t.prime) ** (m // 2 - 5)
            if direct == 0:
                zeros.append((name, t.prime))
                assert t.verdict is TermVerdict.zero_certified
                assert t.term.is_zero()
            else:
                assert t.verdict is TermVerdict.nonzero_certified
                assert t.interval.contains(direct)
                assert t.interval.width < mpmath.mpf(2) ** -100
    if m == 10:
        # 1 + chi with chi = -1 exactly when p is a non-residue mod |A|
        assert ("A2", 2) in zeros and ("A4", 2) in zeros
    else:
        assert zeros == []
