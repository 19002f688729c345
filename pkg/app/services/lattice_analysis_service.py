# lattice_analysis_service.py
from fractions import Fraction
from typing import Optional

from app.calculation.borcherds_gate import (
    PrincipalPart,
    check_converse,
    check_injectivity_hypotheses,
    check_reflective_principal_part,
    check_singular_weight_setting,
    heegner_multiplicity,
    index_set_sizes,
    symmetrize,
)
from app.calculation.exact_arithmetic import as_rational, embed_complex, format_rational
from app.calculation.fqm import (
    Fqm,
    classify_anisotropic,
    gauss_sum,
    is_anisotropic,
    milgram_signature,
    p_primary_decomposition,
)
from app.calculation.lattice_core import (
    GramMatrix,
    coset_vectors,
    discriminant_group,
    find_hyperbolic_split,
    lattice_profile,
)
from app.calculation.theta import coefficient_rows, theta_coefficients, verify_theta_modularity
from app.calculation.weil_rep import build_weil_matrices, rho_of_gamma, verify_relations
from app.logger import get_logger
from app.schemas.common_schema import CycloNumSchema, FqmSchema
from app.schemas.gate_schema import (
    ConverseReportSchema,
    HeegnerResponse,
    HypothesisVerdictSchema,
    InjectivityReportSchema,
    PrincipalPartSchema,
    ReflectiveResponse,
    SingularWeightSchema,
    SingularWeightSettingSchema,
)
from app.schemas.lattice_schema import (
    AnalysisBundle,
    GaussResponse,
    HyperbolicSplitSchema,
    JordanComponentSchema,
    LatticeProfileSchema,
    ModularityReportSchema,
    ThetaResponse,
    ThetaRow,
    WeilResponse,
)
from app.utils.errors import LatticeGateError, SizeLimitError
from app.utils.settings import Settings

logger = get_logger(__name__)

# Weil matrices are only exported and checked up to this size
WEIL_EXPORT_LIMIT = 400


def _matrix_schema(matrix) -> list[list[CycloNumSchema]]:
    return [[CycloNumSchema.from_domain(x) for x in row] for row in matrix]


class LatticeAnalysisService:
    def __init__(self, settings: Settings):
        self.settings = settings

    def _classification(self, a: Fqm) -> tuple[Optional[dict], Optional[str]]:
        classification = {}
        for p, a_p in p_primary_decomposition(a).items():
            try:
                classification[p] = [
                    JordanComponentSchema.from_domain(c)
                    for c in classify_anisotropic(a_p, self.settings.isomorphism_limit)
                ]
            except LatticeGateError as exc:
                return None, f"p = {p}: {exc}"
        return classification, None

    def analyze(self, g: GramMatrix) -> AnalysisBundle:
        profile = lattice_profile(g)
        a = discriminant_group(g)
        logger.info("analyze: rank %d, signature %s, |A| = %d", g.rank, g.signature_pair, a.order)

        try:
            anisotropic = is_anisotropic(a, self.settings.anisotropy_scan_limit)
        except SizeLimitError as exc:
            logger.info("anisotropy undecided: %s", exc)
            anisotropic = None

        classification, note = (None, "module is not anisotropic") if anisotropic is False else self._classification(a)

        relations = None
        if g.rank % 2 == 0 and a.order <= WEIL_EXPORT_LIMIT:
            relations = verify_relations(build_weil_matrices(a, profile.signature % 8)).checks

        split = find_hyperbolic_split(g, self.settings.search_bound)
        return AnalysisBundle(
            profile=LatticeProfileSchema.from_domain(profile),
            fqm=FqmSchema.from_domain(a),
            anisotropic=anisotropic,
            classification=classification,
            classification_note=note,
            milgram_signature=milgram_signature(a, self.settings.precision_bits),
            weil_relations=relations,
            hyperbolic_split=HyperbolicSplitSchema.from_domain(split) if split else None,
            converse=ConverseReportSchema.from_domain(check_converse(g, self.settings.anisotropy_scan_limit)),
        )

    def weil(self, a: Fqm, sig_mod8: Optional[int] = None, gamma=None) -> WeilResponse:
        if a.order > WEIL_EXPORT_LIMIT:
            raise SizeLimitError(f"|A| = {a.order} exceeds the Weil export limit {WEIL_EXPORT_LIMIT}")
        sig = milgram_signature(a, self.settings.precision_bits) if sig_mod8 is None else sig_mod8
        w = build_weil_matrices(a, sig)
        report = verify_relations(w)
        logger.info("weil: |A| = %d, sig %d, relations passed: %s", a.order, w.sig_mod8, report.all_passed)
        return WeilResponse(
            sig_mod8=w.sig_mod8,
            basis=[list(mu) for mu in w.basis],
            rho_T=[CycloNumSchema.from_domain(x) for x in w.rho_T],
            rho_S=_matrix_schema(w.rho_S),
            rho_Z=_matrix_schema(w.rho_Z),
            relations=report.checks,
            rho_gamma=_matrix_schema(rho_of_gamma(w, gamma)) if gamma is not None else None,
        )

    def gauss(self, a: Fqm, d: int = 1) -> GaussResponse:
        value = gauss_sum(a, d)
        logger.info("gauss: |A| = %d, d = %d", a.order, d)
        return GaussResponse(
            d=d,
            order=a.order,
            value=CycloNumSchema.from_domain(value),
            numeric=embed_complex(value, self.settings.precision_bits).to_json(),
            milgram_signature=milgram_signature(a, self.settings.precision_bits),
        )

    def theta(
        self,
        g: GramMatrix,
        n_max,
        z_basis=None,
        tau_samples=None,
        precision_bits: Optional[int] = None,
        tolerance: Optional[float] = None,
    ) -> ThetaResponse:
        n_max = as_rational(n_max)
        basis = [[as_rational(x) for x in row] for row in z_basis] if z_basis is not None else None
        block = theta_coefficients(g, n_max, basis)
        logger.info("theta: rank %d, n_max %s, %d cosets", g.rank, n_max, len(block.cosets))

        modularity = None
        if tau_samples:
            report = verify_theta_modularity(
                g,
                [complex(re, im) for re, im in tau_samples],
                precision_bits or self.settings.precision_bits,
                tolerance=tolerance or self.settings.theta_tolerance,
            )
            modularity = ModularityReportSchema.from_domain(report)
        return ThetaResponse(
            rank=block.rank,
            n_max=format_rational(block.n_max),
            indefinite=block.indefinite,
            rows=[ThetaRow(**row) for row in coefficient_rows(block)],
            modularity=modularity,
        )

    def converse(self, g: GramMatrix) -> ConverseReportSchema:
        report = check_converse(g, self.settings.anisotropy_scan_limit)
        logger.info("converse gate: passed=%s failing=%s", report.passed, report.failing)
        return ConverseReportSchema.from_domain(report)

    def injectivity(self, g: GramMatrix, l: int) -> InjectivityReportSchema:
        report = check_injectivity_hypotheses(g, l, self.settings.anisotropy_scan_limit)
        logger.info("injectivity hypotheses for l=%d: passed=%s", l, report.passed)
        return InjectivityReportSchema.from_domain(report)

    def singular_weight(self, g: GramMatrix) -> SingularWeightSettingSchema:
        setting = check_singular_weight_setting(g, self.settings.search_bound, self.settings.anisotropy_scan_limit)
        if setting.passed and setting.split is None:
            logger.info("gate passed but no hyperbolic split within bound %d", self.settings.search_bound)
        return SingularWeightSettingSchema(
            passed=setting.passed,
            converse=ConverseReportSchema.from_domain(setting.converse),
            q_ranks_bounded=HypothesisVerdictSchema.from_domain(setting.q_ranks_bounded),
            split_found=setting.split is not None,
            weight_data=SingularWeightSchema.from_domain(setting.weight_data) if setting.weight_data else None,
        )

    def reflective(
        self,
        a: Fqm,
        pp: PrincipalPart,
        relaxed: Optional[bool] = None,
        with_symmetrization: bool = False,
    ) -> ReflectiveResponse:
        relaxed = self.settings.relaxed_integrality if relaxed is None else relaxed
        verdict = check_reflective_principal_part(a, pp, relaxed)
        response = ReflectiveResponse(passed=verdict.passed, reasons=verdict.reasons, index_set_sizes=index_set_sizes(a))
        if with_symmetrization:
            averaged = symmetrize(a, pp, self.settings.orthogonal_group_limit)
            averaged_verdict = check_reflective_principal_part(a, averaged, relaxed)
            response.symmetrized = PrincipalPartSchema.from_domain(averaged)
            response.symmetrized_passed = averaged_verdict.passed
            response.symmetrized_reasons = averaged_verdict.reasons
        logger.info("reflective check: |A| = %d, %d terms, passed=%s", a.order, len(pp.terms), verdict.passed)
        return response

    def heegner(self, g: GramMatrix, mu, n, bound: Optional[int] = None) -> HeegnerResponse:
        n = as_rational(n)
        bound = bound or self.settings.search_bound
        multiplicity = heegner_multiplicity(g, tuple(mu), n, bound)
        vectors = coset_vectors(g, tuple(mu), n, bound)
        return HeegnerResponse(
            mu=list(mu),
            n=format_rational(n),
            multiplicity=multiplicity,
            vectors=[[format_rational(Fraction(x)) for x in v] for v in vectors],
        )
