# lfactor_service.py
from typing import Callable, Optional

from app.calculation.fqm import Fqm, quadratic_character
from app.calculation.l_diagnostics import l2_norm_assembly, nonvanishing_report
from app.enums import ChiConvention
from app.logger import get_logger
from app.schemas.lfactor_schema import L2NormResponse, NonvanishingReportSchema
from app.utils.errors import CharacterError
from app.utils.settings import Settings

logger = get_logger(__name__)


def parse_chi_spec(spec: str, a: Fqm) -> tuple[Callable[[int], int], int, ChiConvention]:
    """
    ``jacobi`` (n -> (n/|A|)), ``trivial`` or ``table:v0,v1,...`` with the
    values chi(0), chi(1), ... over one period.
    """
    spec = spec.strip()
    if spec == ChiConvention.jacobi.value:
        return quadratic_character(a), a.order, ChiConvention.jacobi
    if spec == ChiConvention.trivial.value:
        return (lambda n: 1), 1, ChiConvention.trivial
    if spec.startswith(ChiConvention.table.value + ":"):
        try:
            values = [int(v) for v in spec.split(":", 1)[1].split(",")]
        except ValueError as exc:
            raise CharacterError(f"cannot read character table {spec!r}") from exc
        if not values or any(v not in (-1, 0, 1) for v in values):
            raise CharacterError("character table values must be -1, 0 or 1")
        period = len(values)
        return (lambda n: values[n % period]), period, ChiConvention.table
    raise CharacterError(f"unknown character convention {spec!r}")


class LFactorService:
    def __init__(self, settings: Settings):
        self.settings = settings

    def nonvanishing(self, a: Fqm, m: int, l: int, primes: list[int],
                     precision_bits: Optional[int] = None) -> NonvanishingReportSchema:
        report = nonvanishing_report(a, m, l, primes, precision_bits or self.settings.precision_bits)
        logger.info("nonvanishing: |A| = %d, m = %d, l = %d, all nonzero: %s", a.order, m, l, report.all_nonzero)
        return NonvanishingReportSchema.from_domain(report)

    def l2_norm(
        self,
        a: Fqm,
        m: int,
        l: int,
        L_value=None,
        vol=None,
        c_s0=None,
        dirichlet_value=None,
        chi_spec: str = "jacobi",
        precision_bits: Optional[int] = None,
    ) -> L2NormResponse:
        chi = period = None
        if dirichlet_value is None:
            chi, period, convention = parse_chi_spec(chi_spec, a)
            logger.info("chi_A convention: %s", convention.value)
        report = l2_norm_assembly(
            a,
            m,
            l,
            L_value=L_value,
            vol=vol,
            c_s0=c_s0,
            dirichlet_value=dirichlet_value,
            chi_a=chi,
            chi_period=period,
            precision_bits=precision_bits or self.settings.precision_bits,
        )
        logger.info("l2 norm assembly: |A| = %d, m = %d, l = %d, %d factors", a.order, m, l, len(report.factors))
        return L2NormResponse.from_domain(report)
