# scan_service.py
from app.calculation.borcherds_gate import index_set_sizes, singular_weight_data
from app.calculation.exact_arithmetic import format_rational
from app.calculation.fqm import anisotropic_squarefree_modules, milgram_signature
from app.logger import get_logger
from app.schemas.scan_schema import ScanRow
from app.utils.errors import BoundExceededError
from app.utils.settings import Settings

logger = get_logger(__name__)


class ScanService:
    def __init__(self, settings: Settings):
        self.settings = settings

    def scan(self, max_order: int, signatures: list[int]) -> list[ScanRow]:
        """
        Anisotropic modules of odd square-free order, each paired with the
        signatures s = p - 2 >= 1 that match its Milgram signature mod 8.
        """
        if max_order > self.settings.scan_max_order:
            raise BoundExceededError(f"max_order {max_order} exceeds {self.settings.scan_max_order}")
        rows = []
        for order, components, module in anisotropic_squarefree_modules(max_order):
            sig = milgram_signature(module, self.settings.precision_bits)
            sizes = index_set_sizes(module)
            for s in sorted(set(signatures)):
                if s < 1 or s % 8 != sig:
                    continue
                data = singular_weight_data(s + 2)
                rows.append(ScanRow(
                    order=order,
                    components=[c.label for c in components],
                    milgram_signature=sig,
                    signature=s,
                    p=s + 2,
                    weight=format_rational(data.weight),
                    c00=data.c00,
                    half_c00=format_rational(data.half_c00),
                    index_set_sizes=sizes,
                ))
        logger.info("scan up to order %d: %d rows", max_order, len(rows))
        return rows
