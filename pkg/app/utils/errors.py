"""Exception hierarchy shared by the calculation modules, services, API and CLI."""


class LatticeGateError(Exception):
    """Base class for every domain error raised by the package."""


class InvalidLatticeError(LatticeGateError):
    """Gram matrix is not square, not symmetric or not even."""


class DegenerateLatticeError(LatticeGateError):
    """Gram matrix has determinant zero."""


class InvalidModuleError(LatticeGateError):
    """Finite quadratic module data is inconsistent."""


class SizeLimitError(LatticeGateError):
    """An exhaustive search would exceed its configured limit."""


class NotAnisotropicError(LatticeGateError):
    pass


class UnsupportedClassificationError(LatticeGateError):
    pass


class InconsistentSignatureError(LatticeGateError):
    """Milgram signature disagrees with the requested or expected signature."""


class UnsupportedSignatureError(LatticeGateError):
    """Odd signatures need the metaplectic cover, which is not implemented."""


class CharacterError(LatticeGateError):
    pass


class PoleError(LatticeGateError):
    pass


class InconclusiveError(LatticeGateError):
    """Interval evaluation could not decide a sign even at the precision ceiling."""


class HypothesisError(LatticeGateError):
    pass


class MissingInputError(LatticeGateError):
    def __init__(self, missing: list[str]):
        self.missing = list(missing)
        super().__init__(f"missing inputs: {', '.join(self.missing)}")


class InsufficientTruncationError(LatticeGateError):
    def __init__(self, required_n_max: int, message: str | None = None):
        self.required_n_max = required_n_max
        super().__init__(message or f"truncation too small, need n_max >= {required_n_max}")


class ThetaRequestError(LatticeGateError):
    pass


class PrincipalPartError(LatticeGateError):
    pass


class BoundExceededError(LatticeGateError):
    pass
