"""Exception hierarchy.

Everything raised for bad input derives from :class:`ValidationError` (CLI exit
code 2); failures of the numerics themselves raise :class:`NumericError`
(exit code 3).
"""


class QPrivacyError(Exception):
    pass


class ValidationError(QPrivacyError, ValueError):
    pass


class DimensionError(ValidationError):
    pass


class ShapeError(ValidationError):
    pass


class SizeLimitError(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class PositivityError(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class NotAChannelError(ValidationError):
    """Kraus operators fail trace preservation; ``residual`` is ||sum K^dag K - I||_max."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class NotCPError(ValidationError):
    def __init__(self, message, eigenvalue):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class PurityError(ValidationError):
    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class NumericError(QPrivacyError, ArithmeticError):
    pass


class ParseError(ValidationError):
    pass
