# core/exceptions.py


class HarmonicSpanError(Exception):
    """Base class for every error raised by the span engine"""


class QueryValidationError(HarmonicSpanError, ValueError):
    """A (m, q, r) triple outside the accepted lattice"""
    rule = 'query'

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class MDomainError(QueryValidationError):
    rule = 'm'


class QDomainError(QueryValidationError):
    rule = 'q'


class RDomainError(QueryValidationError):
    rule = 'r'


class MagnitudeCapError(QueryValidationError):
    rule = 'magnitude_cap'


class PrecisionExhausted(HarmonicSpanError):
    """Refinement hit the precision cap without a strict decision"""

    def __init__(self, message, precision_bits=None):
        super().__init__(message)
        self.precision_bits = precision_bits


class RangeTooLarge(HarmonicSpanError, ValueError):
    pass


class CapExceeded(HarmonicSpanError):
    """The exact oracle would need more terms than its budget allows"""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class EnclosureDomainError(HarmonicSpanError, ValueError):
    pass


class BracketingError(HarmonicSpanError):
    """Binary search ended without a Less/Greater pair around the answer"""
