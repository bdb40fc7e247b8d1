"""Exception hierarchy shared by every module of the package."""


class ZariskiError(Exception):
    """Base class for all errors raised by this package."""


class SingularMatrix(ZariskiError):
    pass


class NotSymmetric(ZariskiError):
    pass


class NotNegativeDefinite(ZariskiError):
    pass


class DimensionMismatch(ZariskiError):
    pass


class NotPseudoEffective(ZariskiError):
    """The decomposition algorithm hit an inconsistency.

    ``witness`` names the check that failed, e.g. ``"negative coefficient"``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class OracleLimitExceeded(ZariskiError):
    pass


class EnumerationTooLarge(ZariskiError):
    def __init__(self, message, required):
        super().__init__(message)
        self.required = required


class ZeroClass(ZariskiError):
    pass


class InvalidParameter(ZariskiError, ValueError):
    pass


class ParseError(ZariskiError, ValueError):
    pass


class ValidationError(ZariskiError, ValueError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)
