"""Exception types raised across the package."""


class ErgodicError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ErgodicError, ValueError):
    pass


class NonOrthonormalInput(ErgodicError, ValueError):
    pass


class IncompleteBasis(ErgodicError, ValueError):
    pass


class DuplicatePhase(ErgodicError, ValueError):
    pass


class NotAPairPartition(ErgodicError, ValueError):
    pass


class KTooLarge(ErgodicError, ValueError):
    pass


class BudgetExceeded(ErgodicError, RuntimeError):
    """A multi-index sum would exceed its evaluation budget."""


class NotAnEigenvector(ErgodicError, ValueError):
    pass


class InsufficientLength(ErgodicError, ValueError):
    pass


class ModelNotMaterializable(ErgodicError, TypeError):
    """The requested object has no finite matrix form in this model."""


class NotIsometric(ErgodicError, ValueError):
    pass


class ConfigError(ErgodicError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

    def __str__(self):
        msg = super().__str__()
        return f"{self.field}: {msg}" if self.field else msg
