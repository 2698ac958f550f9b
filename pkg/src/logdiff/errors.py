"""Exception types shared across the package."""


class DataError(ValueError):
    """Input data has the wrong shape, length or contains non-finite values."""


class DomainError(ValueError):
    """A numeric parameter lies outside the range where the model is defined."""
