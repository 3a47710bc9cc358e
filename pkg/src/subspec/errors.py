"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Invalid argument or configuration; the message names the offending field."""


class DomainError(ValueError):
    """An index or scan left the range on which a word is actually defined."""


class ResourceLimitError(RuntimeError):
    """A configured size cap would be exceeded."""


class SearchExhaustedError(RuntimeError):
    """A bounded scan finished without finding what it was looking for."""


class NumericalError(RuntimeError):
    """A dense linear algebra routine failed; the message names the block or node."""
