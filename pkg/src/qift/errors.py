"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """An argument is outside the supported domain (width, order, range)."""


class DomainError(ValueError):
    """A number-theoretic precondition failed, e.g. a non-coprime base."""


class ResourceLimitError(RuntimeError):
    """The requested computation exceeds a configured size ceiling.

    Callers can retry with ``force=True`` where the operation supports it.
    """
