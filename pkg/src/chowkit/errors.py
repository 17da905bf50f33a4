"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input violates the documented precondition of an operation."""


class RingMismatchError(PreconditionError):
    """Two classes from different Chow rings were combined."""


class IntegrityError(RuntimeError):
    """A computed quantity contradicts an identity that must hold exactly."""
