class HyperHeisError(Exception):
    """Base class for engine errors."""


class ParseError(HyperHeisError, ValueError):
    pass


class SpecializationError(HyperHeisError, ValueError):
    """a1 = 0 where an inverse of a1 is required, or a missing parameter value."""


class DomainError(HyperHeisError, ValueError):
    """Index outside the range on which a recursion is defined."""


class ZeroIndexError(HyperHeisError, ValueError):
    pass


class UnclassifiedIndex(HyperHeisError, ValueError):
    pass


class PreconditionError(HyperHeisError, ValueError):
    pass


class StepBudgetExceeded(HyperHeisError, RuntimeError):
    pass
