"""Exception hierarchy. CLI exit codes hang off these classes."""


class ReprError(Exception):
    """Base class for library errors."""


class LimitExceeded(ReprError):
    """A configured resource limit would be exceeded."""


class BoundaryMismatch(ReprError, ValueError):
    """Morphism boundaries do not line up."""


class PoleError(ReprError, ZeroDivisionError):
    """A rational function was evaluated at a root of its denominator."""


class InconsistentData(ReprError, ValueError):
    """Input data contradicts a stated bound or structure."""


class NotASubgroup(ReprError, ValueError):
    pass


class PreconditionError(ReprError, ValueError):
    pass


class DeciderDisagreement(ReprError):
    """Two independent decision procedures returned different answers."""
