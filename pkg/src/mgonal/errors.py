"""Exception hierarchy shared by all modules."""


class MgonalError(Exception):
    """Base class for all library errors."""


class InputError(MgonalError, ValueError):
    """A caller violated an input contract (bad prime, non-primitive form, ...)."""


class ContractError(MgonalError, RuntimeError):
    """A stated precondition (precision, lift premise, ...) does not hold."""


class ResourceError(MgonalError, RuntimeError):
    """An exhaustive computation would exceed its configured budget."""


class AnomalyWarning(UserWarning):
    """A runtime finding worth surfacing (soft property violated, empty search)."""
