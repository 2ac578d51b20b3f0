"""Exception hierarchy shared by all modules."""


class NetgameError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(NetgameError):
    """An input violates a documented precondition or format."""


class GuardError(NetgameError):
    """An exhaustive operation would exceed its hard size guard."""


class ConstructionError(NetgameError):
    """A bounded-attempt constructive procedure ran out of attempts."""


class SimulationFault(NetgameError):
    """Internal consistency of a simulation was violated (indicates a bug)."""
