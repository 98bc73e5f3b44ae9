"""Exception types raised across the package."""


class AgelabError(Exception):
    """Base class for all errors raised by agelab."""


class DomainError(AgelabError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionExhausted(AgelabError, IndexError):
    """A bit tape does not hold the requested coordinate."""


class EmptyFuture(PrecisionExhausted):
    """No x-bits are left to feed a forward Baker step."""


class EmptyPast(PrecisionExhausted):
    """No y-bits are left to feed an inverse Baker step."""


class AgeUndefinedForEquilibrium(AgelabError, ValueError):
    """The age operator was applied to an expansion with a constant term."""


class InvalidSubspace(AgelabError, ValueError):
    """An expansion is not contained in the required Hardy subspace."""


class EmptyExpansion(AgelabError, ValueError):
    """An operation needs a nonzero expansion."""


class DecayViolation(AgelabError, ValueError):
    """Samples do not decay enough at the edge of their grid."""


class GridMismatch(AgelabError, ValueError):
    """Operands live on incompatible grids or channels."""


class ZeroState(AgelabError, ValueError):
    """A normalization was requested for the zero state."""


class WindowOverflow(AgelabError, ValueError):
    """A shift would wrap mass around the periodic age window.

    ``t`` holds the offending evolution time when known.
    """

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ConfigError(AgelabError, ValueError):
    """Invalid experiment configuration; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
