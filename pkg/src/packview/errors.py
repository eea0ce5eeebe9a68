"""Exception types raised across packview."""


class PackviewError(Exception):
    """Base class for all packview errors."""


class DomainError(PackviewError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class TimeDomainError(DomainError):
    """Negative time was requested; only forward evolution from t=0 is modeled."""


class InvalidField(PackviewError, ValueError):
    """A wave field holds non-finite amplitudes or has the wrong shape."""


class DegenerateSuperposition(PackviewError, ValueError):
    """A superposition vanishes identically, so it cannot be normalized."""


class InsufficientBasis(PackviewError):
    """An eigenbasis expansion captures too little of the packet's probability."""


class UnstableRun(PackviewError, RuntimeError):
    """A numerical propagation lost norm beyond its tolerance."""


class NoFringes(PackviewError):
    """Fewer than three fringe maxima were found in the analysis window."""


class ConfigError(PackviewError):
    """A scenario configuration failed validation.

    ``errors`` holds every problem found, each already formatted with its
    line number where one is known.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))
