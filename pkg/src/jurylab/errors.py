"""Exception hierarchy shared by the library and the CLI."""


class JuryLabError(Exception):
    """Base class for all jurylab errors."""


class DomainError(JuryLabError, ValueError):
    """An input lies outside the domain where a formula is defined."""


class RegionError(DomainError):
    """A three-juror formula was asked about a herding region it does not cover."""


class UnsupportedPriorError(DomainError):
    """The operation is only licensed for the equiprobable prior."""


class ContractError(JuryLabError, ValueError):
    """Caller broke a precondition (length mismatch, unsorted input, ...)."""
