"""Exception types shared across the package."""

from __future__ import annotations


class HetrcError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(HetrcError):
    """Invalid input. Carries every violation found, not just the first."""

    def __init__(self, errors: str | list[str]):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class InfeasibleError(HetrcError):
    """The requested quantity is unattainable; the message names the limit."""


class UnsupportedParameterError(HetrcError):
    """Parameter outside the supported regime, e.g. fractional repair
    traffic in a packet-level plan search."""


class ConstructionImpossibleError(HetrcError):
    """The vertex ordering admits no two-step packet distribution."""


class ConstructionFailedError(HetrcError):
    """No sampled code passed verification within the retry budget."""

    def __init__(self, message: str, last_failure: str | None = None):
        super().__init__(message)
        self.last_failure = last_failure
