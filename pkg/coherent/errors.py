# coherent/errors.py


class CoherentError(Exception):
    """Base class for every error raised by the coherent package."""


class DomainError(CoherentError, ValueError):
    """An input lies outside the domain an operation is defined on."""


class UnsupportedGateError(CoherentError):
    """A gate kind was handed to an operation that does not define it."""


class TruncationWarning(UserWarning):
    """The requested displacement leaks noticeably past the truncated Fock space."""
