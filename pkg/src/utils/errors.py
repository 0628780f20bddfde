"""
Error hierarchy shared by every service.

Services raise these; the CLI layer maps them onto exit codes
(see handlers.common.handle_errors).
"""


class UogError(Exception):
    """Base class for all library errors."""


class DomainError(UogError, ValueError):
    """Input outside the mathematical domain of an operation."""


class NotSquarefreeError(DomainError):
    """Polynomial is not squarefree; callers that sample may retry."""


class CorruptEncodingError(UogError, ValueError):
    """Encoded element failed to decode into a valid element."""


class InexactSquareRootError(CorruptEncodingError):
    """Decompression needed a perfect square and got something else."""


class NonInvertibleError(CorruptEncodingError):
    """A value that must be a unit modulo some modulus is not."""


class DiscriminantMismatchError(CorruptEncodingError):
    """Recovered form does not have the expected discriminant."""


class InconsistentSignBitsError(CorruptEncodingError):
    """Root selection bits do not match the residue structure of u."""


class GroupMismatchError(UogError, TypeError):
    """Elements from different groups were combined."""


class ResourceLimitError(UogError):
    """A configured size or memory bound would be exceeded."""


class GenerationError(UogError):
    """Trustless generation did not converge within its iteration bound."""


class ConfigurationError(UogError):
    """Requested feature is disabled by configuration."""


class InternalError(UogError):
    """A computed result violates a bound that always holds for correct arithmetic."""
