"""Exception hierarchy shared across the package."""

from __future__ import annotations


class RotaError(Exception):
    """Base class for every error raised by this package."""


class InputError(RotaError, ValueError):
    """Malformed user input: bad element ids, bad files, non-basis colour classes."""

    def __init__(self, message: str, path: str | None = None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ContractError(RotaError):
    """An operation was called with its precondition violated."""


class TheoremViolation(RotaError):
    """A bound or structural guarantee that must hold did not.

    Raised when an asserted combinatorial claim fails at runtime. This always
    indicates a bug in an engine or an inconsistent independence oracle.
    """


class PreconditionViolation(TheoremViolation):
    """The caller's theorem-level precondition turned out to be false."""


class StaleCertificateError(RotaError):
    """A certificate or chain was computed against a different family snapshot."""


class BudgetExceeded(RotaError):
    """A brute-force oracle refused an input larger than its budget."""
