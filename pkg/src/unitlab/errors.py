"""Exception hierarchy shared by every unitlab module."""


class UnitLabError(Exception):
    """Base class for all library errors."""


class PreconditionError(UnitLabError):
    """An operation was called on inputs outside its hypotheses."""


class OddPrimeRequired(PreconditionError):
    """The operation needs p > 2 but received a 2-group."""


class CapExceeded(UnitLabError):
    """A construction would exceed the configured group-order cap."""


class NotAUnit(UnitLabError):
    """Inversion was requested for an element of augmentation zero."""


class GroupMismatch(UnitLabError):
    """Algebra elements over different groups were combined."""


class InconsistentInvariants(UnitLabError):
    """A unit-invariant tuple cannot come from a group satisfying the hypotheses."""


class SpecError(UnitLabError):
    """A group-spec string failed to parse or evaluate."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class VerificationFailed(UnitLabError):
    """An identity that must hold exactly was found to fail."""
