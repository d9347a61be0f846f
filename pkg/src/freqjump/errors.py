class FreqJumpError(Exception):
    """Base class for errors raised by freqjump."""


class DomainError(FreqJumpError, ValueError):
    """A parameter lies outside the physical domain of the model."""


class NonPureStateError(FreqJumpError, ValueError):
    pass


class TruncationError(FreqJumpError):
    """The Fock-space cutoff is too small for the requested state."""

    def __init__(self, message, required_cutoff=None):
        super().__init__(message)
        self.required_cutoff = required_cutoff


class ComparisonUndefinedError(FreqJumpError, ValueError):
    """The resource-matched comparison has no squeezing energy to match."""
