"""Exception types shared across the package."""


class UnidiscError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(UnidiscError):
    """Operands have incompatible shapes or subsystem dimensions."""


class OperatorsEqual(UnidiscError):
    """The two operators agree up to a global phase; discrimination is undefined."""


class NotSingleRunDiscriminable(UnidiscError):
    """The spectral arc of U^dag V is below pi; no single-run input exists."""


class EigendecompositionError(UnidiscError):
    """The eigensolver failed or its output did not reconstruct the input."""


class WitnessNotFound(UnidiscError):
    """No product input with entangled image was located within the scan budget."""


class SynthesisFailed(UnidiscError):
    """Sequential-scheme synthesis exhausted its budget above tolerance."""

    def __init__(self, message, best_overlap=None):
        super().__init__(message)
        self.best_overlap = best_overlap


class CompileFailed(UnidiscError):
    """Circuit-word compilation exhausted its budget above tolerance."""

    def __init__(self, message, best_error=None, best_word=None):
        super().__init__(message)
        self.best_error = best_error
        self.best_word = best_word


class ParseError(UnidiscError):
    """An input file is structurally malformed."""


class ValidationError(UnidiscError):
    """An input file parsed but violates a contract (unitarity, dims, ...)."""
