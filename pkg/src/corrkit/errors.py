"""Exception types shared across the toolkit."""


class CorrkitError(Exception):
    """Base class for all toolkit errors."""


class ValidationFailed(CorrkitError):
    """A label sequence failed validation where a clean one was required."""

    def __init__(self, report):
        self.report = report
        codes = ", ".join(v.code for v in report.violations)
        super().__init__(f"label sequence failed validation: {codes}")


class ParseError(CorrkitError):
    """A data file could not be parsed at all."""


class SchemaError(CorrkitError):
    """A data file parsed but violates the expected schema."""


class SlotMismatch(CorrkitError):
    """A correction template references a slot absent from the request."""


class EmptyEntity(CorrkitError):
    """An entity surface form with no tokens was supplied."""


class InsufficientCombinations(CorrkitError):
    """The requested sample size exceeds the distinct combination space."""


class EmptyTrainingSet(CorrkitError):
    """Training was requested on zero records."""


class FormatError(CorrkitError):
    """A model file has a bad magic header, version, or is truncated."""


class ProtocolError(CorrkitError):
    """An external tagger sent a line violating the tagger/1 protocol."""


class AdapterCrashed(CorrkitError):
    """The external tagger process exited or timed out."""
