"""Shared exception types for the fenopt package."""


class FenoptError(Exception):
    """Base class for all package errors."""


class ParseError(FenoptError):
    """A file could not be parsed (malformed JSON, bad EPW row, ...)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class ValidationError(FenoptError):
    """An entry violates a type invariant; carries the offending entry id."""

    def __init__(self, message, entry_id=None):
        if entry_id is not None:
            message = f"{entry_id}: {message}"
        super().__init__(message)
        self.entry_id = entry_id


class DegenerateGap(FenoptError):
    """Glazing cavity width is zero or negative."""


class GeometryError(FenoptError):
    """Window/facade geometry is impossible (e.g. glass area <= 0)."""


class EmptyNeighborhood(FenoptError):
    """No legal glazing composition exists for a facade orientation."""


class IncompleteResult(FenoptError):
    """A simulation result is missing a metric the fitness needs."""


class NumericalError(FenoptError):
    """The thermal integration left its stability envelope."""


class ShortFileError(ParseError):
    """Weather file has fewer than 8760 hourly rows."""


class SpawnError(FenoptError):
    """External evaluator command could not be started."""


class ProtocolError(FenoptError):
    """External evaluator produced a malformed or invalid response."""


class EvaluatorTimeout(FenoptError):
    """External evaluator did not answer within the configured timeout."""


class ConfigError(FenoptError):
    """Run configuration is invalid (maps to CLI exit code 2)."""


class EmptyTable(FenoptError):
    """Solution table has no rows."""


class TooFewRows(FenoptError):
    """Not enough rows for the requested statistic."""


class UnknownField(FenoptError):
    """Requested field does not exist in the solution schema."""


class DegenerateSamples(FenoptError):
    """All values identical across both samples; rank test undefined."""


class MismatchedBudgets(FenoptError):
    """Campaigns/runs do not share an evaluation budget."""
