"""Exception hierarchy.

Every library-raised error derives from :class:`PlmnetError` so callers can
catch broadly; the CLI maps the subclasses onto disjoint exit codes.
"""


class PlmnetError(Exception):
    """Base class for all plmnet errors."""


class SchemaError(PlmnetError, ValueError):
    """A CSV schema is malformed or names columns absent from the file."""


class IngestionError(PlmnetError, ValueError):
    """A cell failed to parse as a finite real; carries its location."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class DegenerateColumnError(PlmnetError, ValueError):
    """A design column has zero sample variance and cannot be standardized."""


class DimensionError(PlmnetError, ValueError):
    """Array shapes disagree with each other or with the originating design."""


class InvalidPenaltyError(PlmnetError, ValueError):
    """A penalty specification violates its method's constraints."""


class EmptyNeighborhoodError(PlmnetError, ValueError):
    """A bounded-support kernel found no training point near an evaluation point."""


class PlanError(PlmnetError, ValueError):
    """A cross-validation plan is infeasible (e.g. more folds than rows)."""


class DegenerateGridError(PlmnetError, ValueError):
    """The penalty grid cannot be built because the response is all zero."""


class GroupEffectUndefinedError(PlmnetError, ValueError):
    """The group-effect bound is undefined (requires a positive ridge penalty)."""


class ConfigurationError(PlmnetError, ValueError):
    """A generator or experiment configuration is infeasible."""


class ExperimentError(PlmnetError, RuntimeError):
    """An experiment run failed its own sanity policy (too many failed replicates)."""
