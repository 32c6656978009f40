"""Exception hierarchy for the toolkit.

The command line maps these classes onto distinct exit codes, so the
class raised is part of the contract: parse problems, validation
problems and estimation problems must stay distinguishable.
"""


class VerdoornError(Exception):
    """Base class for every error the toolkit raises on purpose."""


class PanelParseError(VerdoornError):
    """Structurally broken input row: wrong arity, non-numeric cell."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class PanelValidationError(VerdoornError):
    """Input violates panel invariants (coverage, keys, selections)."""


class EmptySelectionError(PanelValidationError):
    """A sector filter left nothing to estimate on."""


class EstimationError(VerdoornError):
    """Base class for failures inside the estimation layer."""


class SampleTooSmallError(EstimationError):
    """Fewer observations than a bivariate fit needs (n >= 3)."""


class DegenerateRegressorError(EstimationError):
    """Regressor has zero variance; the slope is unidentified."""


class InvalidInputError(EstimationError):
    """Non-finite value where a finite one is required."""


class InvalidComparisonError(EstimationError):
    """Cross-equation checks demand fits from one observation set."""


class InsufficientUnitsError(EstimationError):
    """Leave-one-out diagnostics need at least three regions."""
